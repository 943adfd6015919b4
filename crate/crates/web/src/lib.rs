//! Browser bindings: catalog lookup, certificate derivation and octahedron
//! scripts. Each operation takes and returns JSON strings; the plain
//! functions are what the exports wrap, so they test natively.

use l2lab::calculus::{derive, verify, Goal};
use l2lab::complex::special_complex;
use l2lab::davis::euler_l2;
use l2lab::subdivision::{script_octahedron, verify_script};
use l2lab::SimplicialComplex;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest octahedron the page will script.
pub const MAX_OCTAHEDRON: usize = 5;

#[derive(Serialize)]
struct ComplexView {
    complex: SimplicialComplex,
    f_vector: Vec<usize>,
    flag: bool,
    euler_l2: String,
}

#[derive(Serialize)]
struct CertificateView {
    degrees: Vec<String>,
    nodes: usize,
    verified: bool,
    rules: Vec<String>,
    certificate: serde_json::Value,
}

#[derive(Serialize)]
struct ScriptView {
    steps: Vec<[String; 2]>,
    verified: bool,
    target_f_vector: Vec<usize>,
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn catalog_json(name: &str, param: Option<usize>) -> Result<String, String> {
    let c = special_complex(name, param).map_err(|e| e.to_string())?.complex;
    json(&ComplexView {
        f_vector: c.f_vector().proper().to_vec(),
        flag: c.is_flag(),
        euler_l2: euler_l2(&c).to_string(),
        complex: c,
    })
}

pub fn certify_json(complex: &str, characteristic: u64) -> Result<String, String> {
    let l: SimplicialComplex = serde_json::from_str(complex).map_err(|e| e.to_string())?;
    let cert = match derive(&l, characteristic, Goal::All) {
        Ok(c) => c,
        Err(f) => *f.partial.ok_or(f.reason)?,
    };
    let report = verify(&cert);
    json(&CertificateView {
        degrees: cert.conclusion.degrees.iter().map(|s| s.to_string()).collect(),
        nodes: report.nodes,
        verified: report.passed(),
        rules: cert.rules_used().into_iter().map(String::from).collect(),
        certificate: serde_json::to_value(&cert).map_err(|e| e.to_string())?,
    })
}

pub fn octahedron_json(n: usize) -> Result<String, String> {
    if n > MAX_OCTAHEDRON {
        return Err(format!("n = {n} is above the page limit of {MAX_OCTAHEDRON}"));
    }
    let s = script_octahedron(n, &SimplicialComplex::empty()).map_err(|e| e.to_string())?;
    let report = verify_script(&s);
    json(&ScriptView {
        steps: s.steps.iter().map(|st| [st.edge[0].to_string(), st.edge[1].to_string()]).collect(),
        verified: report.passed(),
        target_f_vector: report.final_f_vector.unwrap_or_default(),
    })
}

/// Catalog complex by name; `param` below zero means none.
#[wasm_bindgen]
pub fn catalog(name: &str, param: i32) -> Result<String, JsError> {
    catalog_json(name, usize::try_from(param).ok()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(complex: &str, characteristic: u32) -> Result<String, JsError> {
    certify_json(complex, characteristic.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn octahedron_script(n: u32) -> Result<String, JsError> {
    octahedron_json(n as usize).map_err(|e| JsError::new(&e))
}
