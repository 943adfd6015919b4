//! Markdown summaries of artifact directories.

use std::fmt::Write as _;
use std::path::PathBuf;

use l2lab::calculus::{verify, Certificate, TorsionReport, TrivalentOutcome};
use l2lab::davis::CubeComplex;
use l2lab::homology::{GrowthSeries, HomologySummary};
use l2lab::subdivision::{verify_script, SubdivisionScript};
use l2lab::SimplicialComplex;
use serde::Serialize;
use serde_json::Value;

use crate::commands::Output;
use crate::error::{CliError, CliResult};
use crate::io::load_value;

/// `*.json` files of `dir`, sorted by name.
pub fn json_files(dir: &str) -> CliResult<Vec<PathBuf>> {
    let io = |source| CliError::Io { path: dir.to_string(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

#[derive(Default, Serialize)]
struct Tables {
    complexes: Vec<(String, Vec<usize>, i64)>,
    cube_complexes: Vec<(String, u64, Vec<usize>, i64)>,
    homology: Vec<(String, Vec<usize>, bool)>,
    growth: Vec<(String, GrowthSeries)>,
    certificates: Vec<(String, String, bool)>,
    scripts: Vec<(String, usize, bool)>,
    torsion: Vec<(String, String)>,
}

fn name(p: &std::path::Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn parse<T: serde::de::DeserializeOwned>(v: Value) -> Option<T> {
    serde_json::from_value(v).ok()
}

fn statuses(c: &Certificate) -> String {
    c.conclusion.degrees.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

fn classify(t: &mut Tables, file: String, v: Value) -> bool {
    if v.get("steps").is_some() {
        if let Some(s) = parse::<SubdivisionScript>(v) {
            t.scripts.push((file, s.len(), verify_script(&s).passed()));
            return true;
        }
    } else if v.get("conclusion").is_some() {
        if let Some(c) = parse::<Certificate>(v) {
            t.certificates.push((file, statuses(&c), verify(&c).passed()));
            return true;
        }
    } else if v.get("outcome").is_some() {
        match parse::<TrivalentOutcome>(v) {
            Some(TrivalentOutcome::Certificate { certificate }) => {
                t.certificates.push((file, statuses(&certificate), verify(&certificate).passed()));
                return true;
            }
            Some(TrivalentOutcome::K33 { .. }) => {
                t.certificates.push((file, "K33 witness".into(), true));
                return true;
            }
            None => {}
        }
    } else if v.get("counts").is_some() {
        if let Some(x) = parse::<CubeComplex>(v) {
            let e = x.euler_characteristic();
            t.cube_complexes.push((file, x.index, x.counts().to_vec(), e));
            return true;
        }
    } else if v.get("maximal_simplices").is_some() {
        if let Some(l) = parse::<SimplicialComplex>(v) {
            t.complexes.push((file, l.f_vector().proper().to_vec(), l.euler_characteristic()));
            return true;
        }
    } else if v.get("betti_q").is_some() {
        if let Some(h) = parse::<HomologySummary>(v) {
            let free = h.is_torsion_free();
            t.homology.push((file, h.betti_q, free));
            return true;
        }
    } else if v.get("rows").is_some() && v.get("verdict").is_some() {
        if let Some(r) = parse::<TorsionReport>(v) {
            t.torsion.push((file, r.verdict));
            return true;
        }
    } else if v.get("rows").is_some() {
        if let Some(s) = parse::<GrowthSeries>(v) {
            t.growth.push((file, s));
            return true;
        }
    }
    false
}

fn list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn markdown(t: &Tables) -> String {
    let mut m = String::new();
    let mut section = |title: &str, header: &str, rows: Vec<String>| {
        if rows.is_empty() {
            return;
        }
        let cols = header.matches('|').count() - 1;
        let _ = writeln!(m, "## {title}\n\n{header}\n|{}", "---|".repeat(cols));
        for r in rows {
            let _ = writeln!(m, "{r}");
        }
        m.push('\n');
    };
    section(
        "Complexes",
        "| file | f-vector | euler |",
        t.complexes.iter().map(|(f, v, e)| format!("| {f} | {} | {e} |", list(v))).collect(),
    );
    section(
        "Cube complexes",
        "| file | index | cells | euler |",
        t.cube_complexes.iter().map(|(f, d, c, e)| format!("| {f} | {d} | {} | {e} |", list(c))).collect(),
    );
    section(
        "Homology",
        "| file | betti | torsion-free |",
        t.homology.iter().map(|(f, b, free)| format!("| {f} | {} | {free} |", list(b))).collect(),
    );
    section(
        "Growth",
        "| file | degree | b_Q/d | b_Fp/d |",
        t.growth
            .iter()
            .flat_map(|(f, s)| {
                s.rows
                    .iter()
                    .map(move |r| format!("| {f} | {} | {} | {} |", r.degree, list(&r.betti_q), list(&r.betti_fp)))
            })
            .collect(),
    );
    section(
        "Certificates",
        "| file | conclusion | verified |",
        t.certificates.iter().map(|(f, c, ok)| format!("| {f} | {c} | {ok} |")).collect(),
    );
    section(
        "Scripts",
        "| file | steps | verified |",
        t.scripts.iter().map(|(f, n, ok)| format!("| {f} | {n} | {ok} |")).collect(),
    );
    section("Torsion", "| file | verdict |", t.torsion.iter().map(|(f, v)| format!("| {f} | {v} |")).collect());
    m
}

pub fn report(dir: &str) -> CliResult<Output> {
    let mut t = Tables::default();
    let mut found = 0;
    for path in json_files(dir)? {
        let v = load_value(&path.display().to_string())?;
        if classify(&mut t, name(&path), v) {
            found += 1;
        }
    }
    if found == 0 {
        return Err(l2lab::Error::MissingArtifacts(format!("no recognized JSON artifacts in {dir}")).into());
    }
    let text = markdown(&t);
    Ok(Output {
        json: serde_json::to_value(&t).map_err(|e| CliError::Input(e.to_string()))?,
        text,
        artifact: false,
        code: 0,
    })
}
