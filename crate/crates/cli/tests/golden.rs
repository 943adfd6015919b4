//! Runs the documented CLI examples and compares stdout with the files in
//! `tests/golden`. Set `L2LAB_BLESS=1` to rewrite them.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn l2lab(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_l2lab"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("L2LAB_MAX_CELLS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

/// Runs `a | b | ...`, asserting every stage but the last succeeds.
fn pipe(stages: &[&[&str]]) -> Run {
    let mut input = String::new();
    for (i, args) in stages.iter().enumerate() {
        let r = l2lab(args, &input, &[]);
        if i + 1 == stages.len() {
            return r;
        }
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        input = r.stdout;
    }
    unreachable!("no stages")
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("L2LAB_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {name}");
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("l2lab-golden-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn octahedron_script_verifies() {
    let r = pipe(&[&["script", "octahedron", "-n", "3"], &["verify", "-"]]);
    assert_eq!(r.code, 0);
    golden("octahedron_verify.txt", &r.stdout);
}

#[test]
fn cube_skeleton_certificate() {
    let r = pipe(&[&["build", "cube-1-skeleton"], &["certify", "-", "--trivalent"]]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("cube_trivalent.json", &r.stdout);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["certificate"]["conclusion"]["degrees"][2], "zero");
    let checked = l2lab(&["verify", "-"], &r.stdout, &[]);
    assert_eq!(checked.code, 0);
    assert!(checked.stdout.starts_with("PASS"));
}

#[test]
fn k33_gives_witness() {
    let r = pipe(&[&["build", "K33"], &["certify", "-", "--trivalent"]]);
    assert_eq!(r.code, 0);
    golden("k33_witness.json", &r.stdout);
}

#[test]
fn pentagon_davis_homology() {
    let r = pipe(&[&["build", "polygon", "5"], &["davis", "pl", "-"], &["homology", "-", "--integral"]]);
    assert_eq!(r.code, 0);
    golden("c5_homology.txt", &r.stdout);
}

#[test]
fn pentagon_growth_table() {
    let dir = scratch("growth");
    let c5 = dir.join("c5.json");
    std::fs::write(&c5, l2lab(&["build", "polygon", "5"], "", &[]).stdout).unwrap();
    let r = l2lab(&["growth", "--base", c5.to_str().unwrap(), "--tower", "p=3,k=1..2"], "", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("c5_growth.txt", &r.stdout);
}

#[test]
fn hexagon_subdivision_info() {
    let r = pipe(&[&["build", "polygon", "4"], &["subdivide", "-", "--edge", "1,2"], &["info", "-"]]);
    assert_eq!(r.code, 0);
    golden("c4_subdivide_info.txt", &r.stdout);
}

#[test]
fn derive_barycentric_triangle() {
    let r = pipe(&[&["build", "boundary-simplex", "2"], &["barycentric", "-"], &["certify", "-"]]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = l2lab(&["verify", "-"], &r.stdout, &[]);
    golden("b_triangle_verify.txt", &text.stdout);
}

#[test]
fn torsion_chain_of_covers() {
    let dir = scratch("torsion");
    let c4 = l2lab(&["build", "polygon", "4"], "", &[]).stdout;
    let pl = l2lab(&["davis", "pl", "-"], &c4, &[]).stdout;
    for k in 1..=2 {
        let e = k.to_string();
        let cover = l2lab(&["davis", "cover", "--base", "-", "--p", "3", "--exponents", &e], &pl, &[]);
        assert_eq!(cover.code, 0, "{}", cover.stderr);
        std::fs::write(dir.join(format!("cover{k}.json")), cover.stdout).unwrap();
    }
    let r = l2lab(&["torsion", "--chain", dir.to_str().unwrap(), "--n", "1", "--p", "3"], "", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("c4_torsion.txt", &r.stdout);
}

#[test]
fn report_tables_and_missing_artifacts() {
    let dir = scratch("report");
    let c5 = l2lab(&["build", "polygon", "5"], "", &[]).stdout;
    std::fs::write(dir.join("c5.json"), &c5).unwrap();
    let script = l2lab(&["script", "octahedron", "-n", "2"], "", &[]).stdout;
    std::fs::write(dir.join("script.json"), script).unwrap();
    let cert = l2lab(&["certify", "-"], &c5, &[]).stdout;
    std::fs::write(dir.join("cert.json"), cert).unwrap();
    let r = l2lab(&["report", dir.to_str().unwrap()], "", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("report.md", &r.stdout);

    let empty = scratch("empty");
    let r = l2lab(&["report", empty.to_str().unwrap()], "", &[]);
    assert_eq!(r.code, 2);
    let d: serde_json::Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(d["error"], "MissingArtifacts");
}

#[test]
fn exit_codes() {
    // input error
    let r = l2lab(&["build", "nonexistent"], "", &[]);
    assert_eq!(r.code, 2);
    assert_eq!(serde_json::from_str::<serde_json::Value>(r.stderr.trim()).unwrap()["exit_code"], 2);
    let r = l2lab(&["info", "-"], "{not json", &[]);
    assert_eq!(r.code, 2);

    // verification failure: a certificate whose claim was edited
    let c5 = l2lab(&["build", "polygon", "5"], "", &[]).stdout;
    let cert = l2lab(&["certify", "-"], &c5, &[]).stdout;
    let forged = cert.replacen("{\n        \"exact\": \"1/4\"\n      }", "\"zero\"", 1);
    assert_ne!(forged, cert);
    let r = l2lab(&["verify", "-"], &forged, &[]);
    assert_eq!(r.code, 3, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.starts_with("FAIL"));

    // resource bounds: derivation budget and the cell bound
    let pet = l2lab(&["build", "petersen"], "", &[]).stdout;
    assert_eq!(l2lab(&["certify", "-", "--budget", "1"], &pet, &[]).code, 4);
    let r = l2lab(&["davis", "pl", "-"], &c5, &[("L2LAB_MAX_CELLS", "10")]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn outputs_are_deterministic() {
    let a = pipe(&[&["build", "octahedron", "3"], &["certify", "-"]]);
    let b = pipe(&[&["build", "octahedron", "3"], &["certify", "-"]]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}
