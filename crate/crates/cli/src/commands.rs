use std::collections::BTreeSet;
use std::fmt::Write as _;

use l2lab::calculus::{
    derive_with, minimally_branching_decision, torsion_bookkeeping, trivalent_decision, verify, BettiKnowledge,
    BranchingOutcome, Certificate, CertificateReport, DeriveOptions, Goal, TrivalentOutcome,
};
use l2lab::complex::{catalog_names, special_complex};
use l2lab::davis::{
    abelian_p_cover_bounded, basic_construction_bounded, canonical_quotient, chamber, euler_l2, CubeComplex,
    FiniteQuotient,
};
use l2lab::homology::{betti_with_jobs, growth_series_with, integral_homology_with, Field, HomologySummary};
use l2lab::subdivision::{
    relative_barycentric, script_octahedron, script_relative, script_twosubs, sub_edge, verify_script,
    SubdivisionScript,
};
use l2lab::{Simplex, SimplicialComplex, VertexId};
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::io::{labels, load, load_complex, load_value, write_text};
use crate::{Command, DavisKind, FieldArg, Global, ScriptKind};

/// What a command produced.
pub struct Output {
    pub json: Value,
    pub text: String,
    /// Artifact commands print JSON by default, report commands text.
    pub artifact: bool,
    pub code: u8,
}

impl Output {
    fn artifact<T: Serialize>(value: &T, text: String) -> CliResult<Self> {
        Ok(Output { json: to_value(value)?, text, artifact: true, code: 0 })
    }

    fn report<T: Serialize>(value: &T, text: String) -> CliResult<Self> {
        Ok(Output { json: to_value(value)?, text, artifact: false, code: 0 })
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Input(e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize") + "\n"
}

pub fn emit(out: Output, g: &Global) -> CliResult<u8> {
    if let Some(path) = &g.out {
        write_text(path, &pretty(&out.json))?;
        print!("{}", out.text);
    } else if out.artifact || g.json {
        print!("{}", pretty(&out.json));
    } else {
        print!("{}", out.text);
    }
    Ok(out.code)
}

pub fn run(cmd: Command, g: &Global) -> CliResult<Output> {
    match cmd {
        Command::Build { name, param, from, flag } => build(name, param, from, flag),
        Command::Info { complex, catalog } => info(complex, catalog),
        Command::Link { complex, simplex } => {
            let l = load_complex(&complex)?;
            let s = Simplex::new(labels(&simplex).into_iter().map(VertexId::from));
            complex_output(&l.link(&s)?)
        }
        Command::Join { left, right } => complex_output(&load_complex(&left)?.join(&load_complex(&right)?)),
        Command::Subdivide { complex, edge } => {
            let l = load_complex(&complex)?;
            let e = labels(&edge);
            if e.len() != 2 {
                return Err(CliError::Input(format!("--edge needs two vertices, got `{edge}`")));
            }
            complex_output(&sub_edge(&l, &Simplex::from_labels(&e))?)
        }
        Command::Barycentric { complex, rel, script } => {
            let l = load_complex(&complex)?;
            let k = optional_complex(rel.as_deref())?;
            if script {
                script_output(&script_relative(&l, &k)?)
            } else {
                complex_output(&relative_barycentric(&l, &k)?)
            }
        }
        Command::Script { kind } => script(kind),
        Command::Verify { file } => verify_file(&file),
        Command::Davis { kind } => davis(kind, g),
        Command::Homology { complex, field, p, integral } => homology(&complex, field, p, integral, g),
        Command::Growth { base, tower } => growth(&base, &tower, g),
        Command::Certify { complex, characteristic, goal, trivalent, branching, assume_sphere, budget } => {
            let l = load_complex(&complex)?;
            if trivalent {
                certify_trivalent(&l, characteristic)
            } else if branching {
                certify_branching(&l, characteristic)
            } else {
                let options = DeriveOptions { goal: parse_goal(&goal)?, budget, assume_sphere };
                certify(&l, characteristic, &options)
            }
        }
        Command::Torsion { chain, n, p } => torsion(&chain, n, p, g),
        Command::Report { dir } => crate::report::report(&dir),
    }
}

fn optional_complex(path: Option<&str>) -> CliResult<SimplicialComplex> {
    Ok(path.map(load_complex).transpose()?.unwrap_or_else(SimplicialComplex::empty))
}

pub fn f_vector_table(l: &SimplicialComplex) -> String {
    let mut t = String::from("dim\tfaces\n");
    for (d, n) in l.f_vector().proper().iter().enumerate() {
        let _ = writeln!(t, "{d}\t{n}");
    }
    t
}

fn complex_output(l: &SimplicialComplex) -> CliResult<Output> {
    Output::artifact(l, f_vector_table(l))
}

fn build(name: Option<String>, param: Option<usize>, from: Option<String>, flag: bool) -> CliResult<Output> {
    let l = match (name, from) {
        (_, Some(path)) => load_complex(&path)?,
        (Some(name), None) => special_complex(&name, param)?.complex,
        (None, None) => return Err(CliError::Input("give a catalog name or --from FILE".into())),
    };
    let l = if flag {
        let edges = l.edges().into_iter().map(|e| (e.vertices()[0].clone(), e.vertices()[1].clone()));
        SimplicialComplex::flag_complex(l.vertices().iter().cloned(), edges.collect::<Vec<_>>())
    } else {
        l
    };
    complex_output(&l)
}

#[derive(Serialize)]
struct Info {
    vertices: usize,
    dim: isize,
    f_vector: Vec<usize>,
    euler_characteristic: i64,
    euler_l2: String,
    flag: bool,
    connected: bool,
    join_factors: usize,
}

fn info(complex: Option<String>, catalog: bool) -> CliResult<Output> {
    if catalog {
        let names = catalog_names();
        return Output::report(&names, names.iter().map(|n| format!("{n}\n")).collect());
    }
    let l = load_complex(complex.as_deref().unwrap_or("-"))?;
    let i = Info {
        vertices: l.num_vertices(),
        dim: l.dim(),
        f_vector: l.f_vector().proper().to_vec(),
        euler_characteristic: l.euler_characteristic(),
        euler_l2: euler_l2(&l).to_string(),
        flag: l.is_flag(),
        connected: l.is_connected(),
        join_factors: l.join_decomposition().map_or(1, |f| f.len()),
    };
    let text = format!(
        "vertices\t{}\ndim\t{}\nflag\t{}\nconnected\t{}\neuler\t{}\neuler_l2\t{}\njoin factors\t{}\n{}",
        i.vertices,
        i.dim,
        i.flag,
        i.connected,
        i.euler_characteristic,
        i.euler_l2,
        i.join_factors,
        f_vector_table(&l)
    );
    Output::report(&i, text)
}

fn script_output(s: &SubdivisionScript) -> CliResult<Output> {
    let target = s.claimed_target.as_ref().map(|t| format!("{:?}", t.f_vector().proper())).unwrap_or_default();
    Output::artifact(s, format!("{} steps, target f = {target}\n", s.len()))
}

fn script(kind: ScriptKind) -> CliResult<Output> {
    let s = match kind {
        ScriptKind::Octahedron { n, rel } => script_octahedron(n, &optional_complex(rel.as_deref())?)?,
        ScriptKind::Relative { complex, rel } => {
            script_relative(&load_complex(&complex)?, &optional_complex(rel.as_deref())?)?
        }
        ScriptKind::Twosubs { complex, k, j } => {
            script_twosubs(&load_complex(&complex)?, &load_complex(&k)?, &optional_complex(j.as_deref())?)?
        }
    };
    script_output(&s)
}

fn verdict(passed: bool) -> (&'static str, u8) {
    if passed {
        ("PASS", 0)
    } else {
        ("FAIL", 3)
    }
}

fn certificate_text(report: &CertificateReport, conclusion: &BettiKnowledge) -> String {
    let (v, _) = verdict(report.passed());
    let mut t = format!("{v}, {} nodes\n{}", report.nodes, knowledge_text(conclusion));
    for a in &report.assumptions {
        let _ = writeln!(t, "assumption: {a}");
    }
    for f in &report.failures {
        let _ = writeln!(t, "failure at {} ({}): {}", f.path, f.rule, f.reason);
    }
    t
}

fn verify_certificate(c: &Certificate) -> CliResult<Output> {
    let report = verify(c);
    let code = verdict(report.passed()).1;
    Ok(Output::report(&report, certificate_text(&report, &c.conclusion))?.with_code(code))
}

fn as_json<T: serde::de::DeserializeOwned>(path: &str, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn verify_file(path: &str) -> CliResult<Output> {
    let v = load_value(path)?;
    if v.get("steps").is_some() {
        let s: SubdivisionScript = as_json(path, v)?;
        let report = verify_script(&s);
        let (word, code) = verdict(report.passed());
        let mut text = format!("{word}, {} steps\n", s.len());
        for e in &report.errors {
            let _ = writeln!(text, "error: {e}");
        }
        if let Some(c) = report.conditions.as_ref() {
            for e in &c.violations {
                let _ = writeln!(text, "violation: {e}");
            }
        }
        Ok(Output::report(&report, text)?.with_code(code))
    } else if v.get("conclusion").is_some() {
        verify_certificate(&as_json(path, v)?)
    } else if v.get("outcome").is_some() {
        if let Ok(TrivalentOutcome::Certificate { certificate }) = as_json(path, v.clone()) {
            return verify_certificate(&certificate);
        }
        if let Ok(BranchingOutcome::Certificate { certificate }) = as_json(path, v) {
            return verify_certificate(&certificate);
        }
        Err(CliError::Input(format!("{path}: a witness carries no complex to check it against; rerun certify instead")))
    } else {
        Err(CliError::Input(format!("{path}: neither a script nor a certificate")))
    }
}

fn davis(kind: DavisKind, g: &Global) -> CliResult<Output> {
    let x = match kind {
        DavisKind::Chamber { complex } => chamber(&load_complex(&complex)?).cube_complex(),
        DavisKind::Pl { complex, quotient } => {
            let l = load_complex(&complex)?;
            let q: FiniteQuotient = match quotient {
                Some(path) => load(&path)?,
                None => canonical_quotient(&l),
            };
            basic_construction_bounded(&l, &q, g.max_cells)?
        }
        DavisKind::Cover { base, p, rank, exponents } => {
            let x: CubeComplex = load(&base)?;
            let exps = match (rank, exponents) {
                (_, Some(e)) => parse_list(&e)?,
                (Some(r), None) => vec![1; r],
                (None, None) => vec![1],
            };
            abelian_p_cover_bounded(&x, p, &exps, g.max_cells)?
        }
    };
    let text = format!(
        "{}\nindex\t{}\ncells\t{:?}\neuler\t{}\n",
        x.description,
        x.index,
        x.counts(),
        x.euler_characteristic()
    );
    Output::artifact(&x, text)
}

fn parse_list<T: std::str::FromStr>(s: &str) -> CliResult<Vec<T>> {
    labels(s)
        .into_iter()
        .map(|x| x.parse().map_err(|_| CliError::Input(format!("cannot parse `{x}` in `{s}`"))))
        .collect()
}

fn tuple<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn summary_text(h: &HomologySummary) -> String {
    let mut t = format!("b = {}\n", tuple(&h.betti_q));
    for (p, b) in &h.betti_fp {
        let _ = writeln!(t, "b(F_{p}) = {}", tuple(b));
    }
    if h.is_torsion_free() {
        t.push_str("no torsion\n");
    } else {
        for (i, d) in h.torsion.iter().enumerate().filter(|(_, d)| !d.is_empty()) {
            let _ = writeln!(t, "torsion H_{i}: {}", tuple(d));
        }
    }
    t
}

fn homology(path: &str, field: FieldArg, p: Option<u64>, integral: bool, g: &Global) -> CliResult<Output> {
    let x: CubeComplex = load(path)?;
    if integral {
        let h = integral_homology_with(&x.chain, &p.into_iter().collect::<Vec<_>>(), g.jobs)?;
        return Output::report(&h, summary_text(&h));
    }
    let f = match (field, p) {
        (FieldArg::Q, _) => Field::Q,
        (FieldArg::Fp, Some(p)) => Field::Fp(p),
        (FieldArg::Fp, None) => return Err(CliError::Input("--field Fp needs --p".into())),
    };
    let b = betti_with_jobs(&x.chain, f.check()?, g.jobs)?;
    Output::report(&serde_json::json!({ "field": f, "betti": b }), format!("b = {}\n", tuple(&b)))
}

/// `p=3,k=1..3[,rank=r]` into the prime and the exponent lists.
fn parse_tower(spec: &str) -> CliResult<(u64, Vec<Vec<u32>>)> {
    let bad = || CliError::Input(format!("tower `{spec}` is not of the form p=3,k=1..3[,rank=r]"));
    let (mut p, mut ks, mut rank) = (None, None, 1usize);
    for part in labels(spec) {
        let (key, value) = part.split_once('=').ok_or_else(bad)?;
        match key.trim() {
            "p" => p = Some(value.trim().parse().map_err(|_| bad())?),
            "rank" => rank = value.trim().parse().map_err(|_| bad())?,
            "k" => {
                let (a, b) = value.split_once("..").unwrap_or((value, value));
                let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                ks = Some(a..=b);
            }
            _ => return Err(bad()),
        }
    }
    let (p, ks) = (p.ok_or_else(bad)?, ks.ok_or_else(bad)?);
    Ok((p, ks.map(|k| vec![k; rank]).collect()))
}

fn cube_or_davis(path: &str, g: &Global) -> CliResult<CubeComplex> {
    let v = load_value(path)?;
    if v.get("counts").is_some() {
        serde_json::from_value(v).map_err(|e| CliError::Input(format!("{path}: {e}")))
    } else {
        let l: SimplicialComplex = serde_json::from_value(v).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
        Ok(basic_construction_bounded(&l, &canonical_quotient(&l), g.max_cells)?)
    }
}

fn growth(base: &str, tower: &str, g: &Global) -> CliResult<Output> {
    let (p, chain) = parse_tower(tower)?;
    let x = cube_or_davis(base, g)?;
    let s = growth_series_with(&x, &chain, p, g.max_cells, g.jobs)?;
    Output::report(&s, s.table())
}

fn knowledge_text(k: &BettiKnowledge) -> String {
    k.degrees.iter().enumerate().map(|(i, s)| format!("b_{i} = {s}\n")).collect()
}

fn parse_goal(s: &str) -> CliResult<Goal> {
    if s == "all" {
        return Ok(Goal::All);
    }
    Ok(Goal::Degrees(parse_list::<usize>(s)?.into_iter().collect::<BTreeSet<_>>()))
}

fn certify(l: &SimplicialComplex, characteristic: u64, options: &DeriveOptions) -> CliResult<Output> {
    match derive_with(l, characteristic, options) {
        Ok(c) => Output::artifact(&c, knowledge_text(&c.conclusion)),
        Err(f) if f.partial.is_none() => Err(CliError::Input(f.reason)),
        Err(f) => {
            let mut text = format!("undetermined: {}\n", f.reason);
            if let Some(p) = &f.partial {
                text.push_str(&knowledge_text(&p.conclusion));
            }
            let code = if f.exhausted { 4 } else { 3 };
            Ok(Output::artifact(&f, text)?.with_code(code))
        }
    }
}

fn certify_trivalent(g: &SimplicialComplex, characteristic: u64) -> CliResult<Output> {
    let outcome = trivalent_decision(g, characteristic)?;
    let text = match &outcome {
        TrivalentOutcome::Certificate { certificate } => knowledge_text(&certificate.conclusion),
        TrivalentOutcome::K33 { witness } => format!(
            "K33 witness: {} | {}\n",
            witness.part_a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            witness.part_b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        ),
    };
    Output::artifact(&outcome, text)
}

fn certify_branching(l: &SimplicialComplex, characteristic: u64) -> CliResult<Output> {
    let outcome = minimally_branching_decision(l, characteristic)?;
    let text = match &outcome {
        BranchingOutcome::Certificate { certificate } => knowledge_text(&certificate.conclusion),
        BranchingOutcome::ThreeJoin { witness } => {
            let parts: Vec<String> =
                witness.parts.iter().map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
            format!("3-join witness: {}\n", parts.join(" | "))
        }
    };
    Output::artifact(&outcome, text)
}

#[derive(serde::Deserialize)]
struct IndexedSummary {
    index: u64,
    homology: HomologySummary,
}

/// Cube complexes and `{index, homology}` files of a directory, by index.
pub fn chain_from_dir(dir: &str, p: u64, g: &Global) -> CliResult<Vec<(HomologySummary, u64)>> {
    let mut chain = Vec::new();
    for path in crate::report::json_files(dir)? {
        let path = path.display().to_string();
        let v = load_value(&path)?;
        if v.get("counts").is_some() {
            let x: CubeComplex = serde_json::from_value(v).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            chain.push((integral_homology_with(&x.chain, &[p], g.jobs)?, x.index));
        } else if v.get("homology").is_some() {
            let s: IndexedSummary = serde_json::from_value(v).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            chain.push((s.homology, s.index));
        }
    }
    chain.sort_by_key(|(_, d)| *d);
    Ok(chain)
}

fn torsion(dir: &str, n: usize, p: u64, g: &Global) -> CliResult<Output> {
    let chain = chain_from_dir(dir, p, g)?;
    let r = torsion_bookkeeping(&chain, n, p)?;
    let mut text = format!("index\tt\texcess\tb_{}(F_{p})/d\n", n + 2);
    for row in &r.rows {
        let _ = writeln!(text, "{}\t{}\t{}\t{}", row.index, tuple(&row.t), row.excess, row.next_fp);
    }
    let _ = writeln!(text, "verdict: {}", r.verdict);
    Output::report(&r, text)
}
