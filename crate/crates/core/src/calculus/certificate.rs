//! Certificate trees and their verifier.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{stored_degrees, BettiKnowledge, Status};
use crate::complex::catalog::special_complex;
use crate::complex::is_isomorphic;
use crate::complex::{Simplex, SimplicialComplex};
use crate::davis::euler_l2;
use crate::label::VertexId;
use crate::rational::Rational;
use crate::subdivision::{apply_script, relative_barycentric, sub_edge, SubdivisionScript};

/// Which conclusion of the iterated-subdivision corollary a node uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "n")]
pub enum IteratedMode {
    /// Every odd link acyclic, so the subdivision is acyclic.
    Acyclic,
    /// `b_{≠n-k}` of every link of an odd `(2k-1)`-simplex vanishes.
    Concentrated(usize),
    /// `b_{>n-k}` of every link of an odd `(2k-1)`-simplex vanishes.
    Above(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubEquivDirection {
    /// From `L - e` to `Sub_e L`.
    ToSubdivision,
    /// From `Sub_e L` to `L - e`.
    ToRemoval,
}

/// Why a complex may be treated as a sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SphereTag {
    /// A catalog sphere, optionally carried through edge subdivisions.
    Catalog { name: String, param: Option<usize>, script: Option<Box<SubdivisionScript>> },
    /// Supplied by the user; reported as an assumption.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Rule {
    /// `L` a simplex on `k` vertices: `b_0 = 2^{-k}`, all else zero.
    Simplex,
    /// `W_L` infinite when `L` is not a simplex, so `b_0 = 0`.
    InfiniteGroup,
    /// Nothing beyond `b_i = 0` for `i > dim L + 1`.
    DimBound,
    /// `L = S^0 * B` with the given poles: acyclic.
    Suspension { poles: [VertexId; 2] },
    /// `L = apex * B`: `b_i(L) = b_i(B) / 2`.
    Cone { apex: VertexId },
    /// `L = A * B` with `A` spanned by `left`: convolution.
    Join { left: Vec<VertexId> },
    /// Mayer–Vietoris for `L = St v ∪_{Lk v} (L - v)`. Premises: link, then
    /// deletion.
    VertexRemove { vertex: VertexId },
    /// `b_i(L - e) <= b_i(L)` when `b_{i-1}(Lk e) = 0`. Premises: `L`, then
    /// `Lk e`.
    EdgeRemove { edge: [VertexId; 2] },
    /// `b_*(Sub_e L) = b_*(L - e)`.
    SubEquiv { base: SimplicialComplex, edge: [VertexId; 2], direction: SubEquivDirection },
    /// Conditions on links of odd simplices of `script.source` propagate
    /// through the edge subdivisions of `script`. Premises follow
    /// `odd_simplices`.
    Iterated { script: SubdivisionScript, mode: IteratedMode, odd_simplices: Vec<Simplex> },
    /// Poincaré duality `b_i = b_{n-i}` for a sphere of dimension `n - 1`.
    Duality { tag: SphereTag },
    /// Pins the only non-exact degree from the Euler characteristic.
    Euler { degree: usize },
    /// `L = L_1 ∪_A L_2` with full pieces. Premises: `L_1`, `L_2`, `A`.
    MvSplit { l1: Vec<VertexId>, l2: Vec<VertexId> },
    /// `b_i(b(L, K)) = b_i(K)` for `i > n` when `dim L <= 2n - 1` and `K` is
    /// flag. `schedule` lists the barycenters in removal order.
    RelativeBarycentric { base: SimplicialComplex, sub: SimplicialComplex, n: usize, schedule: Vec<VertexId> },
    /// Keeps the strongest premise status in every degree.
    Merge,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Simplex => "simplex",
            Rule::InfiniteGroup => "infinite-group",
            Rule::DimBound => "dim-bound",
            Rule::Suspension { .. } => "suspension",
            Rule::Cone { .. } => "cone",
            Rule::Join { .. } => "join",
            Rule::VertexRemove { .. } => "vertex-remove",
            Rule::EdgeRemove { .. } => "edge-remove",
            Rule::SubEquiv { .. } => "sub-equiv",
            Rule::Iterated { .. } => "iterated",
            Rule::Duality { .. } => "duality",
            Rule::Euler { .. } => "euler",
            Rule::MvSplit { .. } => "mv-split",
            Rule::RelativeBarycentric { .. } => "relative-barycentric",
            Rule::Merge => "merge",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub conclusion: BettiKnowledge,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Certificate>,
}

impl Certificate {
    /// Applies `rule` to `premises`, concluding everything the rule yields
    /// about `target`.
    pub fn build(
        rule: Rule,
        premises: Vec<Certificate>,
        target: SimplicialComplex,
        characteristic: u64,
    ) -> Result<Certificate, String> {
        let known: Vec<&BettiKnowledge> = premises.iter().map(|p| &p.conclusion).collect();
        let degrees = consequences(&rule, &known, &target)?;
        Ok(Certificate { conclusion: BettiKnowledge { complex: target, characteristic, degrees }, rule, premises })
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Certificate::node_count).sum::<usize>()
    }

    /// Every node in depth-first order, with its path.
    pub fn nodes(&self) -> Vec<(String, &Certificate)> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Certificate, path: String, out: &mut Vec<(String, &'a Certificate)>) {
            out.push((path.clone(), c));
            for (i, p) in c.premises.iter().enumerate() {
                let child = if path.is_empty() { i.to_string() } else { format!("{path}.{i}") };
                walk(p, child, out);
            }
        }
        walk(self, String::new(), &mut out);
        out
    }

    pub fn rules_used(&self) -> BTreeSet<&'static str> {
        self.nodes().into_iter().map(|(_, c)| c.rule.name()).collect()
    }
}

fn vid(e: &[VertexId; 2]) -> Simplex {
    Simplex::new([e[0].clone(), e[1].clone()])
}

/// Weakens a value to the upper bound it provides.
fn as_bound(s: Status) -> Status {
    match s.upper() {
        Some(u) => Status::UpperBound(u).normalized(),
        None => Status::Unknown,
    }
}

fn truncate(mut s: Vec<Status>, target: &SimplicialComplex) -> Vec<Status> {
    s.resize(stored_degrees(target), Status::Zero);
    s
}

fn expect_premises(known: &[&BettiKnowledge], n: usize) -> Result<(), String> {
    if known.len() != n {
        return Err(format!("expected {n} premises, found {}", known.len()));
    }
    Ok(())
}

fn expect_complex(k: &BettiKnowledge, expected: &SimplicialComplex, what: &str) -> Result<(), String> {
    if &k.complex != expected {
        return Err(format!("premise is not {what}"));
    }
    Ok(())
}

fn same_up_to_iso(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    a == b || is_isomorphic(a, b)
}

fn vertex_set(vs: &[VertexId]) -> BTreeSet<VertexId> {
    vs.iter().cloned().collect()
}

/// Odd-dimensional simplices (including `∅`) in `(dim, lex)` order.
pub(crate) fn odd_simplices(l: &SimplicialComplex) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = l.simplices().filter(|s| s.len() % 2 == 0).cloned().collect();
    out.push(Simplex::empty());
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.dedup();
    out
}

/// Checks the hypothesis of `mode` on the link of an odd simplex with `2k`
/// vertices.
pub(crate) fn mode_holds(mode: IteratedMode, link: &BettiKnowledge, k: usize) -> bool {
    let top = link.degrees.len();
    match mode {
        IteratedMode::Acyclic => (0..top).all(|i| link.status(i).is_zero()),
        IteratedMode::Concentrated(n) => (0..top).all(|i| n.checked_sub(k) == Some(i) || link.status(i).is_zero()),
        IteratedMode::Above(n) => (0..top).all(|i| i + k <= n || link.status(i).is_zero()),
    }
}

/// The strongest statuses `rule` yields for `target`, after checking its
/// side conditions against the premises.
pub(crate) fn consequences(
    rule: &Rule,
    known: &[&BettiKnowledge],
    target: &SimplicialComplex,
) -> Result<Vec<Status>, String> {
    let n = stored_degrees(target);
    match rule {
        Rule::Simplex => {
            expect_premises(known, 0)?;
            let s = target.as_simplex().ok_or("complex is not a simplex")?;
            let mut out = vec![Status::Zero; n];
            out[0] = Status::Exact(Rational::inv_pow2(s.len()));
            Ok(out)
        }
        Rule::InfiniteGroup => {
            expect_premises(known, 0)?;
            if target.as_simplex().is_some() {
                return Err("complex is a simplex, so the group is finite".into());
            }
            let mut out = vec![Status::Unknown; n];
            out[0] = Status::Zero;
            Ok(out)
        }
        Rule::DimBound => {
            expect_premises(known, 0)?;
            Ok(vec![Status::Unknown; n])
        }
        Rule::Suspension { poles } => {
            expect_premises(known, 0)?;
            let [u, v] = poles;
            if u == v || !target.has_vertex(u) || !target.has_vertex(v) || target.has_edge(u, v) {
                return Err("poles must be two non-adjacent vertices".into());
            }
            let rest: BTreeSet<VertexId> = target.vertices().iter().filter(|x| *x != u && *x != v).cloned().collect();
            let base = target.induced(&rest);
            if &base.suspension_with(u.clone(), v.clone()) != target {
                return Err("complex is not the suspension with these poles".into());
            }
            Ok(vec![Status::Zero; n])
        }
        Rule::Cone { apex } => {
            expect_premises(known, 1)?;
            if !target.has_vertex(apex) {
                return Err(format!("apex {apex} is not a vertex"));
            }
            let base = target.remove_vertex(apex).map_err(|e| e.to_string())?;
            if &base.cone(apex.clone()) != target {
                return Err("complex is not a cone with this apex".into());
            }
            expect_complex(known[0], &base, "the base of the cone")?;
            let half = Rational::new(1, 2);
            Ok((0..n).map(|i| known[0].status(i).scale(&half)).collect())
        }
        Rule::Join { left } => {
            expect_premises(known, 2)?;
            let a_set = vertex_set(left);
            let b_set: BTreeSet<VertexId> = target.vertices().difference(&a_set).cloned().collect();
            if a_set.is_empty() || b_set.is_empty() || !a_set.is_subset(target.vertices()) {
                return Err("join factors must split the vertex set into two nonempty parts".into());
            }
            let a = target.induced(&a_set);
            let b = target.induced(&b_set);
            if &a.join(&b) != target {
                return Err("complex is not the join of the two parts".into());
            }
            expect_complex(known[0], &a, "the first join factor")?;
            expect_complex(known[1], &b, "the second join factor")?;
            Ok((0..n)
                .map(|k| (0..=k).fold(Status::Zero, |acc, i| acc.add(&known[0].status(i).mul(&known[1].status(k - i)))))
                .collect())
        }
        Rule::VertexRemove { vertex } => {
            expect_premises(known, 2)?;
            let link = target.link(&Simplex::vertex(vertex.clone())).map_err(|e| e.to_string())?;
            let rest = target.remove_vertex(vertex).map_err(|e| e.to_string())?;
            expect_complex(known[0], &link, "the link of the vertex")?;
            expect_complex(known[1], &rest, "the vertex deletion")?;
            let (lk, del) = (known[0], known[1]);
            let half = Rational::new(1, 2);
            Ok((0..n)
                .map(|i| {
                    if lk.status(i).is_zero() && lk.below(i).is_zero() {
                        del.status(i)
                    } else {
                        as_bound(lk.status(i).scale(&half).add(&del.status(i)).add(&lk.below(i)))
                    }
                })
                .collect())
        }
        Rule::EdgeRemove { edge } => {
            expect_premises(known, 2)?;
            let e = vid(edge);
            let ambient = &known[0].complex;
            if !ambient.is_flag() {
                return Err("ambient complex is not flag".into());
            }
            let link = ambient.link(&e).map_err(|e| e.to_string())?;
            let removed = ambient.remove_simplices(std::slice::from_ref(&e)).map_err(|e| e.to_string())?;
            expect_complex(known[1], &link, "the link of the edge")?;
            if &removed != target {
                return Err("conclusion is not the edge removal".into());
            }
            let out = (0..stored_degrees(ambient).max(n))
                .map(|i| if known[1].below(i).is_zero() { as_bound(known[0].status(i)) } else { Status::Unknown })
                .collect();
            Ok(truncate(out, target))
        }
        Rule::SubEquiv { base, edge, direction } => {
            expect_premises(known, 1)?;
            let e = vid(edge);
            let sub = sub_edge(base, &e).map_err(|e| e.to_string())?;
            let removed = base.remove_simplices(std::slice::from_ref(&e)).map_err(|e| e.to_string())?;
            let (from, to) = match direction {
                SubEquivDirection::ToSubdivision => (removed, sub),
                SubEquivDirection::ToRemoval => (sub, removed),
            };
            if !base.is_flag() {
                return Err("base complex is not flag".into());
            }
            expect_complex(known[0], &from, "the source side of the equivalence")?;
            if &to != target {
                return Err("conclusion is not the other side of the equivalence".into());
            }
            Ok(truncate((0..n.max(known[0].degrees.len())).map(|i| known[0].status(i)).collect(), target))
        }
        Rule::Iterated { script, mode, odd_simplices: odd } => {
            let source = &script.source;
            if !source.is_flag() {
                return Err("script source is not flag".into());
            }
            if odd != &odd_simplices(source) {
                return Err("odd simplices do not match the script source".into());
            }
            expect_premises(known, odd.len())?;
            for (sigma, k) in odd.iter().zip(known) {
                let link = source.link(sigma).map_err(|e| e.to_string())?;
                expect_complex(k, &link, &format!("the link of {sigma}"))?;
                if !mode_holds(*mode, k, sigma.len() / 2) {
                    return Err(format!("link of {sigma} fails the {mode:?} hypothesis"));
                }
            }
            let result = apply_script(script).map_err(|e| e.to_string())?;
            if !same_up_to_iso(&result, target) {
                return Err("script replay is not isomorphic to the conclusion".into());
            }
            Ok((0..n)
                .map(|i| match mode {
                    IteratedMode::Acyclic => Status::Zero,
                    IteratedMode::Concentrated(m) if i != *m => Status::Zero,
                    IteratedMode::Above(m) if i > *m => Status::Zero,
                    _ => Status::Unknown,
                })
                .collect())
        }
        Rule::Duality { tag } => {
            expect_premises(known, 1)?;
            expect_complex(known[0], target, "the same complex")?;
            check_sphere_tag(tag, target)?;
            // Σ_L is a manifold of dimension dim L + 1
            let m = n - 1;
            Ok((0..n)
                .map(|i| {
                    let a = known[0].status(i);
                    let b = known[0].status(m - i);
                    a.meet(&b).unwrap_or(a)
                })
                .collect())
        }
        Rule::Euler { degree } => {
            expect_premises(known, 1)?;
            expect_complex(known[0], target, "the same complex")?;
            let open = known[0].non_exact_degrees();
            if open != vec![*degree] {
                return Err(format!("pinning needs exactly one open degree, found {open:?}"));
            }
            let mut rest = Rational::zero();
            for i in (0..n).filter(|i| i != degree) {
                let v = known[0].status(i).exact().expect("checked exact");
                rest = if i % 2 == 0 { rest + v } else { rest - v };
            }
            let diff = euler_l2(target) - rest;
            let value = if degree % 2 == 0 { diff } else { -diff };
            if value.is_negative() {
                return Err(format!("pinned value {value} is negative"));
            }
            if let Some(u) = known[0].status(*degree).upper() {
                if value > u {
                    return Err(format!("pinned value {value} exceeds the bound {u}"));
                }
            }
            let mut out = known[0].degrees.clone();
            out[*degree] = Status::Exact(value).normalized();
            Ok(out)
        }
        Rule::MvSplit { l1, l2 } => {
            expect_premises(known, 3)?;
            let s1 = vertex_set(l1);
            let s2 = vertex_set(l2);
            let sa: BTreeSet<VertexId> = s1.intersection(&s2).cloned().collect();
            let union: BTreeSet<VertexId> = s1.union(&s2).cloned().collect();
            if &union != target.vertices() {
                return Err("pieces do not cover the vertex set".into());
            }
            let (p1, p2, a) = (target.induced(&s1), target.induced(&s2), target.induced(&sa));
            if target.simplices().any(|s| !p1.contains(s) && !p2.contains(s)) {
                return Err("some simplex lies in neither piece".into());
            }
            expect_complex(known[0], &p1, "the first piece")?;
            expect_complex(known[1], &p2, "the second piece")?;
            expect_complex(known[2], &a, "the intersection")?;
            Ok((0..n).map(|i| as_bound(known[0].status(i).add(&known[1].status(i)).add(&known[2].below(i)))).collect())
        }
        Rule::RelativeBarycentric { base, sub, n: half_dim, schedule } => {
            expect_premises(known, 1)?;
            if base.dim() > 2 * *half_dim as isize - 1 {
                return Err(format!("dim {} exceeds 2n - 1 for n = {half_dim}", base.dim()));
            }
            if !sub.is_flag() {
                return Err("subcomplex is not flag".into());
            }
            let bary = relative_barycentric(base, sub).map_err(|e| e.to_string())?;
            if !same_up_to_iso(&bary, target) {
                return Err("conclusion is not the relative barycentric subdivision".into());
            }
            if schedule != &super::relative_barycentric_schedule(base, sub) {
                return Err("removal schedule does not follow the odd-then-even order".into());
            }
            expect_complex(known[0], sub, "the subcomplex")?;
            Ok((0..n).map(|i| if i > *half_dim { known[0].status(i) } else { Status::Unknown }).collect())
        }
        Rule::Merge => {
            if known.is_empty() {
                return Err("merge needs premises".into());
            }
            let mut out = vec![Status::Unknown; n];
            for k in known {
                expect_complex(k, target, "the same complex")?;
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = slot
                        .meet(&k.status(i))
                        .ok_or_else(|| format!("premises contradict each other in degree {i}"))?;
                }
            }
            Ok(out)
        }
    }
}

fn check_sphere_tag(tag: &SphereTag, target: &SimplicialComplex) -> Result<(), String> {
    match tag {
        SphereTag::Assumed => Ok(()),
        SphereTag::Catalog { name, param, script } => {
            let entry = special_complex(name, *param).map_err(|e| e.to_string())?;
            let d = entry.sphere_dim.ok_or_else(|| format!("catalog entry {name} is not a sphere"))?;
            if d as isize != target.dim() {
                return Err(format!("catalog sphere has dimension {d}, complex has {}", target.dim()));
            }
            let start = match script {
                Some(s) => {
                    if !same_up_to_iso(&s.source, &entry.complex) {
                        return Err("script does not start at the catalog sphere".into());
                    }
                    apply_script(s).map_err(|e| e.to_string())?
                }
                None => entry.complex,
            };
            if !same_up_to_iso(&start, target) {
                return Err("complex is not isomorphic to the tagged sphere".into());
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeFailure {
    pub path: String,
    pub rule: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub nodes: usize,
    pub failures: Vec<NodeFailure>,
    /// Sphere assumptions taken on trust.
    pub assumptions: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks every node: side conditions are recomputed from the premises'
/// conclusions, and each claimed status must follow.
pub fn verify(cert: &Certificate) -> CertificateReport {
    let mut report = CertificateReport { nodes: 0, failures: Vec::new(), assumptions: Vec::new() };
    for (path, node) in cert.nodes() {
        report.nodes += 1;
        let fail = |reason: String| NodeFailure {
            path: if path.is_empty() { "root".into() } else { path.clone() },
            rule: node.rule.name().into(),
            reason,
        };
        if let Err(reason) = check_node(node) {
            report.failures.push(fail(reason));
        }
        if let Rule::Duality { tag: SphereTag::Assumed } = node.rule {
            report
                .assumptions
                .push(format!("sphere assumed for complex with f = {:?}", node.conclusion.complex.f_vector().proper()));
        }
    }
    report
}

fn check_node(node: &Certificate) -> Result<(), String> {
    let c = &node.conclusion;
    c.check_invariants()?;
    if !c.complex.is_flag() {
        return Err("complex is not flag".into());
    }
    if let Some(p) = node.premises.iter().find(|p| p.conclusion.characteristic != c.characteristic) {
        return Err(format!("premise has characteristic {}", p.conclusion.characteristic));
    }
    let known: Vec<&BettiKnowledge> = node.premises.iter().map(|p| &p.conclusion).collect();
    let derived = consequences(&node.rule, &known, &c.complex)?;
    for (i, claim) in c.degrees.iter().enumerate() {
        let have = derived.get(i).cloned().unwrap_or(Status::Zero);
        if !have.implies(claim) {
            return Err(format!("degree {i}: claim {claim} does not follow from {have}"));
        }
    }
    Ok(())
}
