//! Decision procedures for trivalent graphs and minimally branching
//! complexes: a certificate that the top L²-Betti number vanishes, or an
//! explicit isomorphism to the exceptional join of 3-point sets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Rule};
use super::derive::Engine;
use super::stored_degrees;
use crate::complex::catalog::k33;
use crate::complex::{find_isomorphism, Simplex, SimplicialComplex, DEFAULT_ISO_VERTEX_BOUND};
use crate::error::{Error, Result};
use crate::label::VertexId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K33Witness {
    pub part_a: Vec<VertexId>,
    pub part_b: Vec<VertexId>,
    /// Isomorphism onto the catalog `K33` (`a1..a3`, `b1..b3`).
    pub isomorphism: BTreeMap<VertexId, VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum TrivalentOutcome {
    Certificate { certificate: Box<Certificate> },
    K33 { witness: K33Witness },
}

/// `L = P_1 * ... * P_n` with every `P_i` a set of three points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeJoinWitness {
    pub parts: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum BranchingOutcome {
    Certificate { certificate: Box<Certificate> },
    ThreeJoin { witness: ThreeJoinWitness },
}

/// `b_2(W_G) = 0` for a connected triangle-free graph of degree at most 3,
/// unless `G = K_{3,3}`.
pub fn trivalent_decision(g: &SimplicialComplex, characteristic: u64) -> Result<TrivalentOutcome> {
    check_trivalent(g)?;
    if let Some(witness) = k33_witness(g) {
        return Ok(TrivalentOutcome::K33 { witness });
    }
    let mut prover = Prover::new(characteristic);
    let cert = prover.vanishing(g, 2).ok_or_else(|| {
        Error::Undecided(format!("no removal schedule for the graph with f = {:?}", g.f_vector().proper()))
    })?;
    Ok(TrivalentOutcome::Certificate { certificate: Box::new(prover.finish(cert)) })
}

/// `b_n(W_L) = 0` for an `(n-1)`-dimensional flag complex whose
/// `(n-2)`-simplices lie in at most three top simplices and whose links of
/// `k`-simplices are connected for `-1 <= k < n-2`, unless `L = 3^{*n}`.
pub fn minimally_branching_decision(l: &SimplicialComplex, characteristic: u64) -> Result<BranchingOutcome> {
    check_branching(l)?;
    if let Some(witness) = three_join_witness(l) {
        return Ok(BranchingOutcome::ThreeJoin { witness });
    }
    let n = (l.dim() + 1) as usize;
    if n == 2 {
        return match trivalent_decision(l, characteristic)? {
            TrivalentOutcome::Certificate { certificate } => Ok(BranchingOutcome::Certificate { certificate }),
            TrivalentOutcome::K33 { witness } => Ok(BranchingOutcome::ThreeJoin {
                witness: ThreeJoinWitness { parts: vec![witness.part_a, witness.part_b] },
            }),
        };
    }
    let mut prover = Prover::new(characteristic);
    let cert =
        prover.vanishing(l, n).ok_or_else(|| Error::Undecided(format!("no vertex-removal certificate for b_{n}")))?;
    Ok(BranchingOutcome::Certificate { certificate: Box::new(prover.finish(cert)) })
}

fn check_trivalent(g: &SimplicialComplex) -> Result<()> {
    let bad = |m: String| Err(Error::NotTrivalentEligible(m));
    if g.num_vertices() == 0 {
        return bad("graph is empty".into());
    }
    if g.dim() > 1 {
        return bad(format!("complex has dimension {}", g.dim()));
    }
    if !g.is_flag() {
        return bad("graph has a triangle".into());
    }
    if !g.is_connected() {
        return bad("graph is disconnected".into());
    }
    if let Some(v) = g.vertices().iter().find(|v| g.degree(v) > 3) {
        return bad(format!("vertex {v} has degree {}", g.degree(v)));
    }
    Ok(())
}

fn check_branching(l: &SimplicialComplex) -> Result<()> {
    let bad = |m: String| Err(Error::HypothesisViolated(m));
    if !l.is_flag() {
        return bad("complex is not flag".into());
    }
    if l.dim() < 0 {
        return bad("complex is empty".into());
    }
    let top = l.dim();
    for s in l.simplices_of_dim(top - 1) {
        let cofaces = l.simplices().filter(|t| t.dim() == top && s.is_face_of(t)).count();
        if cofaces > 3 {
            return bad(format!("simplex {s} lies in {cofaces} top simplices"));
        }
    }
    let mut faces = vec![Simplex::empty()];
    faces.extend(l.simplices().filter(|s| s.dim() < top - 1).cloned());
    for s in faces {
        let link = l.link(&s)?;
        if link.num_vertices() == 0 || !link.is_connected() {
            return bad(format!("link of {s} is not connected"));
        }
    }
    Ok(())
}

fn k33_witness(g: &SimplicialComplex) -> Option<K33Witness> {
    if g.num_vertices() != 6 || g.edges().len() != 9 {
        return None;
    }
    let iso = find_isomorphism(g, &k33(), DEFAULT_ISO_VERTEX_BOUND).ok()??;
    let side = |p: char| iso.iter().filter(|(_, w)| w.as_str().starts_with(p)).map(|(v, _)| v.clone()).collect();
    Some(K33Witness { part_a: side('a'), part_b: side('b'), isomorphism: iso })
}

fn three_join_witness(l: &SimplicialComplex) -> Option<ThreeJoinWitness> {
    let parts: Vec<Vec<VertexId>> = if l.num_vertices() == 3 && l.dim() == 0 {
        vec![l.vertices().iter().cloned().collect()]
    } else {
        let factors = l.join_decomposition()?;
        if factors.iter().any(|f| f.num_vertices() != 3 || f.dim() != 0) {
            return None;
        }
        factors.iter().map(|f| f.vertices().iter().cloned().collect()).collect()
    };
    Some(ThreeJoinWitness { parts })
}

struct Prover {
    engine: Engine,
    memo: HashMap<(SimplicialComplex, usize), Option<Certificate>>,
}

impl Prover {
    fn new(characteristic: u64) -> Self {
        Prover { engine: Engine::new(characteristic), memo: HashMap::new() }
    }

    fn characteristic(&self) -> u64 {
        self.engine.characteristic()
    }

    fn node(&self, rule: Rule, premises: Vec<Certificate>, target: &SimplicialComplex) -> Option<Certificate> {
        let built = Certificate::build(rule, premises, target.clone(), self.characteristic());
        debug_assert!(built.is_ok(), "invalid node: {:?}", built.as_ref().err());
        built.ok()
    }

    /// Adds `b_0 = 0` for infinite groups and pins a last open degree.
    fn finish(&mut self, cert: Certificate) -> Certificate {
        let x = cert.conclusion.complex.clone();
        let cert = if x.as_simplex().is_none() && !cert.conclusion.status(0).is_exact() {
            let leaf = self.node(Rule::InfiniteGroup, Vec::new(), &x).expect("not a simplex");
            self.node(Rule::Merge, vec![leaf, cert.clone()], &x).unwrap_or(cert)
        } else {
            cert
        };
        self.engine.pin(cert)
    }

    /// A certificate with `b_n(L) = 0`, if the procedure finds one.
    fn vanishing(&mut self, l: &SimplicialComplex, n: usize) -> Option<Certificate> {
        if n >= stored_degrees(l) {
            return self.node(Rule::DimBound, Vec::new(), l);
        }
        let key = (l.clone(), n);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let out = self.search(l, n);
        self.memo.insert(key, out.clone());
        out
    }

    fn search(&mut self, l: &SimplicialComplex, n: usize) -> Option<Certificate> {
        if l.as_simplex().is_some() {
            let c = self.engine.know(l);
            return c.conclusion.status(n).is_zero().then_some(c);
        }
        if n == 2 && l.dim() == 1 && l.is_connected() && l.vertices().iter().all(|v| l.degree(v) == 3) {
            return self.cubic(l);
        }
        // remove a vertex whose link already has b_{n-1} = 0
        for v in l.vertices() {
            let link = l.link(&Simplex::vertex(v.clone())).ok()?;
            if let Some(lc) = self.vanishing(&link, n - 1) {
                let rest = l.remove_vertex(v).ok()?;
                if let Some(rc) = self.vanishing(&rest, n) {
                    let c = self.node(Rule::VertexRemove { vertex: v.clone() }, vec![lc, rc], l)?;
                    if c.conclusion.status(n).is_zero() {
                        return Some(c);
                    }
                }
                break;
            }
        }
        let c = self.engine.know(l);
        c.conclusion.status(n).is_zero().then_some(c)
    }

    /// Trivalent case: separating pairs, then an embedding into a
    /// suspension followed by edge removals.
    fn cubic(&mut self, g: &SimplicialComplex) -> Option<Certificate> {
        if k33_witness(g).is_some() {
            return None;
        }
        if let Some(c) = self.separating_pair(g) {
            return Some(c);
        }
        for (u, v) in pole_candidates(g) {
            if let Some(c) = self.suspension_schedule(g, &u, &v) {
                return Some(c);
            }
        }
        None
    }

    fn separating_pair(&mut self, g: &SimplicialComplex) -> Option<Certificate> {
        let vs: Vec<VertexId> = g.vertices().iter().cloned().collect();
        let mut pairs: Vec<(bool, VertexId, VertexId)> = Vec::new();
        for (i, a) in vs.iter().enumerate() {
            for b in &vs[i + 1..] {
                pairs.push((!g.has_edge(a, b), a.clone(), b.clone()));
            }
        }
        pairs.sort();
        for (_, a, b) in pairs {
            let rest: BTreeSet<VertexId> = vs.iter().filter(|v| **v != a && **v != b).cloned().collect();
            let comps = g.induced(&rest).components();
            if comps.len() < 2 {
                continue;
            }
            let mut s1 = comps[0].clone();
            s1.insert(a.clone());
            s1.insert(b.clone());
            let s2: BTreeSet<VertexId> = g.vertices().iter().filter(|v| !comps[0].contains(*v)).cloned().collect();
            let p1 = self.vanishing(&g.induced(&s1), 2)?;
            let p2 = self.vanishing(&g.induced(&s2), 2)?;
            let pa = self.engine.know(&g.induced(&BTreeSet::from([a.clone(), b.clone()])));
            return self
                .node(Rule::MvSplit { l1: s1.into_iter().collect(), l2: s2.into_iter().collect() }, vec![p1, p2, pa], g)
                .filter(|c| c.conclusion.status(2).is_zero());
        }
        None
    }

    /// Starts from `S(G - u - v)` and removes the extra edges at `u`, then
    /// at `v`, each time choosing the least edge whose link has at most two
    /// points. Links only shrink, so a greedy choice never blocks a later
    /// one.
    fn suspension_schedule(&mut self, g: &SimplicialComplex, u: &VertexId, v: &VertexId) -> Option<Certificate> {
        let h: BTreeSet<VertexId> = g.vertices().iter().filter(|x| *x != u && *x != v).cloned().collect();
        let mut edges: Vec<(VertexId, VertexId)> = g
            .edges()
            .into_iter()
            .filter(|e| !e.contains(u) && !e.contains(v))
            .map(|e| (e.vertices()[0].clone(), e.vertices()[1].clone()))
            .collect();
        for x in &h {
            edges.push((u.clone(), x.clone()));
            edges.push((v.clone(), x.clone()));
        }
        let mut x = SimplicialComplex::flag_complex(g.vertices().iter().cloned(), edges);
        let mut cert = self.node(Rule::Suspension { poles: [u.clone(), v.clone()] }, Vec::new(), &x)?;
        for pole in [u, v] {
            let nbrs = g.neighbors(pole);
            let mut extra: BTreeSet<VertexId> = h.iter().filter(|y| !nbrs.contains(*y)).cloned().collect();
            while !extra.is_empty() {
                let next = extra.iter().find_map(|y| {
                    let e = Simplex::new([pole.clone(), y.clone()]);
                    let link = x.link(&e).ok()?;
                    (link.num_vertices() <= 2).then(|| (y.clone(), e, link))
                });
                let (y, e, link) = next?;
                let lc = self.engine.know(&link);
                let after = x.remove_simplices(std::slice::from_ref(&e)).ok()?;
                cert = self.node(Rule::EdgeRemove { edge: [pole.clone(), y.clone()] }, vec![cert, lc], &after)?;
                extra.remove(&y);
                x = after;
            }
        }
        (x == *g && cert.conclusion.status(2).is_zero()).then_some(cert)
    }
}

/// Pole pairs in the order the argument considers them: base points of a
/// suspension of three points, then the least pair at maximal distance,
/// then every other non-adjacent pair.
fn pole_candidates(g: &SimplicialComplex) -> Vec<(VertexId, VertexId)> {
    let vs: Vec<VertexId> = g.vertices().iter().cloned().collect();
    let mut out: Vec<(VertexId, VertexId)> = Vec::new();
    let push = |out: &mut Vec<(VertexId, VertexId)>, a: &VertexId, b: &VertexId| {
        let p = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if !out.contains(&p) {
            out.push(p);
        }
    };
    for (i, x) in vs.iter().enumerate() {
        for y in &vs[i + 1..] {
            let nx = g.neighbors(x);
            if !g.has_edge(x, y) && nx.len() == 3 && nx == g.neighbors(y) {
                let base: Vec<&VertexId> = nx.iter().collect();
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    push(&mut out, base[a], base[b]);
                }
            }
        }
    }
    let dist = distances(g);
    let far = vs
        .iter()
        .enumerate()
        .flat_map(|(i, a)| vs[i + 1..].iter().map(move |b| (a, b)))
        .filter_map(|(a, b)| dist[a].get(b).map(|d| (*d, a, b)))
        .max_by(|p, q| p.0.cmp(&q.0).then_with(|| (q.1, q.2).cmp(&(p.1, p.2))));
    if let Some((_, a, b)) = far {
        push(&mut out, a, b);
    }
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            if !g.has_edge(a, b) {
                push(&mut out, a, b);
            }
        }
    }
    out
}

fn distances(g: &SimplicialComplex) -> BTreeMap<VertexId, BTreeMap<VertexId, usize>> {
    let adj = g.adjacency();
    g.vertices()
        .iter()
        .map(|s| {
            let mut d = BTreeMap::from([(s.clone(), 0)]);
            let mut queue = VecDeque::from([s.clone()]);
            while let Some(x) = queue.pop_front() {
                let dx = d[&x];
                for y in &adj[&x] {
                    if !d.contains_key(y) {
                        d.insert(y.clone(), dx + 1);
                        queue.push_back(y.clone());
                    }
                }
            }
            (s.clone(), d)
        })
        .collect()
}
