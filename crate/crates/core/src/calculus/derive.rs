//! The derivation engine: memoized search applying the rules in a fixed
//! priority order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::certificate::{mode_holds, odd_simplices, Certificate, IteratedMode, Rule, SphereTag, SubEquivDirection};
use super::{BettiKnowledge, Goal, Status};
use crate::complex::catalog::{octahedron, polygon};
use crate::complex::{is_isomorphic, Simplex, SimplicialComplex};
use crate::label::{LabelTree, VertexId};
use crate::subdivision::{barycenter_label, boundary_of, relative_barycentric, script_octahedron, sub_edge};

/// Number of complexes the engine may expand before giving up.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Complexes larger than this are not compared against catalog spheres.
const SPHERE_CHECK_VERTICES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeriveOptions {
    pub goal: Goal,
    pub budget: usize,
    /// Treat the input complex as a sphere triangulation. Recorded in the
    /// certificate as an assumption.
    pub assume_sphere: bool,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions { goal: Goal::All, budget: DEFAULT_BUDGET, assume_sphere: false }
    }
}

/// What the engine reached when the goal was not met.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub reason: String,
    /// Everything that was derived, when the input was acceptable at all.
    pub partial: Option<Box<Certificate>>,
    /// Incomplete complexes none of whose sub-derivations could be improved.
    pub frontier: Vec<SimplicialComplex>,
    /// The expansion budget ran out before the goal was met.
    #[serde(default)]
    pub exhausted: bool,
}

pub fn derive(l: &SimplicialComplex, characteristic: u64, goal: Goal) -> Result<Certificate, Failure> {
    derive_with(l, characteristic, &DeriveOptions { goal, ..DeriveOptions::default() })
}

pub fn derive_with(
    l: &SimplicialComplex,
    characteristic: u64,
    options: &DeriveOptions,
) -> Result<Certificate, Failure> {
    let fail = |reason: String| Failure { reason, partial: None, frontier: Vec::new(), exhausted: false };
    if characteristic != 0 && !crate::davis::cover::is_prime(characteristic) {
        return Err(fail(format!("characteristic {characteristic} is neither 0 nor a prime")));
    }
    if !l.is_flag() {
        return Err(fail("complex is not flag".into()));
    }
    let mut engine = Engine {
        characteristic,
        budget: options.budget,
        expanded: 0,
        memo: HashMap::new(),
        goal: Some(options.goal.clone()),
    };
    let mut cert = engine.know(l);
    if options.assume_sphere && !cert.conclusion.covers(&options.goal) {
        cert = engine.close_with_duality(cert, SphereTag::Assumed);
    }
    if cert.conclusion.covers(&options.goal) {
        return Ok(cert);
    }
    let exhausted = engine.expanded > engine.budget;
    let reason = if exhausted {
        format!("budget of {} expansions exhausted", engine.budget)
    } else {
        format!("no rule determines {}", cert.conclusion.summary())
    };
    Err(Failure { reason, frontier: frontier(&cert), partial: Some(Box::new(cert)), exhausted })
}

/// Barycenters of `L ∖ K` in the removal order: odd-dimensional simplices
/// by decreasing dimension, then even-dimensional ones by increasing
/// dimension, lexicographic within a dimension.
pub fn relative_barycentric_schedule(base: &SimplicialComplex, sub: &SimplicialComplex) -> Vec<VertexId> {
    let mut rest = base.set_minus(sub);
    let key = |s: &Simplex| {
        let d = s.len() as isize - 1;
        if d % 2 == 1 {
            (0, -d)
        } else {
            (1, d)
        }
    };
    rest.sort_by(|a, b| (key(a), a).cmp(&(key(b), b)));
    rest.iter().map(barycenter_label).collect()
}

fn frontier(cert: &Certificate) -> Vec<SimplicialComplex> {
    let mut out: Vec<SimplicialComplex> = Vec::new();
    for (_, node) in cert.nodes() {
        let stuck = !node.conclusion.is_complete() && node.premises.iter().all(|p| p.conclusion.is_complete());
        if stuck && !out.contains(&node.conclusion.complex) {
            out.push(node.conclusion.complex.clone());
        }
    }
    out.sort_by_key(|c| (c.num_vertices(), c.num_simplices()));
    out
}

pub(crate) struct Engine {
    characteristic: u64,
    budget: usize,
    expanded: usize,
    memo: HashMap<SimplicialComplex, Certificate>,
    /// Goal for the first expansion only; everything below aims at all
    /// degrees.
    goal: Option<Goal>,
}

fn meet_all(cands: &[Certificate], n: usize) -> Vec<Status> {
    let mut out = vec![Status::Unknown; n];
    for c in cands {
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(m) = slot.meet(&c.conclusion.status(i)) {
                *slot = m;
            }
        }
    }
    out
}

impl Engine {
    pub(crate) fn new(characteristic: u64) -> Self {
        Engine { characteristic, budget: DEFAULT_BUDGET, expanded: 0, memo: HashMap::new(), goal: None }
    }

    pub(crate) fn characteristic(&self) -> u64 {
        self.characteristic
    }

    fn node(&self, rule: Rule, premises: Vec<Certificate>, target: &SimplicialComplex) -> Option<Certificate> {
        let built = Certificate::build(rule, premises, target.clone(), self.characteristic);
        debug_assert!(built.is_ok(), "engine produced an invalid node: {:?}", built.as_ref().err());
        built.ok()
    }

    fn leaf(&self, rule: Rule, target: &SimplicialComplex) -> Certificate {
        self.node(rule, Vec::new(), target).expect("leaf side conditions checked by the caller")
    }

    pub(crate) fn know(&mut self, x: &SimplicialComplex) -> Certificate {
        if let Some(c) = self.memo.get(x) {
            return c.clone();
        }
        let goal = self.goal.take().unwrap_or(Goal::All);
        let c = self.expand(x, &goal);
        self.memo.insert(x.clone(), c.clone());
        c
    }

    fn expand(&mut self, x: &SimplicialComplex, goal: &Goal) -> Certificate {
        self.expanded += 1;
        if self.expanded > self.budget {
            return self.leaf(Rule::DimBound, x);
        }
        if x.as_simplex().is_some() {
            return self.leaf(Rule::Simplex, x);
        }
        if let Some(c) = self.by_join(x) {
            return c;
        }

        let mut cands = vec![self.leaf(Rule::InfiniteGroup, x)];
        let n = super::stored_degrees(x);
        let done = |cands: &[Certificate]| {
            let k =
                BettiKnowledge { complex: SimplicialComplex::empty(), characteristic: 0, degrees: meet_all(cands, n) };
            k.covers(goal)
        };

        if let Some(c) = self.by_sub_equiv(x).or_else(|| self.by_vertex_removal(x)) {
            cands.push(c);
        }
        let mut sphere = None;
        if !done(&cands) {
            if let Some((c, tag)) = self.by_recognition(x) {
                cands.push(c);
                sphere = tag;
            }
        }

        let mut cert = if cands.len() == 1 {
            cands.pop().expect("one candidate")
        } else {
            self.node(Rule::Merge, cands.clone(), x).unwrap_or_else(|| cands.into_iter().next().expect("nonempty"))
        };
        if cert.conclusion.covers(goal) {
            return cert;
        }
        if let Some(tag) = sphere.or_else(|| catalog_sphere(x)) {
            cert = self.close_with_duality(cert, tag);
        } else {
            cert = self.pin(cert);
        }
        cert
    }

    fn close_with_duality(&self, cert: Certificate, tag: SphereTag) -> Certificate {
        let x = cert.conclusion.complex.clone();
        let before = cert.conclusion.degrees.clone();
        let dual = match self.node(Rule::Duality { tag }, vec![cert.clone()], &x) {
            Some(d) if d.conclusion.degrees != before => d,
            _ => cert,
        };
        self.pin(dual)
    }

    pub(crate) fn pin(&self, cert: Certificate) -> Certificate {
        let open = cert.conclusion.non_exact_degrees();
        if open.len() != 1 {
            return cert;
        }
        let x = cert.conclusion.complex.clone();
        match Certificate::build(Rule::Euler { degree: open[0] }, vec![cert.clone()], x, self.characteristic) {
            Ok(c) => c,
            Err(_) => cert,
        }
    }

    /// Join, suspension and cone decompositions.
    fn by_join(&mut self, x: &SimplicialComplex) -> Option<Certificate> {
        let factors = x.join_decomposition()?;
        if let Some(s0) = factors.iter().find(|f| f.num_vertices() == 2 && f.dim() == 0) {
            let vs: Vec<VertexId> = s0.vertices().iter().cloned().collect();
            return self.node(Rule::Suspension { poles: [vs[0].clone(), vs[1].clone()] }, Vec::new(), x);
        }
        if let Some(apex) = factors.iter().find(|f| f.num_vertices() == 1) {
            let apex = apex.vertices().iter().next().expect("one vertex").clone();
            let base = x.remove_vertex(&apex).ok()?;
            let premise = self.know(&base);
            return self.node(Rule::Cone { apex }, vec![premise], x);
        }
        let left_set = factors[0].vertices().clone();
        let right_set: BTreeSet<VertexId> = x.vertices().difference(&left_set).cloned().collect();
        let a = self.know(&factors[0]);
        let b = self.know(&x.induced(&right_set));
        self.node(Rule::Join { left: left_set.into_iter().collect() }, vec![a, b], x)
    }

    /// A vertex named `[a,b]` that undoes an edge subdivision of `ab`.
    fn by_sub_equiv(&mut self, x: &SimplicialComplex) -> Option<Certificate> {
        for m in x.vertices() {
            let Some([a, b]) = midpoint_parts(m) else { continue };
            if !x.has_edge(m, &a) || !x.has_edge(m, &b) || x.has_edge(&a, &b) {
                continue;
            }
            let Ok(rest) = x.remove_vertex(m) else { continue };
            let e = Simplex::new([a.clone(), b.clone()]);
            let common: BTreeSet<VertexId> =
                x.neighbors(&a).intersection(&x.neighbors(&b)).filter(|v| *v != m).cloned().collect();
            let j = x.induced(&common);
            let mut simplices: Vec<Simplex> = rest.simplices().cloned().collect();
            simplices.push(e.clone());
            simplices.extend(j.simplices().map(|t| t.union(&e)));
            let base = SimplicialComplex::from_simplices(simplices).with_vertices(rest.vertices().iter().cloned());
            if !base.is_flag() || sub_edge(&base, &e).ok().as_ref() != Some(x) {
                continue;
            }
            let premise = self.know(&rest);
            return self.node(
                Rule::SubEquiv { base, edge: [a, b], direction: SubEquivDirection::ToSubdivision },
                vec![premise],
                x,
            );
        }
        None
    }

    /// The first vertex with an acyclic link, else the vertex with the
    /// smallest link.
    fn by_vertex_removal(&mut self, x: &SimplicialComplex) -> Option<Certificate> {
        let mut best: Option<(usize, VertexId, SimplicialComplex)> = None;
        let mut chosen = None;
        for v in x.vertices() {
            let link = x.link(&Simplex::vertex(v.clone())).ok()?;
            let known = self.know(&link);
            if known.conclusion.degrees.iter().all(Status::is_zero) {
                chosen = Some((v.clone(), known));
                break;
            }
            if best.as_ref().is_none_or(|(size, _, _)| link.num_simplices() < *size) {
                best = Some((link.num_simplices(), v.clone(), link));
            }
        }
        let (v, link_cert) = match chosen {
            Some(c) => c,
            None => {
                let (_, v, link) = best?;
                let known = self.know(&link);
                (v, known)
            }
        };
        let rest = x.remove_vertex(&v).ok()?;
        let rest_cert = self.know(&rest);
        self.node(Rule::VertexRemove { vertex: v }, vec![link_cert, rest_cert], x)
    }

    /// Recognizes `x = b(L, K)` from its labels and applies either the
    /// iterated-subdivision rule (for `L = ∂Δ^n`) or the relative
    /// barycentric rule.
    fn by_recognition(&mut self, x: &SimplicialComplex) -> Option<(Certificate, Option<SphereTag>)> {
        let (l0, k) = recognize_barycentric(x)?;
        if !k.is_flag() {
            return None;
        }
        let full = Simplex::new(l0.vertices().iter().cloned());
        if l0 == boundary_of(&full) && full.len() >= 3 {
            let n = full.len() - 1;
            let rename: BTreeMap<VertexId, VertexId> = full
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), VertexId::from((i + 1).to_string().as_str())))
                .collect();
            let script = script_octahedron(n, &k.rename(|v| rename[v].clone())).ok()?;
            let odd = odd_simplices(&script.source);
            let mut premises = Vec::new();
            for sigma in &odd {
                let link = script.source.link(sigma).ok()?;
                premises.push(self.know(&link));
            }
            let mode = choose_mode(&odd, &premises);
            let tag = SphereTag::Catalog {
                name: "octahedron".into(),
                param: Some(n),
                script: Some(Box::new(script.clone())),
            };
            let cert = self.node(Rule::Iterated { script, mode, odd_simplices: odd }, premises, x)?;
            return Some((cert, Some(tag)));
        }
        let n = (l0.dim() as usize).div_ceil(2).max(1);
        let premise = self.know(&k);
        let schedule = relative_barycentric_schedule(&l0, &k);
        let cert = self.node(Rule::RelativeBarycentric { base: l0, sub: k, n, schedule }, vec![premise], x)?;
        Some((cert, None))
    }
}

/// `[a,b]` with atomic `a`, `b`.
fn midpoint_parts(m: &VertexId) -> Option<[VertexId; 2]> {
    match m.tree() {
        LabelTree::Node(parts) if parts.len() == 2 => {
            let ids: Vec<VertexId> = parts
                .iter()
                .map(|p| match p {
                    LabelTree::Atom(a) => VertexId::new(a).ok(),
                    LabelTree::Node(_) => None,
                })
                .collect::<Option<_>>()?;
            Some([ids[0].clone(), ids[1].clone()])
        }
        _ => None,
    }
}

/// Reads `(L, K)` off the labels: atoms span `K`, and every other vertex
/// must be the barycenter `[a,b,...]` of a simplex of `L`.
fn recognize_barycentric(x: &SimplicialComplex) -> Option<(SimplicialComplex, SimplicialComplex)> {
    let mut atoms = BTreeSet::new();
    let mut centers = Vec::new();
    for v in x.vertices() {
        match v.tree() {
            LabelTree::Atom(_) => {
                atoms.insert(v.clone());
            }
            LabelTree::Node(parts) => {
                let ids: Vec<VertexId> = parts
                    .iter()
                    .map(|p| match p {
                        LabelTree::Atom(a) => VertexId::new(a).ok(),
                        LabelTree::Node(_) => None,
                    })
                    .collect::<Option<_>>()?;
                centers.push(Simplex::new(ids));
            }
        }
    }
    if centers.is_empty() || centers.iter().any(|s| s.vertices().iter().any(|v| !atoms.contains(v))) {
        return None;
    }
    let k = x.induced(&atoms);
    let mut simplices = centers;
    simplices.extend(k.simplices().cloned());
    let l0 = SimplicialComplex::from_simplices(simplices).with_vertices(atoms);
    let b = relative_barycentric(&l0, &k).ok()?;
    (b == *x).then_some((l0, k))
}

/// The strongest mode whose hypotheses the link knowledge satisfies.
fn choose_mode(odd: &[Simplex], links: &[Certificate]) -> IteratedMode {
    let nonzero: Vec<(usize, Vec<usize>)> = odd
        .iter()
        .zip(links)
        .map(|(s, c)| {
            let k = s.len() / 2;
            let ds = (0..c.conclusion.degrees.len()).filter(|&i| !c.conclusion.status(i).is_zero()).collect();
            (k, ds)
        })
        .collect();
    if nonzero.iter().all(|(_, ds)| ds.is_empty()) {
        return IteratedMode::Acyclic;
    }
    let top = nonzero.iter().filter_map(|(k, ds)| ds.last().map(|d| k + d)).max().expect("some link is not acyclic");
    let concentrated = IteratedMode::Concentrated(top);
    if odd.iter().zip(links).all(|(s, c)| mode_holds(concentrated, &c.conclusion, s.len() / 2)) {
        concentrated
    } else {
        IteratedMode::Above(top)
    }
}

/// Catalog sphere isomorphic to `x`, if any.
fn catalog_sphere(x: &SimplicialComplex) -> Option<SphereTag> {
    let nv = x.num_vertices();
    if nv > SPHERE_CHECK_VERTICES || x.dim() < 0 {
        return None;
    }
    let d = x.dim() as usize;
    let tag = |name: &str, param: Option<usize>| SphereTag::Catalog { name: name.into(), param, script: None };
    if d == 0 {
        return (nv == 2).then(|| tag("S0", None));
    }
    if d == 1 && nv >= 3 && x.vertices().iter().all(|v| x.degree(v) == 2) && x.is_connected() {
        return is_isomorphic(x, &polygon(nv)).then(|| tag("polygon", Some(nv)));
    }
    if nv == 2 * (d + 1) && is_isomorphic(x, &octahedron(d + 1)) {
        return Some(tag("octahedron", Some(d + 1)));
    }
    if d == 2 && nv == 8 && is_isomorphic(x, &polygon(6).suspension()) {
        return Some(tag("suspension-hexagon", None));
    }
    None
}
