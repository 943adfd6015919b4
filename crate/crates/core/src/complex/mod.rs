//! Finite abstract simplicial complexes.
//!
//! A complex stores every nonempty face explicitly, so flag and non-flag
//! complexes share one representation. The empty simplex is a value of
//! [`Simplex`] but is never stored; every complex implicitly contains it.

pub mod catalog;
pub mod iso;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::VertexId;

pub use catalog::{catalog_names, special_complex, CatalogEntry};
pub use iso::{find_isomorphism, is_isomorphic, Isomorphism, DEFAULT_ISO_VERTEX_BOUND};

/// A sorted set of vertices. The empty vertex list is the empty simplex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort();
        v.dedup();
        Simplex(v)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn from_labels(labels: &[&str]) -> Self {
        Simplex::new(labels.iter().map(|l| VertexId::from(*l)))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|vertices| - 1`; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().filter(|v| !other.contains(v)).cloned().collect())
    }

    pub fn with(&self, v: &VertexId) -> Simplex {
        let mut s = self.clone();
        if let Err(i) = s.0.binary_search(v) {
            s.0.insert(i, v.clone());
        }
        s
    }

    pub fn without(&self, v: &VertexId) -> Simplex {
        Simplex(self.0.iter().filter(|w| *w != v).cloned().collect())
    }

    /// All faces, including the empty face and the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (0u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<Simplex> {
        self.0.iter().map(|v| self.without(v)).collect()
    }

    pub fn map(&self, f: impl Fn(&VertexId) -> VertexId) -> Simplex {
        Simplex::new(self.0.iter().map(f))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<&str> = self.0.iter().map(|v| v.as_str()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Simplex counts per dimension, starting with `f_{-1} = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    /// `(f_0, f_1, ...)` without the leading `f_{-1}`.
    pub fn proper(&self) -> &[usize] {
        &self.0[1..]
    }

    /// Euler characteristic `f_0 - f_1 + f_2 - ...`.
    pub fn euler_characteristic(&self) -> i64 {
        self.proper().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Reduced Euler characteristic, counting the empty simplex.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.euler_characteristic() - 1
    }
}

/// A finite abstract simplicial complex, closed under taking faces.
#[derive(Clone, Default)]
pub struct SimplicialComplex {
    vertices: BTreeSet<VertexId>,
    simplices: BTreeSet<Simplex>,
    flag_hint: OnceLock<bool>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl std::hash::Hash for SimplicialComplex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
        self.simplices.hash(state);
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f", &self.f_vector().proper())
            .field("maximal", &self.maximal_simplices())
            .finish()
    }
}

impl SimplicialComplex {
    /// The empty complex (no vertices; only the empty simplex).
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the downward closure of the given simplices. Rejects empty
    /// entries, repeated vertices inside an entry and duplicate entries.
    pub fn build<I, S>(maximal: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = VertexId>,
    {
        let mut seen = BTreeSet::new();
        let mut tops = Vec::new();
        for entry in maximal {
            let raw: Vec<VertexId> = entry.into_iter().collect();
            if raw.is_empty() {
                return Err(Error::MalformedInput("empty simplex in list".into()));
            }
            let s = Simplex::new(raw.iter().cloned());
            if s.len() != raw.len() {
                return Err(Error::MalformedInput(format!("repeated vertex in simplex {s}")));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::MalformedInput(format!("duplicate simplex {s}")));
            }
            tops.push(s);
        }
        Ok(Self::from_simplices(tops))
    }

    /// Builds from string labels; panics on malformed labels. Test helper.
    pub fn from_labels(maximal: &[&[&str]]) -> Self {
        Self::build(maximal.iter().map(|s| s.iter().map(|l| VertexId::from(*l)).collect::<Vec<_>>()))
            .expect("well-formed test complex")
    }

    /// Downward closure of an arbitrary collection of simplices. Duplicates
    /// and non-maximal entries are fine here.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut all = BTreeSet::new();
        for s in simplices {
            if s.is_empty() || all.contains(&s) {
                continue;
            }
            for f in s.faces() {
                if !f.is_empty() {
                    all.insert(f);
                }
            }
        }
        Self::from_closed(all)
    }

    /// Wraps a set that is already closed under faces.
    fn from_closed(simplices: BTreeSet<Simplex>) -> Self {
        let vertices = simplices.iter().filter(|s| s.len() == 1).map(|s| s.vertices()[0].clone()).collect();
        SimplicialComplex { vertices, simplices, flag_hint: OnceLock::new() }
    }

    /// Adds isolated vertices (needed when a vertex set must be kept even
    /// though no simplex mentions it beyond the vertex itself).
    pub fn with_vertices<I: IntoIterator<Item = VertexId>>(mut self, vs: I) -> Self {
        for v in vs {
            self.simplices.insert(Simplex::vertex(v.clone()));
            self.vertices.insert(v);
        }
        self.flag_hint = OnceLock::new();
        self
    }

    /// The clique complex of a graph.
    pub fn flag_complex<V, E>(vertices: V, edges: E) -> Self
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (a, b) in edges {
            if a == b {
                continue;
            }
            adj.entry(a.clone()).or_default().insert(b.clone());
            adj.entry(b).or_default().insert(a);
        }
        let mut all = BTreeSet::new();
        fn grow(
            clique: &mut Vec<VertexId>,
            candidates: &BTreeSet<VertexId>,
            adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
            out: &mut BTreeSet<Simplex>,
        ) {
            out.insert(Simplex::new(clique.iter().cloned()));
            for c in candidates {
                let next: BTreeSet<VertexId> =
                    candidates.iter().filter(|x| *x > c && adj[c].contains(*x)).cloned().collect();
                clique.push(c.clone());
                grow(clique, &next, adj, out);
                clique.pop();
            }
        }
        for v in adj.keys() {
            let later: BTreeSet<VertexId> = adj[v].iter().filter(|x| *x > v).cloned().collect();
            grow(&mut vec![v.clone()], &later, &adj, &mut all);
        }
        let out = Self::from_closed(all);
        let _ = out.flag_hint.set(true);
        out
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Nonempty simplices in lexicographic order.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices_of_dim(&self, d: isize) -> Vec<Simplex> {
        if d < 0 {
            return vec![Simplex::empty()];
        }
        self.simplices.iter().filter(|s| s.dim() == d).cloned().collect()
    }

    pub fn edges(&self) -> Vec<Simplex> {
        self.simplices_of_dim(1)
    }

    /// `true` for the empty simplex and for every stored simplex.
    pub fn contains(&self, s: &Simplex) -> bool {
        s.is_empty() || self.simplices.contains(s)
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        self.simplices.contains(&Simplex::new([a.clone(), b.clone()]))
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension; -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.iter().map(|s| s.dim()).max().unwrap_or(-1)
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| !self.vertices.iter().any(|v| !s.contains(v) && self.simplices.contains(&s.with(v))))
            .cloned()
            .collect()
    }

    pub fn f_vector(&self) -> FVector {
        let d = self.dim();
        let mut counts = vec![0usize; (d + 2) as usize];
        counts[0] = 1;
        for s in &self.simplices {
            counts[(s.dim() + 1) as usize] += 1;
        }
        FVector(counts)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    pub fn neighbors(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 2 && s.contains(v))
            .flat_map(|s| s.vertices().iter().filter(|w| *w != v).cloned().collect::<Vec<_>>())
            .collect()
    }

    pub fn adjacency(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            self.vertices.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for s in self.simplices.iter().filter(|s| s.len() == 2) {
            let (a, b) = (&s.vertices()[0], &s.vertices()[1]);
            adj.get_mut(a).unwrap().insert(b.clone());
            adj.get_mut(b).unwrap().insert(a.clone());
        }
        adj
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn one_skeleton(&self) -> SimplicialComplex {
        Self::from_closed(self.simplices.iter().filter(|s| s.len() <= 2).cloned().collect())
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.iter().next() else {
            return true;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(v) = stack.pop() {
            for w in &adj[&v] {
                if seen.insert(w.clone()) {
                    stack.push(w.clone());
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Vertex sets of connected components, each sorted, in order of their
    /// least vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::from([v.clone()]);
            let mut stack = vec![v.clone()];
            seen.insert(v.clone());
            while let Some(x) = stack.pop() {
                for w in &adj[&x] {
                    if seen.insert(w.clone()) {
                        comp.insert(w.clone());
                        stack.push(w.clone());
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Every clique of the 1-skeleton spans a simplex.
    ///
    /// It suffices to check that a vertex set spans a simplex whenever all of
    /// its facets do; we grow simplices one vertex at a time.
    pub fn is_flag(&self) -> bool {
        *self.flag_hint.get_or_init(|| {
            let adj = self.adjacency();
            for s in &self.simplices {
                let last = s.vertices().last().unwrap();
                // candidates: common neighbors larger than the last vertex
                for w in adj[last].range((std::ops::Bound::Excluded(last.clone()), std::ops::Bound::Unbounded)) {
                    if s.vertices().iter().all(|u| adj[u].contains(w)) && !self.simplices.contains(&s.with(w)) {
                        return false;
                    }
                }
            }
            true
        })
    }

    /// Whether the full subcomplex on this vertex set coincides with `self`
    /// restricted to it, i.e. `sub` is full in `self`.
    pub fn is_full_subcomplex(&self, sub: &SimplicialComplex) -> bool {
        sub.is_subcomplex_of(self) && self.induced(sub.vertices()) == *sub
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.simplices.contains(s))
    }

    /// Full subcomplex spanned by the given vertices.
    pub fn induced(&self, vs: &BTreeSet<VertexId>) -> SimplicialComplex {
        Self::from_closed(
            self.simplices.iter().filter(|s| s.vertices().iter().all(|v| vs.contains(v))).cloned().collect(),
        )
    }

    fn require(&self, s: &Simplex) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::SimplexNotPresent(s.to_string()))
        }
    }

    /// `Lk σ`: simplices disjoint from σ whose union with σ is a simplex.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        self.require(sigma)?;
        if sigma.is_empty() {
            return Ok(self.clone());
        }
        let first = &sigma.vertices()[0];
        Ok(Self::from_closed(
            self.simplices
                .iter()
                .filter(|t| t.contains(first) && sigma.is_face_of(t) && t.len() > sigma.len())
                .map(|t| t.minus(sigma))
                .collect(),
        ))
    }

    /// Closed star `St σ = σ * Lk σ`.
    pub fn star(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        self.require(sigma)?;
        if sigma.is_empty() {
            return Ok(self.clone());
        }
        Ok(Self::from_simplices(self.simplices.iter().filter(|t| sigma.is_face_of(t)).cloned().collect::<Vec<_>>()))
    }

    /// `L - A`: the simplices containing no simplex of `A`.
    pub fn remove_simplices(&self, a: &[Simplex]) -> Result<SimplicialComplex> {
        for s in a {
            self.require(s)?;
        }
        if a.iter().any(|s| s.is_empty()) {
            return Ok(SimplicialComplex::empty());
        }
        Ok(Self::from_closed(self.simplices.iter().filter(|t| !a.iter().any(|s| s.is_face_of(t))).cloned().collect()))
    }

    /// `L ∖ A`: the simplices not contained in `A` (as a set of simplices).
    /// This is generally not a complex; returned as a list.
    pub fn set_minus(&self, a: &SimplicialComplex) -> Vec<Simplex> {
        self.simplices.iter().filter(|s| !a.contains(s)).cloned().collect()
    }

    /// `L - v`.
    pub fn remove_vertex(&self, v: &VertexId) -> Result<SimplicialComplex> {
        self.remove_simplices(&[Simplex::vertex(v.clone())])
    }

    pub fn rename(&self, f: impl Fn(&VertexId) -> VertexId) -> SimplicialComplex {
        Self::from_closed(self.simplices.iter().map(|s| s.map(&f)).collect())
    }

    /// Join. Colliding labels of `other` are primed until the vertex sets are
    /// disjoint.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut other = other.clone();
        while other.vertices.iter().any(|v| self.vertices.contains(v)) {
            let clash: BTreeSet<VertexId> =
                other.vertices.iter().filter(|v| self.vertices.contains(*v)).cloned().collect();
            other = other.rename(|v| if clash.contains(v) { v.primed() } else { v.clone() });
        }
        let mut all: BTreeSet<Simplex> = self.simplices.clone();
        all.extend(other.simplices.iter().cloned());
        for a in &self.simplices {
            for b in &other.simplices {
                all.insert(a.union(b));
            }
        }
        Self::from_closed(all)
    }

    pub fn cone(&self, apex: VertexId) -> SimplicialComplex {
        self.join(&SimplicialComplex::from_simplices([Simplex::vertex(apex)]))
    }

    /// Join with two new points `s+` and `s-` (primed on collision).
    pub fn suspension(&self) -> SimplicialComplex {
        let poles = SimplicialComplex::from_simplices([
            Simplex::vertex(VertexId::from("s+")),
            Simplex::vertex(VertexId::from("s-")),
        ]);
        poles.join(self)
    }

    pub fn suspension_with(&self, north: VertexId, south: VertexId) -> SimplicialComplex {
        let poles = SimplicialComplex::from_simplices([Simplex::vertex(north), Simplex::vertex(south)]);
        poles.join(self)
    }

    /// Whether this complex is a single simplex (the empty complex counts as
    /// the empty simplex).
    pub fn as_simplex(&self) -> Option<Simplex> {
        let all = Simplex::new(self.vertices.iter().cloned());
        (self.contains(&all)).then_some(all)
    }

    /// Splits into join factors along the connected components of the
    /// complement of the 1-skeleton. Returns `None` unless the complex is
    /// the join of the full subcomplexes on those components and there are at
    /// least two of them.
    pub fn join_decomposition(&self) -> Option<Vec<SimplicialComplex>> {
        let vs: Vec<VertexId> = self.vertices.iter().cloned().collect();
        if vs.len() < 2 {
            return None;
        }
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut parts: Vec<BTreeSet<VertexId>> = Vec::new();
        for v in &vs {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::from([v.clone()]);
            seen.insert(v.clone());
            let mut stack = vec![v.clone()];
            while let Some(x) = stack.pop() {
                for w in &vs {
                    if w != &x && !adj[&x].contains(w) && seen.insert(w.clone()) {
                        comp.insert(w.clone());
                        stack.push(w.clone());
                    }
                }
            }
            parts.push(comp);
        }
        if parts.len() < 2 {
            return None;
        }
        let factors: Vec<SimplicialComplex> = parts.iter().map(|p| self.induced(p)).collect();
        let expected: u128 = factors.iter().map(|f| f.num_simplices() as u128 + 1).product::<u128>() - 1;
        (expected == self.num_simplices() as u128).then_some(factors)
    }

    /// Whether the simplex set is closed under faces. Always true for values
    /// produced by this module; exposed for property tests.
    pub fn is_downward_closed(&self) -> bool {
        self.simplices.iter().all(|s| s.facets().iter().all(|f| f.is_empty() || self.simplices.contains(f)))
            && self.vertices.iter().all(|v| self.simplices.contains(&Simplex::vertex(v.clone())))
    }
}

/// JSON form: `{"vertices": [...], "maximal_simplices": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<VertexId>,
    pub maximal_simplices: Vec<Vec<VertexId>>,
}

impl From<&SimplicialComplex> for ComplexJson {
    fn from(c: &SimplicialComplex) -> Self {
        ComplexJson {
            vertices: c.vertices.iter().cloned().collect(),
            maximal_simplices: c.maximal_simplices().into_iter().map(|s| s.0).collect(),
        }
    }
}

impl TryFrom<ComplexJson> for SimplicialComplex {
    type Error = Error;

    fn try_from(j: ComplexJson) -> Result<Self> {
        let c = SimplicialComplex::build(j.maximal_simplices)?;
        let mut listed = BTreeSet::new();
        for v in &j.vertices {
            if !listed.insert(v.clone()) {
                return Err(Error::MalformedInput(format!("vertex {v} listed twice")));
            }
        }
        if let Some(v) = c.vertices.iter().find(|v| !listed.contains(*v)) {
            return Err(Error::MalformedInput(format!("vertex {v} missing from vertex list")));
        }
        Ok(c.with_vertices(listed))
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ComplexJson::deserialize(d)?;
        SimplicialComplex::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
