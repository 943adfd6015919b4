//! Edge subdivisions and relative barycentric subdivisions.

mod generate;
mod script;

use std::collections::BTreeSet;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

pub use generate::{script_cone, script_octahedron, script_relative, script_twosubs};
pub use script::{
    apply_script, verify_script, verify_script_with_bound, ConditionReport, Replay, StepCheck, SubdivisionScript,
    SubdivisionStep, VerificationReport,
};

/// Name given to the midpoint of the edge `{a, b}` in `l`. Primed until it
/// does not clash with an existing vertex.
pub fn midpoint_label(l: &SimplicialComplex, a: &VertexId, b: &VertexId) -> VertexId {
    let mut label = VertexId::barycenter([a, b]);
    while l.has_vertex(&label) {
        label = label.primed();
    }
    label
}

fn require_edge(l: &SimplicialComplex, e: &Simplex) -> Result<(VertexId, VertexId)> {
    if e.len() != 2 {
        return Err(Error::NotAnEdge(e.to_string()));
    }
    if !l.contains(e) {
        return Err(Error::SimplexNotPresent(e.to_string()));
    }
    Ok((e.vertices()[0].clone(), e.vertices()[1].clone()))
}

/// `Sub_e(L)`: the open star of `e` is replaced by the cone, with apex the
/// new midpoint, on the suspension of `Lk e` with the endpoints of `e` as
/// suspension points.
pub fn sub_edge(l: &SimplicialComplex, e: &Simplex) -> Result<SimplicialComplex> {
    sub_edge_labeled(l, e).map(|(c, _)| c)
}

/// [`sub_edge`], also returning the label of the new vertex.
pub fn sub_edge_labeled(l: &SimplicialComplex, e: &Simplex) -> Result<(SimplicialComplex, VertexId)> {
    let (a, b) = require_edge(l, e)?;
    let mid = midpoint_label(l, &a, &b);
    let link = l.link(e)?;
    let mut out: Vec<Simplex> = l.simplices().filter(|s| !e.is_face_of(s)).cloned().collect();
    let mut taus: Vec<Simplex> = link.simplices().cloned().collect();
    taus.push(Simplex::empty());
    for tau in taus {
        let base = tau.with(&mid);
        out.push(base.with(&a));
        out.push(base.with(&b));
    }
    Ok((SimplicialComplex::from_simplices(out), mid))
}

/// `Lk_{Sub_e(L)} σ` computed from `L` alone, following the four cases:
///
/// 1. `σ ∈ Lk_L e`: `Sub_e(Lk_L σ)`;
/// 2. `σ = v_e * τ`, `τ ∈ Lk_L e`: `S^0 * Lk_L(e * τ)`;
/// 3. `σ = [v_e, v±] * τ`: `Lk_L(e * τ)`;
/// 4. otherwise `Lk_L σ`, with the far endpoint renamed to `v_e` when `σ`
///    contains exactly one endpoint of `e`.
pub fn link_in_subdivision(l: &SimplicialComplex, e: &Simplex, sigma: &Simplex) -> Result<SimplicialComplex> {
    let (a, b) = require_edge(l, e)?;
    let mid = midpoint_label(l, &a, &b);
    let missing = || Error::SimplexNotPresent(sigma.to_string());

    if sigma.contains(&mid) {
        let rest = sigma.without(&mid);
        let has_a = rest.contains(&a);
        let has_b = rest.contains(&b);
        if has_a && has_b {
            return Err(missing());
        }
        let tau = rest.without(&a).without(&b);
        if !l.contains(&tau.union(e)) {
            return Err(missing());
        }
        let lk = l.link(&tau.union(e))?;
        if has_a || has_b {
            return Ok(lk);
        }
        let s0 = SimplicialComplex::from_simplices([Simplex::vertex(a), Simplex::vertex(b)]);
        return Ok(join_disjoint(&s0, &lk));
    }

    if !l.contains(sigma) || e.is_face_of(sigma) {
        return Err(missing());
    }
    if sigma.is_disjoint(e) && l.contains(&sigma.union(e)) {
        let lk = l.link(sigma)?;
        return sub_edge(&lk, e);
    }
    let lk = l.link(sigma)?;
    let far = if sigma.contains(&a) {
        Some(&b)
    } else if sigma.contains(&b) {
        Some(&a)
    } else {
        None
    };
    match far {
        Some(w) if lk.has_vertex(w) => Ok(lk.rename(|x| if x == w { mid.clone() } else { x.clone() })),
        _ => Ok(lk),
    }
}

/// Join of complexes already known to have disjoint vertex sets.
pub(crate) fn join_disjoint(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    debug_assert!(a.vertices().is_disjoint(b.vertices()));
    a.join(b)
}

/// Label of the barycenter of `sigma` in `b(L, K)`.
pub fn barycenter_label(sigma: &Simplex) -> VertexId {
    VertexId::barycenter(sigma.vertices())
}

fn check_subcomplex(l: &SimplicialComplex, k: &SimplicialComplex) -> Result<()> {
    if let Some(s) = k.simplices().find(|s| !l.contains(s)) {
        return Err(Error::NotASubcomplex(format!("{s} is not a simplex of the ambient complex")));
    }
    if let Some(v) = k.vertices().iter().find(|v| !l.has_vertex(v)) {
        return Err(Error::NotASubcomplex(format!("vertex {v} is not in the ambient complex")));
    }
    Ok(())
}

/// `b(L, K)`: vertices are the simplices of `L ∖ K` together with the
/// vertices of `K`; simplices are chains of simplices of `L` with at most
/// one member in `K` (that member contributing its vertices).
pub fn relative_barycentric(l: &SimplicialComplex, k: &SimplicialComplex) -> Result<SimplicialComplex> {
    check_subcomplex(l, k)?;
    let out = relative_barycentric_with(l, k, &barycenter_label);
    let originals: BTreeSet<&VertexId> = l.vertices().iter().collect();
    let fresh = l.set_minus(k).into_iter().filter(|s| s.len() > 1).map(|s| barycenter_label(&s));
    for label in fresh {
        if originals.contains(&label) {
            return Err(Error::MalformedInput(format!("barycenter label {label} clashes with an existing vertex")));
        }
    }
    Ok(out)
}

/// `b(L)`.
pub fn barycentric(l: &SimplicialComplex) -> SimplicialComplex {
    relative_barycentric_with(l, &SimplicialComplex::empty(), &barycenter_label)
}

/// `b(L, K)` with a caller-chosen name for each barycenter of `L ∖ K`.
pub(crate) fn relative_barycentric_with(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
    label: &dyn Fn(&Simplex) -> VertexId,
) -> SimplicialComplex {
    let outside: Vec<Simplex> = l.set_minus(k);
    let names: Vec<VertexId> = outside.iter().map(label).collect();
    // cofaces[i]: indices j with outside[i] ⊊ outside[j]
    let cofaces: Vec<Vec<usize>> = outside
        .iter()
        .map(|s| (0..outside.len()).filter(|&j| outside[j].len() > s.len() && s.is_face_of(&outside[j])).collect())
        .collect();

    let mut result: BTreeSet<Simplex> = BTreeSet::new();
    let mut bases: Vec<Simplex> = k.simplices().cloned().collect();
    bases.push(Simplex::empty());
    for kappa in bases {
        if !kappa.is_empty() {
            for f in kappa.faces() {
                if !f.is_empty() {
                    result.insert(f);
                }
            }
        }
        for (i, s) in outside.iter().enumerate() {
            if kappa.len() < s.len() && kappa.is_face_of(s) {
                let mut chain: Vec<VertexId> = kappa.vertices().to_vec();
                chain.push(names[i].clone());
                extend_chains(i, &mut chain, &cofaces, &names, &mut result);
            }
        }
    }
    SimplicialComplex::from_simplices(result)
}

fn extend_chains(
    top: usize,
    chain: &mut Vec<VertexId>,
    cofaces: &[Vec<usize>],
    names: &[VertexId],
    out: &mut BTreeSet<Simplex>,
) {
    out.insert(Simplex::new(chain.iter().cloned()));
    for &j in &cofaces[top] {
        chain.push(names[j].clone());
        extend_chains(j, chain, cofaces, names, out);
        chain.pop();
    }
}

/// Boundary complex of a simplex (all proper faces).
pub fn boundary_of(sigma: &Simplex) -> SimplicialComplex {
    SimplicialComplex::from_simplices(sigma.facets().into_iter().filter(|f| !f.is_empty()))
}

/// `Lk_{b(L,K)} v` from the data of `(L, K)`:
///
/// * `v` the barycenter of `σ ∈ L ∖ K`: `b(∂σ, ∂σ ∩ K) * b(Lk_L σ)`;
/// * `v` a vertex of `K`: `b(Lk_L v, Lk_K v)`.
pub fn link_in_relative_barycentric(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
    v: &VertexId,
) -> Result<SimplicialComplex> {
    check_subcomplex(l, k)?;
    if k.has_vertex(v) {
        let vs = Simplex::vertex(v.clone());
        let lk_l = l.link(&vs)?;
        let lk_k = k.link(&vs)?;
        return Ok(relative_barycentric_with(&lk_l, &lk_k, &|t: &Simplex| barycenter_label(&t.with(v))));
    }
    let sigma = l
        .set_minus(k)
        .into_iter()
        .find(|s| barycenter_label(s) == *v)
        .ok_or_else(|| Error::VertexNotPresent(v.to_string()))?;
    let bd = boundary_of(&sigma);
    let bd_k = SimplicialComplex::from_simplices(bd.simplices().filter(|s| k.contains(s)).cloned().collect::<Vec<_>>());
    let inner = relative_barycentric_with(&bd, &bd_k, &barycenter_label);
    let lk = l.link(&sigma)?;
    let outer =
        relative_barycentric_with(&lk, &SimplicialComplex::empty(), &|t: &Simplex| barycenter_label(&t.union(&sigma)));
    Ok(join_disjoint(&inner, &outer))
}
