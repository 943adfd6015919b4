//! Script generators: relative barycentric subdivisions, cones, nested
//! pairs and octahedra.

use std::collections::BTreeSet;

use super::script::{verify_script, Replay, SubdivisionScript, SubdivisionStep};
use super::{barycenter_label, check_subcomplex, relative_barycentric};
use crate::complex::iso::is_isomorphic;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

/// Largest number of new vertices the exhaustive fallback for non-flag `K`
/// will try to place.
const SEARCH_DEPTH: usize = 3;

fn steps_of(edges: Vec<[VertexId; 2]>) -> Vec<SubdivisionStep> {
    edges.into_iter().map(|[a, b]| SubdivisionStep::new(a, b)).collect()
}

/// Fills in `new_vertex` by replaying; the caller has already checked the
/// script replays.
fn name_steps(mut script: SubdivisionScript) -> Result<SubdivisionScript> {
    let mut replay = Replay::new(&script.source);
    for step in &mut script.steps {
        step.new_vertex = Some(replay.step(&step.edge[0], &step.edge[1])?);
    }
    Ok(script)
}

fn finish(script: SubdivisionScript) -> Result<SubdivisionScript> {
    let report = verify_script(&script);
    if !report.passed() {
        if let Some(bad) = report.steps.iter().find(|s| !s.present) {
            return Err(Error::StepEdgeMissing {
                index: bad.index,
                edge: Simplex::new(bad.edge.iter().cloned()).to_string(),
            });
        }
        return Err(Error::TargetMismatch);
    }
    name_steps(script)
}

/// Script from `L` to `b(L, K)`.
///
/// Simplices of `L ∖ K` are added in order of dimension. For each new
/// simplex σ the script built so far is replayed on the larger complex and
/// the subdivision of the first edge crossing the interior of σ is spliced
/// in right after that edge appears. Every barycenter therefore comes from
/// an edge between barycenters of opposite faces, and the verifier can
/// re-check both ordering conditions from `relative_to`.
///
/// If `K` is not flag the induction may get stuck (some σ has its whole
/// boundary in `K`); in that case a short exhaustive search is tried before
/// giving up with `NotFlag`.
pub fn script_relative(l: &SimplicialComplex, k: &SimplicialComplex) -> Result<SubdivisionScript> {
    check_subcomplex(l, k)?;
    let target = relative_barycentric(l, k)?;
    if let Some(edges) = inductive_edges(l, k) {
        let script = SubdivisionScript {
            source: l.clone(),
            steps: steps_of(edges),
            claimed_target: Some(target.clone()),
            relative_to: Some(k.clone()),
        };
        let report = verify_script(&script);
        if report.passed() {
            return name_steps(script);
        }
        if k.is_flag() {
            return Err(Error::TargetMismatch);
        }
    } else if k.is_flag() {
        return Err(Error::TargetMismatch);
    }
    let needed = target.num_vertices().saturating_sub(l.num_vertices());
    if needed <= SEARCH_DEPTH {
        let mut path = Vec::new();
        if search(l, &target, needed, &mut path) {
            return finish(SubdivisionScript {
                source: l.clone(),
                steps: steps_of(path),
                claimed_target: Some(target),
                relative_to: None,
            });
        }
    }
    Err(Error::NotFlag("the subcomplex is not flag and no edge-subdivision script reaches b(L, K)".into()))
}

fn search(current: &SimplicialComplex, target: &SimplicialComplex, left: usize, path: &mut Vec<[VertexId; 2]>) -> bool {
    if left == 0 {
        return current.f_vector() == target.f_vector() && is_isomorphic(current, target);
    }
    for e in current.edges() {
        let [a, b] = [e.vertices()[0].clone(), e.vertices()[1].clone()];
        let Ok(next) = super::sub_edge(current, &e) else { continue };
        path.push([a, b]);
        if search(&next, target, left - 1, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn inductive_edges(l: &SimplicialComplex, k: &SimplicialComplex) -> Option<Vec<[VertexId; 2]>> {
    let mut order = l.set_minus(k);
    order.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let mut current: Vec<Simplex> = k.simplices().cloned().collect();
    let mut edges: Vec<[VertexId; 2]> = Vec::new();
    for sigma in order {
        current.push(sigma.clone());
        if sigma.len() == 1 {
            continue;
        }
        let cx = SimplicialComplex::from_simplices(current.iter().cloned());
        let (pos, edge) = first_crossing(&cx, &sigma, &edges)?;
        edges.insert(pos, edge);
    }
    Some(edges)
}

/// Replays `edges` on `cx` and returns the first moment (number of steps
/// done) at which an edge crossing the interior of σ exists, together with
/// the preferred such edge.
fn first_crossing(cx: &SimplicialComplex, sigma: &Simplex, edges: &[[VertexId; 2]]) -> Option<(usize, [VertexId; 2])> {
    let target: BTreeSet<VertexId> = sigma.vertices().iter().cloned().collect();
    let mut replay = Replay::new(cx);
    let mut fresh: Option<VertexId> = None;
    for pos in 0..=edges.len() {
        let candidates: Vec<Simplex> = match &fresh {
            None => replay.complex().edges(),
            Some(v) => replay.complex().neighbors(v).into_iter().map(|w| Simplex::new([v.clone(), w])).collect(),
        };
        let mut crossing: Vec<(bool, Simplex)> = candidates
            .into_iter()
            .filter_map(|e| {
                let ca = replay.carrier(&e.vertices()[0])?;
                let cb = replay.carrier(&e.vertices()[1])?;
                let union: BTreeSet<VertexId> = ca.union(cb).cloned().collect();
                (union == target && *ca != target && *cb != target).then(|| (!ca.is_disjoint(cb), e))
            })
            .collect();
        crossing.sort();
        if let Some((_, e)) = crossing.into_iter().next() {
            return Some((pos, [e.vertices()[0].clone(), e.vertices()[1].clone()]));
        }
        if pos < edges.len() {
            fresh = Some(replay.step(&edges[pos][0], &edges[pos][1]).ok()?);
        }
    }
    None
}

/// Script from `c · b(L, K)` to `b(cL, cK)`: subdivide the edges from the
/// apex `c` to the barycenters of `L ∖ K` in order of decreasing dimension,
/// ties broken lexicographically.
pub fn script_cone(cl: &SimplicialComplex, ck: &SimplicialComplex) -> Result<SubdivisionScript> {
    let c = cone_apex(cl, ck)?;
    let apex = Simplex::vertex(c.clone());
    let l = cl.link(&apex)?;
    let k = ck.link(&apex)?;
    check_subcomplex(&l, &k)?;
    let source = relative_barycentric(&l, &k)?.cone(c.clone());
    let mut outside = l.set_minus(&k);
    outside.sort_by(|a, b| (std::cmp::Reverse(a.len()), a).cmp(&(std::cmp::Reverse(b.len()), b)));
    let edges = outside.iter().map(|s| [c.clone(), barycenter_label(s)]).collect();
    finish(SubdivisionScript {
        source,
        steps: steps_of(edges),
        claimed_target: Some(relative_barycentric(cl, ck)?),
        relative_to: None,
    })
}

/// Lexicographically least vertex lying in every maximal simplex of both
/// complexes.
fn cone_apex(cl: &SimplicialComplex, ck: &SimplicialComplex) -> Result<VertexId> {
    let common = |c: &SimplicialComplex| -> BTreeSet<VertexId> {
        let tops = c.maximal_simplices();
        c.vertices().iter().filter(|v| !tops.is_empty() && tops.iter().all(|t| t.contains(v))).cloned().collect()
    };
    let both: BTreeSet<VertexId> = common(cl).intersection(&common(ck)).cloned().collect();
    both.into_iter()
        .next()
        .ok_or_else(|| Error::NotACone("no vertex lies in every maximal simplex of both complexes".into()))
}

/// Script from `b(L, K)` to `b(L, J)` for `J ⊆ K ⊆ L`: the script taking
/// `K` to `b(K, J)`, replayed inside `b(L, K)` where `K` is a full
/// subcomplex with its original labels.
pub fn script_twosubs(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
    j: &SimplicialComplex,
) -> Result<SubdivisionScript> {
    if !j.is_subcomplex_of(k) || !k.is_subcomplex_of(l) {
        return Err(Error::NotNested("expected J ⊆ K ⊆ L".into()));
    }
    // with J = K there is nothing to subdivide
    if j != k && !j.is_flag() {
        return Err(Error::NotFlag("J".into()));
    }
    let inner = script_relative(k, j)?;
    let steps = inner.steps.into_iter().map(|s| SubdivisionStep::new(s.edge[0].clone(), s.edge[1].clone())).collect();
    finish(SubdivisionScript {
        source: relative_barycentric(l, k)?,
        steps,
        claimed_target: Some(relative_barycentric(l, j)?),
        relative_to: None,
    })
}

/// Script from `O^n` to `b(∂Δ^n, K)`, where `∂Δ^n` has vertices
/// `1, ..., n+1`.
///
/// Pick the least vertex `v` whose opposite facet `τ` is not in `K`. By
/// recursion `O^{n-1}` subdivides to `b(∂τ, K ∩ ∂τ)`; suspending with poles
/// `v` and the barycenter of `τ` gives `O^n`. Coning from `v` turns the
/// result into `b(∂Δ^n, v(K ∩ ∂τ))`, and the relative script for
/// `K ⊆ v(K ∩ ∂τ)` finishes.
pub fn script_octahedron(n: usize, k: &SimplicialComplex) -> Result<SubdivisionScript> {
    if n == 0 {
        return Err(Error::MalformedInput("octahedron dimension must be at least 1".into()));
    }
    let ambient = crate::complex::catalog::boundary_simplex(n);
    check_subcomplex(&ambient, k)?;
    if !k.is_flag() {
        return Err(Error::NotFlag("K".into()));
    }
    let verts: Vec<VertexId> = ambient.vertices().iter().cloned().collect();
    let (source, edges) = octahedron_steps(&verts, k)?;
    finish(SubdivisionScript {
        source,
        steps: steps_of(edges),
        claimed_target: Some(relative_barycentric(&ambient, k)?),
        relative_to: None,
    })
}

fn octahedron_steps(verts: &[VertexId], k: &SimplicialComplex) -> Result<(SimplicialComplex, Vec<[VertexId; 2]>)> {
    if verts.len() == 2 {
        let source = SimplicialComplex::from_simplices(verts.iter().map(|v| Simplex::vertex(v.clone())));
        return Ok((source, Vec::new()));
    }
    let (v, tau) = verts
        .iter()
        .map(|v| (v.clone(), Simplex::new(verts.iter().filter(|w| *w != v).cloned())))
        .find(|(_, tau)| !k.contains(tau))
        .ok_or(Error::NotInStarOfVertex)?;
    let tau_set: BTreeSet<VertexId> = tau.vertices().iter().cloned().collect();
    let k_tau = k.induced(&tau_set);
    let (inner_source, inner_edges) = octahedron_steps(tau.vertices(), &k_tau)?;

    let source = inner_source.suspension_with(v.clone(), barycenter_label(&tau));
    let mut replay = Replay::with_label_carriers(&source);
    for [a, b] in &inner_edges {
        replay.step(a, b)?;
    }
    let mut edges = inner_edges;

    let boundary = super::boundary_of(&tau);
    let mut outside = boundary.set_minus(&k_tau);
    outside.sort_by(|a, b| (std::cmp::Reverse(a.len()), a).cmp(&(std::cmp::Reverse(b.len()), b)));
    for sigma in outside {
        let carrier: BTreeSet<VertexId> = sigma.vertices().iter().cloned().collect();
        let w = replay
            .vertex_over(&carrier)
            .cloned()
            .ok_or_else(|| Error::MalformedInput(format!("no vertex over {sigma} after the facet script")))?;
        replay.step(&v, &w)?;
        edges.push([v.clone(), w]);
    }

    let cone_k = k_tau.cone(v.clone());
    let rest = script_relative(&cone_k, k)?;
    for step in rest.steps {
        replay.step(&step.edge[0], &step.edge[1])?;
        edges.push(step.edge);
    }
    Ok((source, edges))
}
