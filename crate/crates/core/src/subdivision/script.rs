//! Replayable edge-subdivision scripts and their verifier.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::sub_edge_labeled;
use crate::complex::iso::{find_isomorphism, DEFAULT_ISO_VERTEX_BOUND};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionStep {
    pub edge: [VertexId; 2],
    /// Name of the created vertex. Optional on input; when present the
    /// verifier checks it against the canonical name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_vertex: Option<VertexId>,
}

impl SubdivisionStep {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        SubdivisionStep { edge: [a, b], new_vertex: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionScript {
    pub source: SimplicialComplex,
    pub steps: Vec<SubdivisionStep>,
    pub claimed_target: Option<SimplicialComplex>,
    /// The subcomplex `K` when the script claims to turn `source` into
    /// `b(source, K)` through the inductive construction; enables the
    /// ordering checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_to: Option<SimplicialComplex>,
}

impl SubdivisionScript {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Sequential replay that remembers, for every vertex, the set of source
/// vertices it was built from.
#[derive(Clone, Debug)]
pub struct Replay {
    complex: SimplicialComplex,
    carriers: BTreeMap<VertexId, BTreeSet<VertexId>>,
    steps_done: usize,
}

impl Replay {
    /// Each source vertex carries itself.
    pub fn new(source: &SimplicialComplex) -> Self {
        let carriers = source.vertices().iter().map(|v| (v.clone(), BTreeSet::from([v.clone()]))).collect();
        Replay { complex: source.clone(), carriers, steps_done: 0 }
    }

    /// Each source vertex carries the atoms of its label, so that a vertex
    /// named `[a,b]` is treated as already sitting over `{a, b}`.
    pub fn with_label_carriers(source: &SimplicialComplex) -> Self {
        let carriers = source
            .vertices()
            .iter()
            .map(|v| (v.clone(), v.atoms().iter().map(|a| VertexId::from(a.as_str())).collect()))
            .collect();
        Replay { complex: source.clone(), carriers, steps_done: 0 }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn into_complex(self) -> SimplicialComplex {
        self.complex
    }

    pub fn carrier(&self, v: &VertexId) -> Option<&BTreeSet<VertexId>> {
        self.carriers.get(v)
    }

    pub fn carriers(&self) -> &BTreeMap<VertexId, BTreeSet<VertexId>> {
        &self.carriers
    }

    /// Current vertex whose carrier is exactly `c`, if any.
    pub fn vertex_over(&self, c: &BTreeSet<VertexId>) -> Option<&VertexId> {
        self.carriers.iter().find(|(_, cv)| *cv == c).map(|(v, _)| v)
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    pub fn step(&mut self, a: &VertexId, b: &VertexId) -> Result<VertexId> {
        let edge = Simplex::new([a.clone(), b.clone()]);
        if edge.len() != 2 || !self.complex.contains(&edge) {
            return Err(Error::StepEdgeMissing { index: self.steps_done, edge: edge.to_string() });
        }
        let (next, mid) = sub_edge_labeled(&self.complex, &edge)?;
        let carrier: BTreeSet<VertexId> = self.carriers[a].union(&self.carriers[b]).cloned().collect();
        self.carriers.insert(mid.clone(), carrier);
        self.complex = next;
        self.steps_done += 1;
        Ok(mid)
    }
}

/// Replays the script and returns the final complex.
pub fn apply_script(script: &SubdivisionScript) -> Result<SimplicialComplex> {
    let mut replay = Replay::new(&script.source);
    for step in &script.steps {
        let made = replay.step(&step.edge[0], &step.edge[1])?;
        if let Some(expected) = &step.new_vertex {
            if *expected != made {
                return Err(Error::MalformedInput(format!(
                    "step {} names its vertex {expected}, canonical name is {made}",
                    replay.steps_done() - 1
                )));
            }
        }
    }
    Ok(replay.into_complex())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCheck {
    pub index: usize,
    pub edge: [VertexId; 2],
    pub present: bool,
    pub new_vertex: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Every barycenter is created exactly once, from an edge joining
    /// barycenters of two disjoint faces spanning the simplex.
    pub midpoints_of_opposite_faces: bool,
    /// Barycenter of σ appears no later than one of the barycenters of any
    /// two intersecting proper faces spanning σ.
    pub ordering: bool,
    pub violations: Vec<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.midpoints_of_opposite_faces && self.ordering
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub steps: Vec<StepCheck>,
    pub replay_ok: bool,
    /// `None` when the script has no claimed target.
    pub target_isomorphic: Option<bool>,
    pub conditions: Option<ConditionReport>,
    pub errors: Vec<String>,
    pub final_f_vector: Option<Vec<usize>>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.replay_ok
            && self.target_isomorphic != Some(false)
            && self.conditions.as_ref().is_none_or(|c| c.passed())
            && self.errors.is_empty()
    }

    /// The first error in the spirit of `apply_script`, for callers that
    /// want a `Result`.
    pub fn into_result(self) -> Result<VerificationReport> {
        if let Some(bad) = self.steps.iter().find(|s| !s.present) {
            return Err(Error::StepEdgeMissing {
                index: bad.index,
                edge: Simplex::new(bad.edge.iter().cloned()).to_string(),
            });
        }
        if self.target_isomorphic == Some(false) {
            return Err(Error::TargetMismatch);
        }
        Ok(self)
    }
}

/// Replays the script step by step, compares with the claimed target up to
/// isomorphism and, when `relative_to` is set, re-checks the ordering
/// conditions of the inductive construction from scratch.
pub fn verify_script(script: &SubdivisionScript) -> VerificationReport {
    verify_script_with_bound(script, DEFAULT_ISO_VERTEX_BOUND)
}

pub fn verify_script_with_bound(script: &SubdivisionScript, iso_bound: usize) -> VerificationReport {
    let mut report = VerificationReport {
        steps: Vec::with_capacity(script.steps.len()),
        replay_ok: true,
        target_isomorphic: None,
        conditions: None,
        errors: Vec::new(),
        final_f_vector: None,
    };
    let mut replay = Replay::new(&script.source);
    let mut created: Vec<(VertexId, [VertexId; 2])> = Vec::new();
    for (index, step) in script.steps.iter().enumerate() {
        if !report.replay_ok {
            report.steps.push(StepCheck { index, edge: step.edge.clone(), present: false, new_vertex: None });
            continue;
        }
        match replay.step(&step.edge[0], &step.edge[1]) {
            Ok(made) => {
                if let Some(expected) = &step.new_vertex {
                    if *expected != made {
                        report.errors.push(format!("step {index}: vertex named {expected}, expected {made}"));
                    }
                }
                created.push((made.clone(), step.edge.clone()));
                report.steps.push(StepCheck { index, edge: step.edge.clone(), present: true, new_vertex: Some(made) });
            }
            Err(_) => {
                report.replay_ok = false;
                report.steps.push(StepCheck { index, edge: step.edge.clone(), present: false, new_vertex: None });
            }
        }
    }
    if report.replay_ok {
        report.final_f_vector = Some(replay.complex().f_vector().proper().to_vec());
        if let Some(target) = &script.claimed_target {
            match find_isomorphism(replay.complex(), target, iso_bound) {
                Ok(found) => report.target_isomorphic = Some(found.is_some()),
                Err(e) => report.errors.push(e.to_string()),
            }
        }
    }
    if let Some(k) = &script.relative_to {
        report.conditions = Some(check_conditions(&script.source, k, &replay, &created));
    }
    report
}

fn carrier_simplex(c: &BTreeSet<VertexId>) -> Simplex {
    Simplex::new(c.iter().cloned())
}

fn check_conditions(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
    replay: &Replay,
    created: &[(VertexId, [VertexId; 2])],
) -> ConditionReport {
    let mut violations = Vec::new();
    let mut opposite_ok = true;
    let mut time: BTreeMap<Simplex, usize> = BTreeMap::new();
    for (t, (v, [a, b])) in created.iter().enumerate() {
        let ca = &replay.carriers()[a];
        let cb = &replay.carriers()[b];
        let sigma = carrier_simplex(&replay.carriers()[v]);
        if !ca.is_disjoint(cb) {
            opposite_ok = false;
            violations.push(format!("step {t}: {v} joins barycenters of overlapping faces of {sigma}"));
        }
        if !l.contains(&sigma) || k.contains(&sigma) {
            opposite_ok = false;
            violations.push(format!("step {t}: {v} lies over {sigma}, which is not a simplex of L outside K"));
        }
        if time.insert(sigma.clone(), t).is_some() {
            opposite_ok = false;
            violations.push(format!("step {t}: second vertex over {sigma}"));
        }
    }
    let outside: Vec<Simplex> = l.set_minus(k).into_iter().filter(|s| s.len() > 1).collect();
    for s in &outside {
        if !time.contains_key(s) {
            opposite_ok = false;
            violations.push(format!("no vertex was created over {s}"));
        }
    }

    let mut ordering_ok = true;
    for s in &outside {
        let Some(&ts) = time.get(s) else { continue };
        let faces: Vec<&Simplex> = outside.iter().filter(|f| f.len() < s.len() && f.is_face_of(s)).collect();
        for (i, tau) in faces.iter().enumerate() {
            for rho in &faces[i + 1..] {
                if tau.is_disjoint(rho) || tau.union(rho) != *s {
                    continue;
                }
                let (Some(&tt), Some(&tr)) = (time.get(*tau), time.get(*rho)) else {
                    continue;
                };
                if ts > tt.max(tr) {
                    ordering_ok = false;
                    violations.push(format!("barycenter of {s} appears after those of {tau} and {rho}"));
                }
            }
        }
    }
    ConditionReport { midpoints_of_opposite_faces: opposite_ok, ordering: ordering_ok, violations }
}
