use super::*;
use crate::complex::catalog::{
    boundary_simplex, cube_one_skeleton, k33, octahedron, petersen, polygon, simplex, three_join,
};
use crate::homology::integral_homology_with;
use crate::label::VertexId;
use crate::rational::Rational;
use crate::subdivision::barycentric;
use crate::Simplex;

fn all(l: &SimplicialComplex, c: u64) -> Certificate {
    let cert = derive(l, c, Goal::All).unwrap_or_else(|f| panic!("derive failed: {}", f.reason));
    let report = verify(&cert);
    assert!(report.passed(), "{:?}", report.failures);
    cert
}

fn degrees(c: &Certificate) -> Vec<String> {
    c.conclusion.degrees.iter().map(|s| s.to_string()).collect()
}

#[test]
fn status_algebra() {
    let half = Status::Exact(Rational::new(1, 2));
    assert_eq!(half.add(&Status::Zero), half);
    assert_eq!(half.add(&Status::UpperBound(Rational::one())), Status::UpperBound(Rational::new(3, 2)));
    assert_eq!(half.mul(&Status::Unknown), Status::Unknown);
    assert_eq!(Status::Zero.mul(&Status::Unknown), Status::Zero);
    assert!(Status::Zero.implies(&Status::UpperBound(Rational::one())));
    assert!(!Status::UpperBound(Rational::one()).implies(&half));
    assert_eq!(half.meet(&Status::UpperBound(Rational::one())), Some(half.clone()));
    assert_eq!(half.meet(&Status::Zero), None);
    assert_eq!(Status::UpperBound(Rational::zero()).normalized(), Status::Zero);
}

#[test]
fn square_is_acyclic_by_suspension() {
    let c = all(&polygon(4), 0);
    assert!(c.conclusion.degrees.iter().all(Status::is_zero));
    assert_eq!(c.rule.name(), "suspension");
}

#[test]
fn hexagon_pins_half_in_degree_one() {
    let c = all(&polygon(6), 0);
    assert_eq!(degrees(&c), vec!["0", "1/2", "0"]);
    assert!(c.rules_used().contains("euler"));
    // the same value without the duality rule, labels chosen off the catalog
    let hex = polygon(6).rename(|v| VertexId::from(format!("h{v}").as_str()));
    assert_eq!(degrees(&all(&hex, 0)), vec!["0", "1/2", "0"]);
}

#[test]
fn pentagon_is_quarter() {
    let c = all(&polygon(5), 0);
    assert_eq!(degrees(&c), vec!["0", "1/4", "0"]);
}

#[test]
fn simplices_and_points() {
    let c = all(&simplex(2), 3);
    assert_eq!(degrees(&c), vec!["1/8", "0", "0", "0"]);
    let c = all(&SimplicialComplex::empty(), 0);
    assert_eq!(degrees(&c), vec!["1"]);
    let three = SimplicialComplex::from_labels(&[&["a"], &["b"], &["c"]]);
    assert_eq!(degrees(&all(&three, 0)), vec!["0", "1/2"]);
}

#[test]
fn barycentric_tetrahedron_boundary_is_acyclic() {
    let l = barycentric(&boundary_simplex(3));
    for c in [0, 2, 3, 5] {
        let cert = all(&l, c);
        assert!(cert.conclusion.degrees.iter().all(Status::is_zero), "char {c}: {}", cert.conclusion.summary());
        assert!(cert.rules_used().contains("iterated"));
    }
}

#[test]
fn barycentric_triangle_boundary() {
    let c = all(&barycentric(&boundary_simplex(2)), 0);
    assert_eq!(degrees(&c), vec!["0", "1/2", "0"]);
}

#[test]
fn cone_and_join() {
    let cone = polygon(5).cone(VertexId::from("x"));
    assert_eq!(degrees(&all(&cone, 0)), vec!["0", "1/8", "0", "0"]);
    let j = polygon(5).join(&SimplicialComplex::from_labels(&[&["p"], &["q"], &["r"]]));
    let c = all(&j, 0);
    assert_eq!(c.rule.name(), "join");
    assert_eq!(degrees(&c), vec!["0", "0", "1/8", "0"]);
}

#[test]
fn goal_subset_stops_early() {
    let goal = Goal::Degrees([0].into_iter().collect());
    let c = derive(&polygon(7), 0, goal).unwrap();
    assert!(c.conclusion.status(0).is_zero());
}

#[test]
fn non_flag_input_fails() {
    let f = derive(&boundary_simplex(2), 0, Goal::All).unwrap_err();
    assert!(f.partial.is_none());
    assert!(derive(&polygon(4), 4, Goal::All).is_err());
}

#[test]
fn exhausted_budget_reports_frontier() {
    let opts = DeriveOptions { budget: 1, ..DeriveOptions::default() };
    let f = derive_with(&petersen(), 0, &opts).unwrap_err();
    assert!(f.reason.contains("budget"));
    assert!(!f.frontier.is_empty());
}

#[test]
fn assumed_sphere_is_reported() {
    let l = polygon(7).rename(|v| VertexId::from(format!("z{v}").as_str()));
    let opts = DeriveOptions { assume_sphere: true, ..DeriveOptions::default() };
    let c = derive_with(&l, 0, &opts).unwrap();
    let report = verify(&c);
    assert!(report.passed());
    assert_eq!(degrees(&c), vec!["0", "3/4", "0"]);
}

#[test]
fn forged_edge_removal_fails() {
    let TrivalentOutcome::Certificate { certificate } = trivalent_decision(&cube_one_skeleton(), 0).unwrap() else {
        panic!("cube gives a certificate");
    };
    let mut cert = *certificate;
    assert!(verify(&cert).passed());
    // swap the link premise of the first edge removal for a 3-point link
    let three = SimplicialComplex::from_labels(&[&["x"], &["y"], &["z"]]);
    let forged = derive(&three, 0, Goal::All).unwrap();
    fn first_edge_remove(c: &mut Certificate) -> Option<&mut Certificate> {
        if matches!(c.rule, Rule::EdgeRemove { .. }) {
            return Some(c);
        }
        c.premises.iter_mut().find_map(first_edge_remove)
    }
    let node = first_edge_remove(&mut cert).unwrap();
    node.premises[1] = forged;
    let report = verify(&cert);
    assert!(!report.passed());
    assert!(report.failures.iter().any(|f| f.rule == "edge-remove"));
}

#[test]
fn euler_needs_exactly_one_open_degree() {
    let l = polygon(7);
    let open = Certificate::build(Rule::InfiniteGroup, Vec::new(), l.clone(), 0).unwrap();
    assert!(Certificate::build(Rule::Euler { degree: 1 }, vec![open.clone()], l.clone(), 0).is_err());
    let forged = Certificate {
        conclusion: BettiKnowledge {
            degrees: vec![Status::Zero, Status::Exact(Rational::new(3, 4)), Status::Unknown],
            ..open.conclusion.clone()
        },
        rule: Rule::Euler { degree: 1 },
        premises: vec![open],
    };
    let report = verify(&forged);
    assert_eq!(report.failures.len(), 1);
    assert!(report.failures[0].reason.contains("exactly one"));
}

#[test]
fn certificates_survive_serialization() {
    let c = all(&barycentric(&boundary_simplex(3)), 2);
    let text = serde_json::to_string(&c).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(verify(&back), verify(&c));
}

#[test]
fn cube_graph_takes_six_edge_removals() {
    let TrivalentOutcome::Certificate { certificate } = trivalent_decision(&cube_one_skeleton(), 0).unwrap() else {
        panic!("cube gives a certificate");
    };
    let nodes = certificate.nodes();
    let removals: Vec<&Certificate> =
        nodes.iter().map(|(_, c)| *c).filter(|c| c.rule.name() == "edge-remove").collect();
    assert_eq!(removals.len(), 6);
    for r in &removals {
        assert_eq!(r.premises[1].conclusion.complex.num_vertices(), 2);
    }
    assert!(nodes.iter().any(|(_, c)| c.rule.name() == "suspension"));
    assert!(certificate.conclusion.status(2).is_zero());
    assert!(verify(&certificate).passed());
}

#[test]
fn k33_and_petersen() {
    match trivalent_decision(&k33(), 0).unwrap() {
        TrivalentOutcome::K33 { witness } => {
            assert_eq!(witness.part_a.len(), 3);
            assert_eq!(witness.isomorphism.len(), 6);
        }
        _ => panic!("K33 has a witness"),
    }
    let TrivalentOutcome::Certificate { certificate } = trivalent_decision(&petersen(), 5).unwrap() else {
        panic!("Petersen gives a certificate");
    };
    assert!(certificate.conclusion.status(2).is_zero());
    assert!(verify(&certificate).passed());
}

#[test]
fn trivalent_eligibility() {
    let triangle_free_star = SimplicialComplex::from_labels(&[&["c", "1"], &["c", "2"], &["c", "3"], &["c", "4"]]);
    assert!(matches!(trivalent_decision(&triangle_free_star, 0), Err(crate::Error::NotTrivalentEligible(_))));
    let two = SimplicialComplex::from_labels(&[&["a", "b"], &["c", "d"]]);
    assert!(matches!(trivalent_decision(&two, 0), Err(crate::Error::NotTrivalentEligible(_))));
    // a path only needs vertex removals
    let TrivalentOutcome::Certificate { certificate } = trivalent_decision(&polygon(8), 0).unwrap() else { panic!() };
    assert!(verify(&certificate).passed());
}

#[test]
fn minimally_branching() {
    match minimally_branching_decision(&three_join(3), 0).unwrap() {
        BranchingOutcome::ThreeJoin { witness } => assert_eq!(witness.parts.len(), 3),
        _ => panic!("3*3*3 has a witness"),
    }
    match minimally_branching_decision(&k33(), 0).unwrap() {
        BranchingOutcome::ThreeJoin { witness } => assert_eq!(witness.parts.len(), 2),
        _ => panic!(),
    }
    let BranchingOutcome::Certificate { certificate } = minimally_branching_decision(&octahedron(3), 0).unwrap() else {
        panic!("octahedron gives a certificate");
    };
    assert!(certificate.conclusion.status(3).is_zero());
    assert!(verify(&certificate).passed());
    // four triangles on one edge
    let fan = SimplicialComplex::from_labels(&[&["a", "b", "1"], &["a", "b", "2"], &["a", "b", "3"], &["a", "b", "4"]]);
    assert!(matches!(minimally_branching_decision(&fan, 0), Err(crate::Error::HypothesisViolated(_))));
}

#[test]
fn relative_barycentric_schedule_order() {
    let l = boundary_simplex(3);
    let k = SimplicialComplex::from_simplices([Simplex::from_labels(&["1"])]);
    let s = relative_barycentric_schedule(&l, &k);
    // 6 edges, then 3 vertices, then 4 triangles
    assert_eq!(s.len(), 13);
    assert_eq!(s[0].as_str(), "[1,2]");
    assert_eq!(s[6].as_str(), "2");
    assert_eq!(s[9].as_str(), "[1,2,3]");
}

#[test]
fn torsion_report_on_surfaces_and_fixture() {
    use crate::chain::{ChainComplex, SparseMatrix};
    use crate::davis::{abelian_p_cover, basic_construction, canonical_quotient};
    let base = basic_construction(&polygon(5), &canonical_quotient(&polygon(5))).unwrap();
    let h0 = integral_homology_with(&base.chain, &[3], 1).unwrap();
    let cover = abelian_p_cover(&base, 3, &[1]).unwrap();
    let h1 = integral_homology_with(&cover.chain, &[3], 1).unwrap();
    let r = torsion_bookkeeping(&[(h0.clone(), 32), (h1, 96)], 1, 3).unwrap();
    assert!(!r.torsion_seen);
    assert_eq!(r.verdict, "no torsion growth");
    assert!(torsion_bookkeeping(&[(h0.clone(), 32), (h0, 32)], 1, 3).is_err());

    let x = ChainComplex::new(
        vec![1, 1, 1],
        vec![SparseMatrix::zeros(1, 1), SparseMatrix::from_triplets(1, 1, [(0, 0, 9)]).unwrap()],
    )
    .unwrap();
    let h = integral_homology_with(&x, &[3], 1).unwrap();
    let r = torsion_bookkeeping(&[(h, 1)], 1, 3).unwrap();
    assert_eq!(r.rows[0].t, vec![0, 1, 0]);
    assert_eq!(r.rows[0].excess, Rational::one());
    assert!(r.excess_persists && r.points_to_degree_n);
}
