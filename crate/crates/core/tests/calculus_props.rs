use std::collections::BTreeSet;

use l2lab::calculus::{derive, trivalent_decision, verify, Certificate, Goal, Status, TrivalentOutcome};
use l2lab::complex::catalog::k33;
use l2lab::complex::catalog::{octahedron, polygon, simplex};
use l2lab::complex::is_isomorphic;
use l2lab::subdivision::sub_edge;
use l2lab::{Simplex, SimplicialComplex, VertexId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complete(l: &SimplicialComplex) -> Option<Vec<Status>> {
    let c = derive(l, 0, Goal::All).ok()?;
    assert!(verify(&c).passed());
    Some(c.conclusion.degrees)
}

fn relabel(l: &SimplicialComplex, tag: &str) -> SimplicialComplex {
    l.rename(|v| VertexId::from(format!("{tag}{v}").as_str()))
}

fn points(n: usize, tag: &str) -> SimplicialComplex {
    SimplicialComplex::from_simplices((0..n).map(|i| Simplex::vertex(VertexId::from(format!("{tag}{i}").as_str()))))
}

fn catalog_pieces() -> Vec<SimplicialComplex> {
    vec![simplex(0), simplex(1), points(2, "p"), points(3, "p"), polygon(4), polygon(5), polygon(6), octahedron(2)]
}

#[test]
fn join_is_convolution() {
    let pieces = catalog_pieces();
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i..] {
            let a = relabel(a, "x");
            let b = relabel(b, "y");
            let (Some(da), Some(db)) = (complete(&a), complete(&b)) else { continue };
            let Some(dj) = complete(&a.join(&b)) else { continue };
            for (k, s) in dj.iter().enumerate() {
                let conv = (0..=k).fold(Status::Zero, |acc, i| {
                    let x = da.get(i).cloned().unwrap_or(Status::Zero);
                    let y = db.get(k - i).cloned().unwrap_or(Status::Zero);
                    acc.add(&x.mul(&y))
                });
                assert_eq!(s, &conv, "degree {k}");
            }
        }
    }
}

#[test]
fn sub_equiv_round_trip() {
    for l in [polygon(4), polygon(5), polygon(6), octahedron(3), polygon(6).suspension()] {
        for e in l.edges() {
            let sub = sub_edge(&l, &e).unwrap();
            let removed = l.remove_simplices(std::slice::from_ref(&e)).unwrap();
            if !sub.is_flag() {
                continue;
            }
            let a = derive(&sub, 0, Goal::All);
            let b = derive(&removed, 0, Goal::All);
            let (a, b) = match (a, b) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(a), Err(b)) => (*a.partial.unwrap(), *b.partial.unwrap()),
                _ => panic!("only one side of {e} was determined"),
            };
            assert_eq!(a.conclusion.degrees, b.conclusion.degrees, "edge {e}");
        }
    }
}

fn cubic_graph(n: usize, rng: &mut ChaCha8Rng) -> Option<SimplicialComplex> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    stubs.shuffle(rng);
    let mut edges = BTreeSet::new();
    for pair in stubs.chunks(2) {
        let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if a == b || !edges.insert((a, b)) {
            return None;
        }
    }
    let name = |i: usize| VertexId::from(format!("g{i}").as_str());
    let g = SimplicialComplex::flag_complex((0..n).map(name), edges.iter().map(|&(a, b)| (name(a), name(b))));
    (g.dim() == 1 && g.is_connected()).then_some(g)
}

#[test]
fn random_cubic_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 500 {
        let n = 2 * rng.gen_range(3..=6);
        let Some(g) = cubic_graph(n, &mut rng) else { continue };
        done += 1;
        match trivalent_decision(&g, 0).unwrap() {
            TrivalentOutcome::Certificate { certificate } => {
                let report = verify(&certificate);
                assert!(report.passed(), "{:?}", report.failures);
                assert!(certificate.conclusion.status(2).is_zero());
                assert!(!is_isomorphic(&g, &k33()));
            }
            TrivalentOutcome::K33 { .. } => {
                assert_eq!((g.num_vertices(), g.edges().len()), (6, 9));
                assert!(is_isomorphic(&g, &k33()));
            }
        }
    }
}

fn flag_from_mask(n: usize, mask: &[bool]) -> SimplicialComplex {
    let vs: Vec<VertexId> = (0..n).map(|i| VertexId::from(format!("v{i}").as_str())).collect();
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask[bit] {
                edges.push((vs[i].clone(), vs[j].clone()));
            }
            bit += 1;
        }
    }
    SimplicialComplex::flag_complex(vs, edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derived_certificates_verify_and_respect_euler(
        (n, mask) in (1usize..=7).prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
    ) {
        let l = flag_from_mask(n, &mask);
        let cert = match derive(&l, 0, Goal::All) {
            Ok(c) => c,
            Err(f) => *f.partial.expect("flag input"),
        };
        let report = verify(&cert);
        prop_assert!(report.passed(), "{:?}", report.failures);
        prop_assert!(cert.conclusion.check_invariants().is_ok());
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(verify(&back), report);
    }

    #[test]
    fn trivalent_witness_needs_six_vertices(seed in any::<u64>(), half in 3usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(g) = cubic_graph(2 * half, &mut rng) {
            if let TrivalentOutcome::K33 { .. } = trivalent_decision(&g, 2).unwrap() {
                prop_assert_eq!(g.num_vertices(), 6);
                prop_assert_eq!(g.edges().len(), 9);
            }
        }
    }
}
