use std::collections::{BTreeMap, BTreeSet};

use l2lab::complex::is_isomorphic;
use l2lab::subdivision::{
    barycentric, link_in_relative_barycentric, link_in_subdivision, relative_barycentric, script_relative,
    script_twosubs, sub_edge, verify_script,
};
use l2lab::{Simplex, SimplicialComplex, VertexId};
use proptest::prelude::*;

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

fn flag_complex(max_n: usize) -> impl Strategy<Value = SimplicialComplex> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |m| flag_from_mask(n, &m))
    })
}

/// A flag complex together with a full subcomplex, chosen by vertex mask.
fn flag_pair(max_n: usize) -> impl Strategy<Value = (SimplicialComplex, SimplicialComplex)> {
    flag_complex(max_n).prop_flat_map(|l| {
        let n = l.num_vertices();
        proptest::collection::vec(any::<bool>(), n).prop_map(move |keep| {
            let vs: BTreeSet<VertexId> =
                l.vertices().iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v.clone()).collect();
            let k = l.induced(&vs);
            (l.clone(), k)
        })
    })
}

/// Number of chains `σ_0 ⊊ ... ⊊ σ_k` of nonempty simplices, by length.
fn chain_counts(l: &SimplicialComplex) -> Vec<usize> {
    let all: Vec<Simplex> = l.simplices().cloned().collect();
    // ending[s][k] = chains of length k+1 ending at s
    let mut by_size: Vec<&Simplex> = all.iter().collect();
    by_size.sort_by_key(|s| s.len());
    let mut ending: BTreeMap<&Simplex, Vec<usize>> = BTreeMap::new();
    for s in &by_size {
        let mut counts = vec![1usize];
        for t in &by_size {
            if t.len() < s.len() && t.is_face_of(s) {
                for (k, c) in ending[t].iter().enumerate() {
                    if counts.len() <= k + 1 {
                        counts.resize(k + 2, 0);
                    }
                    counts[k + 1] += c;
                }
            }
        }
        ending.insert(s, counts);
    }
    let mut total = Vec::new();
    for counts in ending.values() {
        for (k, c) in counts.iter().enumerate() {
            if total.len() <= k {
                total.resize(k + 1, 0);
            }
            total[k] += c;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edge_subdivision_keeps_flagness(l in flag_complex(8)) {
        for e in l.edges() {
            prop_assert!(sub_edge(&l, &e).unwrap().is_flag());
        }
    }

    #[test]
    fn subdivided_links_match_direct_links(l in flag_complex(7)) {
        for e in l.edges() {
            let sub = sub_edge(&l, &e).unwrap();
            for sigma in sub.simplices() {
                let fast = link_in_subdivision(&l, &e, sigma).unwrap();
                prop_assert_eq!(fast, sub.link(sigma).unwrap());
            }
        }
    }

    #[test]
    fn barycentric_f_vector_counts_chains(l in flag_complex(7)) {
        let b = barycentric(&l);
        prop_assert_eq!(b.f_vector().proper().to_vec(), chain_counts(&l));
    }

    #[test]
    fn disjoint_stars_commute(l in flag_complex(8)) {
        let edges = l.edges();
        for (i, e) in edges.iter().enumerate() {
            let se = l.star(e).unwrap();
            for f in &edges[i + 1..] {
                let sf = l.star(f).unwrap();
                if !se.vertices().is_disjoint(sf.vertices()) {
                    continue;
                }
                let ef = sub_edge(&sub_edge(&l, e).unwrap(), f).unwrap();
                let fe = sub_edge(&sub_edge(&l, f).unwrap(), e).unwrap();
                prop_assert_eq!(&ef, &fe);
            }
        }
    }

    #[test]
    fn relative_links_match_direct_links((l, k) in flag_pair(6)) {
        let b = relative_barycentric(&l, &k).unwrap();
        prop_assert!(b.is_flag());
        for v in b.vertices() {
            let fast = link_in_relative_barycentric(&l, &k, v).unwrap();
            prop_assert_eq!(fast, b.link(&Simplex::vertex(v.clone())).unwrap());
        }
    }

    #[test]
    fn relative_scripts_verify((l, k) in flag_pair(6)) {
        let script = script_relative(&l, &k).unwrap();
        let report = verify_script(&script);
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert!(report.conditions.unwrap().passed());
        prop_assert_eq!(script.len(), l.set_minus(&k).iter().filter(|s| s.len() > 1).count());
    }

    #[test]
    fn nested_scripts_verify((l, k) in flag_pair(6), keep in proptest::collection::vec(any::<bool>(), 6)) {
        let vs: BTreeSet<VertexId> = k.vertices().iter().zip(keep).filter(|(_, x)| *x).map(|(v, _)| v.clone()).collect();
        let j = k.induced(&vs);
        let script = script_twosubs(&l, &k, &j).unwrap();
        let report = verify_script(&script);
        prop_assert!(report.passed(), "{:?}", report);
        let out = l2lab::subdivision::apply_script(&script).unwrap();
        prop_assert!(is_isomorphic(&out, &relative_barycentric(&l, &j).unwrap()));
    }
}
