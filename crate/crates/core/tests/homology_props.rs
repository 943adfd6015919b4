use l2lab::chain::{ChainComplex, SparseMatrix};
use l2lab::davis::{abelian_p_cover, basic_construction, canonical_quotient, euler_l2};
use l2lab::homology::{
    betti, integral_homology_with, rank_mod_p, rank_q_fraction_free, rank_q_modular, smith_normal_form, Field,
};
use l2lab::rational::Rational;
use l2lab::{SimplicialComplex, VertexId};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -6i64..=6], r * c).prop_map(move |v| (r, c, v))
    })
}

fn sparse(r: usize, c: usize, v: &[i64]) -> SparseMatrix {
    SparseMatrix::from_triplets(r, c, (0..r * c).map(|i| (i / c, i % c, v[i]))).unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from determinantal divisors `D_k = gcd of k×k minors`.
fn determinantal_factors(r: usize, c: usize, v: &[i64]) -> (usize, Vec<i128>) {
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<i128>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| v[i * c + j] as i128).collect()).collect();
                g = g.gcd(&det(&m));
            }
        }
        if g == 0 {
            return (k - 1, out);
        }
        out.push(g / prev);
        prev = g;
    }
    (r.min(c), out)
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

fn flag_complex(max_n: usize) -> impl Strategy<Value = SimplicialComplex> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |m| flag_from_mask(n, &m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_determinantal_divisors((r, c, v) in matrix(4)) {
        let s = smith_normal_form(&sparse(r, c, &v));
        let (rank, factors) = determinantal_factors(r, c, &v);
        prop_assert_eq!(s.rank, rank);
        let expected: Vec<BigInt> = factors.into_iter().filter(|d| *d != 1).map(BigInt::from).collect();
        prop_assert_eq!(s.divisors, expected);
    }

    #[test]
    fn smith_form_ignores_permutations((r, c, v) in matrix(6), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut pr: Vec<usize> = (0..r).collect();
        let mut pc: Vec<usize> = (0..c).collect();
        pr.shuffle(&mut rng);
        pc.shuffle(&mut rng);
        let permuted = SparseMatrix::from_triplets(r, c, (0..r * c).map(|i| (pr[i / c], pc[i % c], v[i]))).unwrap();
        prop_assert_eq!(smith_normal_form(&sparse(r, c, &v)), smith_normal_form(&permuted));
    }

    #[test]
    fn ranks_agree((r, c, v) in matrix(7)) {
        let m = sparse(r, c, &v);
        let exact = rank_q_fraction_free(&m);
        prop_assert_eq!(rank_q_modular(&m), exact);
        prop_assert_eq!(smith_normal_form(&m).rank, exact);
        for p in [2, 3, 5] {
            prop_assert!(rank_mod_p(&m, p) <= exact);
        }
    }

    #[test]
    fn universal_coefficients_on_two_term_complexes((r, c, v) in matrix(6), top in any::<bool>()) {
        // either C_1 → C_0 or C_2 → C_1 with zero ∂_1
        let x = if top {
            ChainComplex::new(vec![1, r, c], vec![SparseMatrix::zeros(1, r), sparse(r, c, &v)]).unwrap()
        } else {
            ChainComplex::new(vec![r, c], vec![sparse(r, c, &v)]).unwrap()
        };
        let h = integral_homology_with(&x, &[2, 3, 5], 1).unwrap();
        h.check_universal_coefficients().unwrap();
        prop_assert_eq!(h.euler_characteristic(), x.euler_characteristic());
        for (p, fp) in &h.betti_fp {
            prop_assert_eq!(fp, &betti(&x, Field::Fp(*p)).unwrap());
            for (a, b) in fp.iter().zip(&h.betti_q) {
                prop_assert!(a >= b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn davis_complexes_are_consistent(l in flag_complex(5)) {
        let x = basic_construction(&l, &canonical_quotient(&l)).unwrap();
        let h = integral_homology_with(&x.chain, &[2, 3], 1).unwrap();
        prop_assert_eq!(h.euler_characteristic(), x.euler_characteristic());
        let scale = Rational::from_int(1i64 << l.num_vertices());
        prop_assert_eq!(Rational::from_int(h.euler_characteristic()), scale * euler_l2(&l));
        // P_L is connected, and its cover along a surjective cocycle is too
        prop_assert_eq!(h.betti_q[0], 1);
        if h.betti_q.len() > 1 && h.betti_q[1] > 0 {
            let cover = abelian_p_cover(&x, 2, &[1]).unwrap();
            let hc = integral_homology_with(&cover.chain, &[2], 1).unwrap();
            prop_assert_eq!(hc.betti_q[0], 1);
            prop_assert_eq!(hc.euler_characteristic(), 2 * h.euler_characteristic());
        }
    }
}
