//! Cellular homology over ℚ, `F_p` and ℤ, and normalized Betti numbers
//! along towers of covers.

mod int;
mod rank;
mod snf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, SparseMatrix};
use crate::davis::cover::is_prime;
use crate::davis::{abelian_p_cover_bounded, CubeComplex, DEFAULT_MAX_CELLS};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use int::{invariant_factors, Int};
pub use rank::{rank_mod_p, rank_q_fraction_free, rank_q_modular, CROSS_CHECK_NNZ, RANK_PRIMES};
pub use snf::{smith_normal_form, smith_normal_form_big, SmithForm, SparseIntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn check(self) -> Result<Self> {
        match self {
            Field::Fp(p) if !is_prime(p) => Err(Error::MalformedInput(format!("{p} is not prime"))),
            f => Ok(f),
        }
    }
}

/// Runs `f` over `items` on up to `jobs` threads. Output order matches
/// input order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                out.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    out.into_inner().expect("worker panicked").into_iter().map(|r| r.expect("every item mapped")).collect()
}

fn ranks_to_betti(x: &ChainComplex, ranks: &[usize]) -> Vec<usize> {
    // ranks[k - 1] = rank ∂_k
    let rank = |k: usize| if k == 0 { 0 } else { ranks.get(k - 1).copied().unwrap_or(0) };
    (0..x.dims.len()).map(|i| x.dims[i] - rank(i) - rank(i + 1)).collect()
}

fn rank_over(m: &SparseMatrix, field: Field) -> usize {
    match field {
        Field::Fp(p) => rank_mod_p(m, p),
        Field::Q => {
            let r = rank_q_modular(m);
            if m.nnz() <= CROSS_CHECK_NNZ {
                // exact on small inputs; the modular rank can only be low
                r.max(rank_q_fraction_free(m))
            } else {
                r
            }
        }
    }
}

/// Betti numbers in degrees `0..=top`.
pub fn betti(x: &ChainComplex, field: Field) -> Result<Vec<usize>> {
    betti_with_jobs(x, field, 1)
}

pub fn betti_with_jobs(x: &ChainComplex, field: Field, jobs: usize) -> Result<Vec<usize>> {
    let field = field.check()?;
    let ranks = parallel_map(&x.boundaries, jobs, |m| rank_over(m, field));
    Ok(ranks_to_betti(x, &ranks))
}

mod decimal_lists {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = v.iter().map(|d| d.iter().map(|x| x.to_string()).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|row| row.into_iter().map(|x| x.parse::<BigInt>().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub betti_q: Vec<usize>,
    pub betti_fp: BTreeMap<u64, Vec<usize>>,
    /// Invariant factors greater than one of `H_i(X; ℤ)`.
    #[serde(with = "decimal_lists")]
    pub torsion: Vec<Vec<BigInt>>,
    pub logtor: Vec<f64>,
}

impl HomologySummary {
    /// `t_i(p)`: number of torsion divisors of `H_i` divisible by `p`.
    pub fn t(&self, i: usize, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.get(i).map(|d| d.iter().filter(|x| (*x % &p).is_zero()).count()).unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti_q.iter().enumerate().map(|(i, b)| if i % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// Checks `b_i(F_p) = b_i(ℚ) + t_i(p) + t_{i-1}(p)` for every stored
    /// prime.
    pub fn check_universal_coefficients(&self) -> Result<()> {
        for (&p, fp) in &self.betti_fp {
            for (i, &b) in fp.iter().enumerate() {
                let expected = self.betti_q[i] + self.t(i, p) + if i > 0 { self.t(i - 1, p) } else { 0 };
                if b != expected {
                    return Err(Error::InconsistentChain(format!(
                        "universal coefficients fail in degree {i} for p = {p}: {b} != {expected}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Primes dividing some divisor. Trial division up to one million; a
/// cofactor that fits in `u64` and has no small factor is taken as prime.
fn primes_dividing(divisors: &[BigInt]) -> BTreeSet<u64> {
    const TRIAL: u64 = 1_000_000;
    let mut out = BTreeSet::new();
    for d in divisors {
        let mut n = d.clone();
        let mut q = 2u64;
        while q <= TRIAL && n > BigInt::from(1) {
            let bq = BigInt::from(q);
            if (&n % &bq).is_zero() {
                out.insert(q);
                while (&n % &bq).is_zero() {
                    n /= &bq;
                }
            }
            q += 1;
        }
        if let Some(rest) = n.to_u64() {
            if rest > 1 && is_prime(rest) {
                out.insert(rest);
            }
        }
    }
    out
}

/// Integral homology with `F_p` Betti numbers for every prime dividing a
/// torsion coefficient.
pub fn integral_homology(x: &ChainComplex) -> Result<HomologySummary> {
    integral_homology_with(x, &[], 1)
}

/// As [`integral_homology`], also computing `F_p` Betti numbers for
/// `extra_primes`.
pub fn integral_homology_with(x: &ChainComplex, extra_primes: &[u64], jobs: usize) -> Result<HomologySummary> {
    for &p in extra_primes {
        Field::Fp(p).check()?;
    }
    let forms = parallel_map(&x.boundaries, jobs, smith_normal_form);
    let ranks: Vec<usize> = forms.iter().map(|f| f.rank).collect();
    for (k, (m, f)) in x.boundaries.iter().zip(&forms).enumerate() {
        let modular = rank_q_modular(m);
        if modular != f.rank {
            return Err(Error::InconsistentChain(format!(
                "rank of boundary {}: Smith form {} but modular {modular}",
                k + 1,
                f.rank
            )));
        }
    }
    let betti_q = ranks_to_betti(x, &ranks);
    let degrees = x.dims.len();
    // torsion of H_i comes from ∂_{i+1}
    let torsion: Vec<Vec<BigInt>> =
        (0..degrees).map(|i| forms.get(i).map(|f| f.divisors.clone()).unwrap_or_default()).collect();
    let logtor =
        torsion.iter().map(|d| d.iter().map(|x| Int::from_big(x.clone()).ln()).fold(0.0, |a, b| a + b)).collect();
    let all: Vec<BigInt> = torsion.iter().flatten().cloned().collect();
    let mut primes = primes_dividing(&all);
    primes.extend(extra_primes.iter().copied());
    let primes: Vec<u64> = primes.into_iter().collect();
    let per_prime = parallel_map(&primes, jobs, |&p| {
        let r: Vec<usize> = x.boundaries.iter().map(|m| rank_mod_p(m, p)).collect();
        ranks_to_betti(x, &r)
    });
    let summary = HomologySummary { betti_q, betti_fp: primes.into_iter().zip(per_prime).collect(), torsion, logtor };
    summary.check_universal_coefficients()?;
    Ok(summary)
}

/// One cover in a tower, normalized by its index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub description: String,
    pub exponents: Vec<u32>,
    pub degree: u64,
    pub betti_q: Vec<Rational>,
    pub betti_fp: Vec<Rational>,
    pub logtor: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub p: u64,
    pub rows: Vec<GrowthRow>,
}

impl GrowthSeries {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree\tb_Q/d\tb_F{}/d\tlogtor/d\tcover", self.p);
        for r in &self.rows {
            let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let logtor = r.logtor.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(",");
            let _ = writeln!(
                out,
                "{}\t({})\t({})\t({})\t{}",
                r.degree,
                join(&r.betti_q),
                join(&r.betti_fp),
                logtor,
                r.description
            );
        }
        out
    }
}

fn check_nested(chain: &[Vec<u32>]) -> Result<()> {
    for w in chain.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let refines = b.len() >= a.len() && a.iter().zip(b).all(|(x, y)| x <= y);
        if !refines || a == b {
            return Err(Error::NotNested(format!("{b:?} does not strictly refine {a:?}")));
        }
    }
    Ok(())
}

/// Normalized invariants of the covers `chain[j]` of `base` with deck group
/// `Π Z/p^{k_i}`. An empty exponent list is the base itself.
pub fn growth_series(base: &CubeComplex, chain: &[Vec<u32>], p: u64) -> Result<GrowthSeries> {
    growth_series_with(base, chain, p, DEFAULT_MAX_CELLS, 1)
}

pub fn growth_series_with(
    base: &CubeComplex,
    chain: &[Vec<u32>],
    p: u64,
    max_cells: usize,
    jobs: usize,
) -> Result<GrowthSeries> {
    Field::Fp(p).check()?;
    check_nested(chain)?;
    let rows = parallel_map(chain, jobs, |spec| -> Result<GrowthRow> {
        let cover = if spec.is_empty() { base.clone() } else { abelian_p_cover_bounded(base, p, spec, max_cells)? };
        let h = integral_homology_with(&cover.chain, &[p], 1)?;
        let d = cover.index as i64;
        let norm = |v: &[usize]| v.iter().map(|&b| Rational::new(b as i64, d)).collect::<Vec<_>>();
        Ok(GrowthRow {
            description: cover.description.clone(),
            exponents: spec.clone(),
            degree: cover.index,
            betti_q: norm(&h.betti_q),
            betti_fp: norm(&h.betti_fp[&p]),
            logtor: h.logtor.iter().map(|x| x / d as f64).collect(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    for w in rows.windows(2) {
        if w[1].degree <= w[0].degree {
            return Err(Error::NotNested(format!("degree {} follows {}", w[1].degree, w[0].degree)));
        }
        for (i, (a, b)) in w[0].betti_fp.iter().zip(&w[1].betti_fp).enumerate() {
            if b > a {
                return Err(Error::MonotonicityViolated(format!(
                    "normalized b_{i} rises from {a} to {b} at degree {}",
                    w[1].degree
                )));
            }
        }
    }
    Ok(GrowthSeries { p, rows })
}
