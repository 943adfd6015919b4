//! Torsion bookkeeping over a chain of finite covers.
//!
//! Universal coefficients give `t_n(p) + t_{n+1}(p) = b_{n+1}(F_p) - b_{n+1}(Q)`
//! on every cover. If the normalized excess on the right stays positive
//! along a chain, that is evidence (not proof) for `t_n + t_{n+1} > 0` in
//! the limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::HomologySummary;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionRow {
    pub index: u64,
    /// `t_i(p)` for every degree.
    pub t: Vec<usize>,
    pub t_normalized: Vec<Rational>,
    pub logtor_normalized: Vec<f64>,
    /// `(b_{n+1}(F_p) - b_{n+1}(Q)) / index`.
    pub excess: Rational,
    /// `b_{n+2}(F_p) / index`.
    pub next_fp: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub n: usize,
    pub p: u64,
    pub rows: Vec<TorsionRow>,
    /// Some cover has torsion of order divisible by `p`.
    pub torsion_seen: bool,
    /// Every cover has positive excess in degree `n + 1`.
    pub excess_persists: bool,
    /// Excess persists and `b_{n+2}(F_p)` vanishes on every cover, pointing
    /// at `t_n` alone.
    pub points_to_degree_n: bool,
    pub verdict: String,
}

fn betti_fp(s: &HomologySummary, i: usize, p: u64) -> usize {
    let q = s.betti_q.get(i).copied().unwrap_or(0);
    q + s.t(i, p) + if i > 0 { s.t(i - 1, p) } else { 0 }
}

pub fn torsion_bookkeeping(chain: &[(HomologySummary, u64)], n: usize, p: u64) -> Result<TorsionReport> {
    if chain.is_empty() {
        return Err(Error::InconsistentChain("empty chain".into()));
    }
    if !crate::davis::cover::is_prime(p) {
        return Err(Error::InconsistentChain(format!("{p} is not prime")));
    }
    let mut rows = Vec::new();
    let mut prev: Option<u64> = None;
    for (s, index) in chain {
        if *index == 0 || prev.is_some_and(|d| *index <= d || index % d != 0) {
            return Err(Error::InconsistentChain(format!("index {index} does not extend the chain {prev:?}")));
        }
        prev = Some(*index);
        s.check_universal_coefficients()?;
        if let Some(fp) = s.betti_fp.get(&p) {
            if (0..fp.len()).any(|i| fp[i] != betti_fp(s, i, p)) {
                return Err(Error::InconsistentChain(format!("F_{p} Betti numbers contradict the torsion")));
            }
        }
        let d = *index as i64;
        let norm = |x: usize| Rational::new(x as i64, d);
        let t: Vec<usize> = (0..s.betti_q.len()).map(|i| s.t(i, p)).collect();
        let q_next = s.betti_q.get(n + 1).copied().unwrap_or(0);
        rows.push(TorsionRow {
            index: *index,
            t_normalized: t.iter().map(|&x| norm(x)).collect(),
            t,
            logtor_normalized: s.logtor.iter().map(|x| x / *index as f64).collect(),
            excess: norm(betti_fp(s, n + 1, p) - q_next),
            next_fp: norm(betti_fp(s, n + 2, p)),
        });
    }
    let torsion_seen = rows.iter().any(|r| r.t.iter().any(|&x| x > 0));
    let excess_persists = rows.iter().all(|r| !r.excess.is_zero());
    let points_to_degree_n = excess_persists && rows.iter().all(|r| r.next_fp.is_zero());
    let verdict = if !torsion_seen {
        "no torsion growth".to_string()
    } else if points_to_degree_n {
        format!("excess in degree {} on every cover with b_{} = 0: evidence for t_{n} > 0", n + 1, n + 2)
    } else if excess_persists {
        format!("excess in degree {} on every cover: evidence for t_{n} + t_{} > 0", n + 1, n + 1)
    } else {
        format!("torsion present, but no persistent excess in degree {}", n + 1)
    };
    Ok(TorsionReport { n, p, rows, torsion_seen, excess_persists, points_to_degree_n, verdict })
}
