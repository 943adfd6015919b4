//! Matrix ranks over prime fields and over the rationals.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chain::SparseMatrix;

/// Primes for the modular shortcut to ranks over ℚ.
pub const RANK_PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 4_294_967_291, 1_000_000_007];

/// Below this many stored entries ℚ-ranks are also computed fraction-free
/// and compared.
pub const CROSS_CHECK_NNZ: usize = 2_000;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Rank over `F_p`, by sparse elimination with the sparsest column first.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut rows: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); m.rows()];
    let mut cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.cols()];
    for (r, c, v) in m.triplets() {
        let x = (v as i128).rem_euclid(p as i128) as u64;
        if x != 0 {
            rows[r].insert(c as u32, x);
            cols[c].insert(r as u32);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        cols.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, s)| Reverse((s.len(), c as u32))).collect();
    let mut rank = 0;
    while let Some(Reverse((len, c))) = heap.pop() {
        let current = cols[c as usize].len();
        if current == 0 {
            continue;
        }
        if current != len {
            heap.push(Reverse((current, c)));
            continue;
        }
        let r = *cols[c as usize].iter().min_by_key(|&&r| (rows[r as usize].len(), r)).expect("nonempty column");
        let pivot_row = std::mem::take(&mut rows[r as usize]);
        for k in pivot_row.keys() {
            cols[*k as usize].remove(&r);
        }
        let inv = inv_mod(pivot_row[&c], p);
        let targets: Vec<u32> = cols[c as usize].iter().copied().collect();
        for t in targets {
            let factor = mul_mod(rows[t as usize][&c], inv, p);
            let row = &mut rows[t as usize];
            for (&k, &v) in &pivot_row {
                let old = row.get(&k).copied().unwrap_or(0);
                let new = (old + p - mul_mod(factor, v, p)) % p;
                if new == 0 {
                    row.remove(&k);
                    cols[k as usize].remove(&t);
                } else {
                    row.insert(k, new);
                    cols[k as usize].insert(t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over ℚ as the largest rank over the fixed large primes. The rank
/// mod p never exceeds the rational rank, and equals it unless p divides
/// every maximal nonzero minor.
pub fn rank_q_modular(m: &SparseMatrix) -> usize {
    RANK_PRIMES.iter().map(|&p| rank_mod_p(m, p)).max().unwrap_or(0)
}

/// Exact rank over ℚ by fraction-free row elimination with content
/// removal.
pub fn rank_q_fraction_free(m: &SparseMatrix) -> usize {
    let mut rows: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.triplets() {
        rows[r].insert(c as u32, BigInt::from(v));
    }
    let mut rows: Vec<_> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    while let Some(pos) = (0..rows.len()).min_by_key(|&i| (rows[i].keys().next().copied(), rows[i].len())) {
        let pivot_row = rows.swap_remove(pos);
        let (&c, a) = pivot_row.iter().next().expect("nonempty row");
        let a = a.clone();
        for row in rows.iter_mut() {
            let Some(b) = row.get(&c).cloned() else { continue };
            // row := a·row − b·pivot_row, then divide by the content
            let keys: BTreeSet<u32> = row.keys().chain(pivot_row.keys()).copied().collect();
            let mut next = BTreeMap::new();
            for k in keys {
                let x = row.get(&k).cloned().unwrap_or_default();
                let y = pivot_row.get(&k).cloned().unwrap_or_default();
                let v = &a * x - &b * y;
                if !v.is_zero() {
                    next.insert(k, v);
                }
            }
            let g = next.values().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in next.values_mut() {
                    *v = &*v / &g;
                }
            }
            *row = next;
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)]).unwrap();
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 3), 2);
        assert_eq!(rank_q_modular(&m), 2);
        assert_eq!(rank_q_fraction_free(&m), 2);
        let three = SparseMatrix::from_triplets(1, 1, [(0, 0, 3)]).unwrap();
        assert_eq!(rank_mod_p(&three, 3), 0);
        assert_eq!(rank_q_fraction_free(&three), 1);
    }

    #[test]
    fn negative_entries_mod_large_prime() {
        let m = SparseMatrix::from_triplets(1, 2, [(0, 0, -1), (0, 1, i64::MIN)]).unwrap();
        assert_eq!(rank_mod_p(&m, RANK_PRIMES[0]), 1);
    }
}
