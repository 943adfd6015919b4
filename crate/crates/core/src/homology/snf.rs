//! Sparse Smith normal form over the integers.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::int::{invariant_factors, Int};
use crate::chain::SparseMatrix;
use crate::error::{Error, Result};

/// Integer matrix in triplet form with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    /// Sorts the entries and rejects duplicates, zeros and out-of-range
    /// positions.
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        entries.sort_by_key(|a| (a.0, a.1));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::MalformedInput(format!("duplicate entry at ({}, {})", w[0].0, w[0].1)));
            }
        }
        for (r, c, v) in &entries {
            if *r >= rows || *c >= cols {
                return Err(Error::MalformedInput(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if v.is_zero() {
                return Err(Error::MalformedInput(format!("stored zero at ({r}, {c})")));
            }
        }
        Ok(SparseIntMatrix { rows, cols, entries })
    }
}

impl From<&SparseMatrix> for SparseIntMatrix {
    fn from(m: &SparseMatrix) -> Self {
        let mut entries: Vec<_> = m.triplets().map(|(r, c, v)| (r, c, BigInt::from(v))).collect();
        entries.sort_by_key(|a| (a.0, a.1));
        SparseIntMatrix { rows: m.rows(), cols: m.cols(), entries }
    }
}

/// The nonzero diagonal of the Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    /// Number of invariant factors divisible by `p`.
    pub fn count_divisible_by(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.divisors.iter().filter(|d| (*d % &p).is_zero()).count()
    }
}

struct Work {
    rows: Vec<BTreeMap<u32, Int>>,
    cols: Vec<BTreeSet<u32>>,
    diagonal: Vec<Int>,
}

impl Work {
    fn new(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Int)>) -> Self {
        let mut w = Work { rows: vec![BTreeMap::new(); rows], cols: vec![BTreeSet::new(); cols], diagonal: Vec::new() };
        for (r, c, v) in entries {
            if !v.is_zero() {
                w.rows[r].insert(c as u32, v);
                w.cols[c].insert(r as u32);
            }
        }
        w
    }

    /// `row[target] -= q * row[source]`.
    fn row_op(&mut self, target: u32, source: u32, q: &Int) {
        let src: Vec<(u32, Int)> = self.rows[source as usize].iter().map(|(c, v)| (*c, v.clone())).collect();
        let row = &mut self.rows[target as usize];
        for (c, v) in src {
            let old = row.get(&c).cloned().unwrap_or(Int::Small(0));
            let new = old.sub_mul(q, &v);
            if new.is_zero() {
                row.remove(&c);
                self.cols[c as usize].remove(&target);
            } else {
                row.insert(c, new);
                self.cols[c as usize].insert(target);
            }
        }
    }

    fn drop_row(&mut self, r: u32) {
        for c in std::mem::take(&mut self.rows[r as usize]).into_keys() {
            self.cols[c as usize].remove(&r);
        }
    }

    fn drop_col(&mut self, c: u32) {
        for r in std::mem::take(&mut self.cols[c as usize]) {
            self.rows[r as usize].remove(&c);
        }
    }

    /// Clears the pivot column with row operations when every entry is a
    /// multiple of the pivot. With a unit pivot the pivot row can then be
    /// dropped, because the matching column operations touch nothing else.
    fn eliminate_unit(&mut self, r: u32, c: u32) {
        let pivot = self.rows[r as usize][&c].clone();
        let others: Vec<u32> = self.cols[c as usize].iter().copied().filter(|&x| x != r).collect();
        for t in others {
            let b = self.rows[t as usize][&c].clone();
            let q = b.div_floor(&pivot);
            self.row_op(t, r, &q);
        }
        self.diagonal.push(pivot);
        self.drop_row(r);
        self.drop_col(c);
    }

    /// Unit pivots, sparsest column first, until none remain.
    fn unit_phase(&mut self) {
        loop {
            let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
                .cols
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_empty())
                .map(|(c, s)| Reverse((s.len(), c as u32)))
                .collect();
            let mut progress = false;
            while let Some(Reverse((len, c))) = heap.pop() {
                let current = self.cols[c as usize].len();
                if current == 0 {
                    continue;
                }
                if current != len {
                    heap.push(Reverse((current, c)));
                    continue;
                }
                let pivot_row = self.cols[c as usize]
                    .iter()
                    .copied()
                    .filter(|&r| self.rows[r as usize][&c].is_unit())
                    .min_by_key(|&r| (self.rows[r as usize].len(), r));
                if let Some(r) = pivot_row {
                    self.eliminate_unit(r, c);
                    progress = true;
                }
            }
            if !progress {
                return;
            }
        }
    }

    /// Smallest magnitude, then fewest fill-ins, then `(row, col)`.
    fn choose_pivot(&self) -> Option<(u32, u32)> {
        let mut best: Option<(u32, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let better = match best {
                    None => true,
                    Some((br, bc)) => {
                        let bv = &self.rows[br as usize][&bc];
                        match v.cmp_magnitude(bv) {
                            Ordering::Less => true,
                            Ordering::Greater => false,
                            Ordering::Equal => {
                                let cost = |r: u32, c: u32| {
                                    (self.rows[r as usize].len() - 1) * (self.cols[c as usize].len() - 1)
                                };
                                (cost(r as u32, *c), r as u32, *c) < (cost(br, bc), br, bc)
                            }
                        }
                    }
                };
                if better {
                    best = Some((r as u32, *c));
                }
            }
        }
        best
    }

    fn general_phase(&mut self) {
        while let Some((r, c)) = self.choose_pivot() {
            let pivot = self.rows[r as usize][&c].clone();
            let mut reduced = false;
            let others: Vec<u32> = self.cols[c as usize].iter().copied().filter(|&x| x != r).collect();
            for t in others {
                let b = self.rows[t as usize][&c].clone();
                let q = b.div_floor(&pivot);
                reduced |= !pivot.divides(&b);
                self.row_op(t, r, &q);
            }
            if reduced {
                continue;
            }
            // the pivot column is clear, so column operations only touch row r
            let row: Vec<(u32, Int)> =
                self.rows[r as usize].iter().filter(|(k, _)| **k != c).map(|(k, v)| (*k, v.clone())).collect();
            for (k, b) in row {
                if !pivot.divides(&b) {
                    let rem = b.sub_mul(&b.div_floor(&pivot), &pivot);
                    if rem.is_zero() {
                        self.rows[r as usize].remove(&k);
                        self.cols[k as usize].remove(&r);
                    } else {
                        self.rows[r as usize].insert(k, rem);
                    }
                    reduced = true;
                }
            }
            if reduced {
                continue;
            }
            self.diagonal.push(pivot.abs());
            self.drop_row(r);
            self.drop_col(c);
        }
    }
}

fn finish(mut w: Work) -> SmithForm {
    w.unit_phase();
    w.general_phase();
    SmithForm { rank: w.diagonal.len(), divisors: invariant_factors(&w.diagonal) }
}

/// Smith normal form of an `i64` matrix.
pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    finish(Work::new(m.rows(), m.cols(), m.triplets().map(|(r, c, v)| (r, c, Int::Small(v)))))
}

/// Smith normal form of an arbitrary-precision matrix.
pub fn smith_normal_form_big(m: &SparseIntMatrix) -> SmithForm {
    finish(Work::new(m.rows, m.cols, m.entries.iter().map(|(r, c, v)| (*r, *c, Int::from_big(v.clone())))))
}
