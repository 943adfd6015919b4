//! Finite abelian `p`-group covers of a connected cube complex.
//!
//! A cocycle basis comes from a spanning tree: integer cochains vanishing
//! on the tree with zero coboundary form a lattice isomorphic to
//! `H^1(X; Z)`. Reducing the first `r` basis vectors modulo `p^{k_i}` gives
//! a surjection `π_1 X → A = Π Z/p^{k_i}`, and the cover has cells
//! `(c, a)` with boundaries twisted by the holonomy of the cocycle.

use std::collections::{BTreeMap, VecDeque};

use super::cube::{CubeComplex, DEFAULT_MAX_CELLS};
use crate::chain::{ChainComplex, SparseMatrix};
use crate::error::{Error, Result};

/// Residues modulo each `p^{k_i}`.
type Elem = Vec<u64>;

struct Target {
    moduli: Vec<u64>,
}

impl Target {
    fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    fn zero(&self) -> Elem {
        vec![0; self.moduli.len()]
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    fn neg(&self, a: &[u64]) -> Elem {
        a.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m).collect()
    }

    fn encode(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.moduli).fold(0, |acc, (x, m)| acc * m + x)
    }

    fn decode(&self, mut i: u64) -> Elem {
        let mut out = vec![0; self.moduli.len()];
        for (slot, m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = i % m;
            i /= m;
        }
        out
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2u64..).take_while(|d| d.checked_mul(*d).is_some_and(|s| s <= p)).all(|d| !p.is_multiple_of(d))
}

/// Tail and head of every edge, read off `∂_1`.
fn edge_ends(x: &CubeComplex) -> Result<Vec<(usize, usize)>> {
    let Some(d1) = x.chain.boundary(1) else {
        return Ok(Vec::new());
    };
    (0..d1.cols())
        .map(|e| match d1.column(e) {
            [(a, va), (b, vb)] if *va == -1 && *vb == 1 => Ok((*a as usize, *b as usize)),
            [(a, va), (b, vb)] if *va == 1 && *vb == -1 => Ok((*b as usize, *a as usize)),
            _ => Err(Error::MalformedInput(format!("edge {e} does not have two distinct endpoints"))),
        })
        .collect()
}

/// Integer cocycles vanishing on a breadth-first spanning tree rooted at
/// vertex 0: a basis, as values on all edges.
pub(crate) fn cocycle_basis(x: &CubeComplex) -> Result<Vec<Vec<i128>>> {
    let n0 = x.chain.dim(0);
    if n0 == 0 {
        return Err(Error::Disconnected);
    }
    let ends = edge_ends(x)?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n0];
    for (e, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let mut seen = vec![false; n0];
    let mut tree = vec![false; ends.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in &incident[v] {
            let (a, b) = ends[e];
            let w = if a == v { b } else { a };
            if !seen[w] {
                seen[w] = true;
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    let free: Vec<usize> = (0..ends.len()).filter(|&e| !tree[e]).collect();
    let slot: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    // columns: for each free edge, (coboundary restricted to 2-cells, unit vector)
    let mut columns: Vec<(BTreeMap<u32, i128>, BTreeMap<u32, i128>)> =
        free.iter().enumerate().map(|(i, _)| (BTreeMap::new(), BTreeMap::from([(i as u32, 1i128)]))).collect();
    if let Some(d2) = x.chain.boundary(2) {
        for f in 0..d2.cols() {
            for &(e, v) in d2.column(f) {
                if let Some(&i) = slot.get(&(e as usize)) {
                    columns[i].0.insert(f as u32, v as i128);
                }
            }
        }
    }
    let kernel = integer_kernel(columns, x.chain.dim(2))?;
    Ok(kernel
        .into_iter()
        .map(|u| {
            let mut full = vec![0i128; ends.len()];
            for (i, v) in u {
                full[free[i as usize]] = v;
            }
            full
        })
        .collect())
}

/// Unimodular column reduction of `M` (given column by column, each paired
/// with its column of `U`). Returns the `U` parts of the columns reduced to
/// zero, a basis of `ker M`.
fn integer_kernel(
    mut columns: Vec<(BTreeMap<u32, i128>, BTreeMap<u32, i128>)>,
    rows: usize,
) -> Result<Vec<BTreeMap<u32, i128>>> {
    let overflow =
        || Error::SizeLimitExceeded { what: "cocycle entry magnitude", actual: usize::MAX, bound: i64::MAX as usize };
    let mut active: Vec<usize> = (0..columns.len()).collect();
    for r in 0..rows as u32 {
        loop {
            let hits: Vec<usize> = active.iter().copied().filter(|&c| columns[c].0.contains_key(&r)).collect();
            if hits.is_empty() {
                break;
            }
            let pivot =
                *hits.iter().min_by_key(|&&c| (columns[c].0[&r].unsigned_abs(), columns[c].0.len(), c)).unwrap();
            if hits.len() == 1 {
                active.retain(|&c| c != pivot);
                break;
            }
            let pv = columns[pivot].0[&r];
            let (pm, pu) = columns[pivot].clone();
            for &c in &hits {
                if c == pivot {
                    continue;
                }
                let q = columns[c].0[&r].div_euclid(pv);
                if q == 0 {
                    continue;
                }
                let (cm, cu) = &mut columns[c];
                for (target, source) in [(cm, &pm), (cu, &pu)] {
                    for (&k, &v) in source {
                        let delta = q.checked_mul(v).ok_or_else(overflow)?;
                        let entry = target.entry(k).or_insert(0);
                        *entry = entry.checked_sub(delta).ok_or_else(overflow)?;
                        if *entry == 0 {
                            target.remove(&k);
                        }
                    }
                }
            }
        }
    }
    Ok(active.into_iter().filter(|&c| columns[c].0.is_empty()).map(|c| columns[c].1.clone()).collect())
}

/// Rank of `H_1(X; Z)`.
pub fn first_betti_integral(x: &CubeComplex) -> Result<usize> {
    Ok(cocycle_basis(x)?.len())
}

/// The cover of `X` associated with `π_1 X → Π Z/p^{k_i}`.
pub fn abelian_p_cover(x: &CubeComplex, p: u64, exponents: &[u32]) -> Result<CubeComplex> {
    abelian_p_cover_bounded(x, p, exponents, DEFAULT_MAX_CELLS)
}

pub fn abelian_p_cover_bounded(x: &CubeComplex, p: u64, exponents: &[u32], max_cells: usize) -> Result<CubeComplex> {
    if !is_prime(p) {
        return Err(Error::MalformedInput(format!("{p} is not prime")));
    }
    if exponents.contains(&0) {
        return Err(Error::MalformedInput("exponents must be positive".into()));
    }
    let moduli = exponents
        .iter()
        .map(|&k| p.checked_pow(k))
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| Error::MalformedInput("cover degree overflows".into()))?;
    let target = Target { moduli };
    let degree = target.order();
    let total = (x.total_cells() as u64).saturating_mul(degree);
    if total > max_cells as u64 {
        return Err(Error::SizeLimitExceeded {
            what: "cells in the cover",
            actual: total.min(usize::MAX as u64) as usize,
            bound: max_cells,
        });
    }

    let basis = cocycle_basis(x)?;
    if exponents.len() > basis.len() {
        return Err(Error::RankTooLarge { requested: exponents.len(), available: basis.len() });
    }
    let ends = edge_ends(x)?;
    let psi: Vec<Elem> = (0..ends.len())
        .map(|e| target.moduli.iter().enumerate().map(|(i, &m)| basis[i][e].rem_euclid(m as i128) as u64).collect())
        .collect();

    let top = x.chain.dims.len();
    // basepoint vertex and closure edges of every cell
    let mut base: Vec<Vec<usize>> = vec![(0..x.chain.dim(0)).collect()];
    let mut closure_edges: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); x.chain.dim(0)]];
    for k in 1..top {
        let d = x.chain.boundary(k).unwrap();
        let mut b = Vec::with_capacity(d.cols());
        let mut ce = Vec::with_capacity(d.cols());
        for c in 0..d.cols() {
            let col = d.column(c);
            let first =
                col.first().ok_or_else(|| Error::MalformedInput(format!("cell {c} of dimension {k} has no faces")))?;
            b.push(base[k - 1][first.0 as usize]);
            let mut edges: Vec<usize> = if k == 1 {
                vec![c]
            } else {
                col.iter().flat_map(|&(f, _)| closure_edges[k - 1][f as usize].iter().copied()).collect()
            };
            edges.sort_unstable();
            edges.dedup();
            ce.push(edges);
        }
        base.push(b);
        closure_edges.push(ce);
    }

    let mut boundaries = Vec::with_capacity(top.saturating_sub(1));
    for k in 1..top {
        let d = x.chain.boundary(k).unwrap();
        let mut columns: Vec<Vec<(u32, i64)>> = Vec::with_capacity(d.cols() * degree as usize);
        for c in 0..d.cols() {
            let pot = potentials(&closure_edges[k][c], &ends, &psi, base[k][c], &target);
            let shifts: Vec<(usize, i64, Elem)> =
                d.column(c).iter().map(|&(f, v)| (f as usize, v, pot[&base[k - 1][f as usize]].clone())).collect();
            for a in 0..degree {
                let here = target.decode(a);
                columns.push(
                    shifts
                        .iter()
                        .map(|(f, v, h)| ((*f as u64 * degree + target.encode(&target.add(&here, h))) as u32, *v))
                        .collect(),
                );
            }
        }
        boundaries.push(SparseMatrix::from_columns(x.chain.dim(k - 1) * degree as usize, columns));
    }
    let dims: Vec<usize> = x.chain.dims.iter().map(|&n| n * degree as usize).collect();
    let chain = ChainComplex::new(dims, boundaries)?;
    chain.check_boundary_squared()?;
    let cells = x
        .cells
        .iter()
        .map(|level| {
            level
                .iter()
                .flat_map(|name| (0..degree).map(move |a| (name, a)))
                .map(|(name, a)| format!("{name}@{:?}", target.decode(a)))
                .collect()
        })
        .collect();
    let exps: Vec<String> = exponents.iter().map(|k| k.to_string()).collect();
    Ok(CubeComplex {
        chain,
        cells,
        index: x.index * degree,
        description: format!("{} / cover with p = {p}, exponents [{}]", x.description, exps.join(",")),
    })
}

/// Cocycle potential on the vertices of a cell's closure, zero at `root`.
fn potentials(
    edges: &[usize],
    ends: &[(usize, usize)],
    psi: &[Elem],
    root: usize,
    target: &Target,
) -> BTreeMap<usize, Elem> {
    let mut pot = BTreeMap::from([(root, target.zero())]);
    let mut changed = true;
    while changed {
        changed = false;
        for &e in edges {
            let (a, b) = ends[e];
            match (pot.contains_key(&a), pot.contains_key(&b)) {
                (true, false) => {
                    let v = target.add(&pot[&a], &psi[e]);
                    pot.insert(b, v);
                    changed = true;
                }
                (false, true) => {
                    let v = target.add(&pot[&b], &target.neg(&psi[e]));
                    pot.insert(a, v);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    pot
}
