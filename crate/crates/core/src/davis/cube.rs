//! The chamber `K_L` and the basic construction `U(G, K_L)` as cube
//! complexes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, FiniteQuotient};
use crate::chain::{ChainComplex, SparseMatrix, TripletMatrix};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Default bound on the total number of cells of a constructed complex.
pub const DEFAULT_MAX_CELLS: usize = 5_000_000;

/// The face of `[0,1]^S` where coordinates in `mirrors` are 1, coordinates
/// in `free` vary and all others are 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChamberCell {
    pub mirrors: Simplex,
    pub free: Simplex,
}

impl ChamberCell {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Codimension-one faces with their signs in the cellular boundary.
    /// For the `i`-th free coordinate `s`, setting `s = 1` has sign `(-1)^i`
    /// and setting `s = 0` has sign `-(-1)^i`.
    pub fn faces(&self) -> Vec<(ChamberCell, i64)> {
        let mut out = Vec::with_capacity(2 * self.free.len());
        for (i, s) in self.free.vertices().iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let rest = self.free.without(s);
            out.push((ChamberCell { mirrors: self.mirrors.with(s), free: rest.clone() }, sign));
            out.push((ChamberCell { mirrors: self.mirrors.clone(), free: rest }, -sign));
        }
        out
    }
}

impl std::fmt::Display for ChamberCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}|{})", self.mirrors, self.free)
    }
}

/// Cells of `K_L`: pairs `(μ, F)` of disjoint vertex sets with `μ ∪ F` a
/// simplex of `L` or empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub cells: Vec<Vec<ChamberCell>>,
}

pub fn chamber(l: &SimplicialComplex) -> Chamber {
    let mut simplices: Vec<Simplex> = l.simplices().cloned().collect();
    simplices.push(Simplex::empty());
    let top = l.dim().max(-1) + 1;
    let mut cells: Vec<Vec<ChamberCell>> = vec![Vec::new(); top as usize + 1];
    for sigma in simplices {
        for free in sigma.faces() {
            let mirrors = sigma.minus(&free);
            cells[free.len()].push(ChamberCell { mirrors, free });
        }
    }
    for level in &mut cells {
        level.sort();
    }
    Chamber { cells }
}

impl Chamber {
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The mirror `K_s`: cells lying in the face `x_s = 1`.
    pub fn mirror(&self, s: &crate::label::VertexId) -> Vec<&ChamberCell> {
        self.cells.iter().flatten().filter(|c| c.mirrors.contains(s)).collect()
    }

    /// `K_L` itself as a cube complex.
    pub fn cube_complex(&self) -> CubeComplex {
        let pos: BTreeMap<&ChamberCell, usize> =
            self.cells.iter().flat_map(|level| level.iter().enumerate().map(|(i, c)| (c, i))).collect();
        let dims = self.counts();
        let boundaries = (1..self.cells.len())
            .map(|k| {
                let columns = self.cells[k]
                    .iter()
                    .map(|c| c.faces().into_iter().map(|(f, s)| (pos[&f] as u32, s)).collect())
                    .collect();
                SparseMatrix::from_columns(dims[k - 1], columns)
            })
            .collect();
        CubeComplex {
            chain: ChainComplex { dims, boundaries },
            cells: self.cells.iter().map(|level| level.iter().map(|c| c.to_string()).collect()).collect(),
            index: 1,
            description: "chamber".into(),
        }
    }
}

/// A finite cube complex with its cellular chain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeComplex {
    pub chain: ChainComplex,
    /// Cell names by dimension.
    pub cells: Vec<Vec<String>>,
    /// Normalizing index: the order of the quotient group, times the degree
    /// of any cover taken since.
    pub index: u64,
    pub description: String,
}

impl CubeComplex {
    pub fn counts(&self) -> &[usize] {
        &self.chain.dims
    }

    pub fn total_cells(&self) -> usize {
        self.chain.dims.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chain.euler_characteristic()
    }
}

#[derive(Serialize, Deserialize)]
struct CubeComplexJson {
    description: String,
    index: u64,
    counts: Vec<usize>,
    cells: Vec<Vec<String>>,
    boundaries: Vec<TripletMatrix>,
}

impl Serialize for CubeComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CubeComplexJson {
            description: self.description.clone(),
            index: self.index,
            counts: self.chain.dims.clone(),
            cells: self.cells.clone(),
            boundaries: self.chain.boundaries.iter().map(TripletMatrix::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubeComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CubeComplexJson::deserialize(d)?;
        let boundaries = raw
            .boundaries
            .into_iter()
            .map(SparseMatrix::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let chain = ChainComplex::new(raw.counts, boundaries).map_err(D::Error::custom)?;
        chain.check_boundary_squared().map_err(D::Error::custom)?;
        if raw.cells.len() != chain.dims.len() || raw.cells.iter().zip(&chain.dims).any(|(c, &n)| c.len() != n) {
            return Err(D::Error::custom("cell names do not match the cell counts"));
        }
        Ok(CubeComplex { chain, cells: raw.cells, index: raw.index, description: raw.description })
    }
}

/// `U(G, K_L)` for `φ: W_L → G`: one copy of each chamber cell `(μ, F)` per
/// left coset of `φ(W_μ)`, glued along mirrors.
pub fn basic_construction(l: &SimplicialComplex, q: &FiniteQuotient) -> Result<CubeComplex> {
    basic_construction_bounded(l, q, DEFAULT_MAX_CELLS)
}

pub fn basic_construction_bounded(l: &SimplicialComplex, q: &FiniteQuotient, max_cells: usize) -> Result<CubeComplex> {
    let group = q.validate(l)?;
    build(l, q, &group, max_cells)
}

fn build(l: &SimplicialComplex, q: &FiniteQuotient, group: &FiniteGroup, max_cells: usize) -> Result<CubeComplex> {
    let ch = chamber(l);
    let order = group.order();

    // coset partitions, one per mirror set μ
    let mut partitions: BTreeMap<Simplex, (Vec<u32>, usize)> = BTreeMap::new();
    for c in ch.cells.iter().flatten() {
        if !partitions.contains_key(&c.mirrors) {
            partitions.insert(c.mirrors.clone(), group.left_cosets(&q.indices_of(&c.mirrors)));
        }
    }

    let mut total = 0usize;
    let mut offset: BTreeMap<&ChamberCell, usize> = BTreeMap::new();
    let mut dims = Vec::with_capacity(ch.cells.len());
    for level in &ch.cells {
        let mut n = 0usize;
        for c in level {
            offset.insert(c, n);
            n += partitions[&c.mirrors].1;
        }
        total += n;
        if total > max_cells {
            return Err(Error::SizeLimitExceeded {
                what: "cells in the basic construction",
                actual: total,
                bound: max_cells,
            });
        }
        dims.push(n);
    }

    // least element of each coset
    let reps: BTreeMap<&Simplex, Vec<usize>> = partitions
        .iter()
        .map(|(mu, (coset, count))| {
            let mut rep = vec![usize::MAX; *count];
            for (g, &c) in coset.iter().enumerate().take(order) {
                let j = c as usize;
                if rep[j] == usize::MAX {
                    rep[j] = g;
                }
            }
            (mu, rep)
        })
        .collect();

    let mut cells: Vec<Vec<String>> = Vec::with_capacity(ch.cells.len());
    let mut boundaries = Vec::new();
    for (k, level) in ch.cells.iter().enumerate() {
        let mut names = Vec::with_capacity(dims[k]);
        let mut columns: Vec<Vec<(u32, i64)>> = Vec::with_capacity(dims[k]);
        for c in level {
            let faces = c.faces();
            for &g in &reps[&c.mirrors] {
                names.push(format!("g{g}{c}"));
                if k == 0 {
                    continue;
                }
                let col = faces
                    .iter()
                    .map(|(f, sign)| {
                        let j = partitions[&f.mirrors].0[g] as usize;
                        ((offset[f] + j) as u32, *sign)
                    })
                    .collect();
                columns.push(col);
            }
        }
        if k > 0 {
            boundaries.push(SparseMatrix::from_columns(dims[k - 1], columns));
        }
        cells.push(names);
    }
    let chain = ChainComplex::new(dims, boundaries)?;
    chain.check_boundary_squared()?;
    Ok(CubeComplex {
        chain,
        cells,
        index: order as u64,
        description: format!("basic construction over a group of order {order}"),
    })
}
