//! Sparse integer matrices and finite chain complexes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column-major sparse matrix with `i64` entries. Columns are kept sorted by
/// row with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are added.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut columns: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::MalformedInput(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            normalize(col);
        }
        Ok(SparseMatrix { rows, columns })
    }

    pub fn from_columns(rows: usize, mut columns: Vec<Vec<(u32, i64)>>) -> Self {
        for col in &mut columns {
            normalize(col);
        }
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            cols[r].push((c as u32, v));
        }
        SparseMatrix { rows: self.cols(), columns: cols }
    }

    /// `self * other`, with overflow reported as an error.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols() != other.rows {
            return Err(Error::MalformedInput("matrix shapes do not compose".into()));
        }
        let mut out = Vec::with_capacity(other.cols());
        for col in &other.columns {
            let mut acc: Vec<(u32, i64)> = Vec::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k as usize] {
                    let prod = a.checked_mul(b).ok_or_else(overflow)?;
                    acc.push((r, prod));
                }
            }
            normalize_checked(&mut acc)?;
            out.push(acc);
        }
        Ok(SparseMatrix { rows: self.rows, columns: out })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols()]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }
}

fn overflow() -> Error {
    Error::SizeLimitExceeded { what: "matrix entry magnitude", actual: usize::MAX, bound: i64::MAX as usize }
}

fn normalize(col: &mut Vec<(u32, i64)>) {
    normalize_checked(col).expect("input entries fit in i64")
}

fn normalize_checked(col: &mut Vec<(u32, i64)>) -> Result<()> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
    for &(r, v) in col.iter() {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = last.1.checked_add(v).ok_or_else(overflow)?,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    *col = out;
    Ok(())
}

/// `C_top → ... → C_1 → C_0`, with `boundaries[k - 1] = ∂_k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::MalformedInput(format!(
                "{} chain groups need {} boundary maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[k] || b.cols() != dims[k + 1] {
                return Err(Error::MalformedInput(format!(
                    "boundary of degree {} is {}x{}, expected {}x{}",
                    k + 1,
                    b.rows(),
                    b.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    /// Top degree, or `None` for the zero complex.
    pub fn top(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, or `None` when it is the zero map out of or into a zero group.
    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Checks `∂_{k-1} ∂_k = 0` in every degree.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for k in 2..self.dims.len() {
            let prod = self.boundaries[k - 2].mul(&self.boundaries[k - 1])?;
            if !prod.is_zero() {
                return Err(Error::MalformedInput(format!("boundary squared is nonzero in degree {k}")));
            }
        }
        Ok(())
    }
}

/// JSON form of one boundary map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl From<&SparseMatrix> for TripletMatrix {
    fn from(m: &SparseMatrix) -> Self {
        TripletMatrix { rows: m.rows(), cols: m.cols(), entries: m.triplets().collect() }
    }
}

impl TryFrom<TripletMatrix> for SparseMatrix {
    type Error = Error;

    fn try_from(t: TripletMatrix) -> Result<Self> {
        SparseMatrix::from_triplets(t.rows, t.cols, t.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_accumulate_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, 1), (1, 1, -1)]).unwrap();
        assert_eq!(m.dense(), vec![vec![3, 0], vec![0, 0]]);
        assert_eq!(m.nnz(), 1);
        assert!(SparseMatrix::from_triplets(1, 1, [(1, 0, 1)]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_triplets(2, 3, [(0, 0, 1), (0, 2, 2), (1, 1, -1)]).unwrap();
        let b = a.transpose();
        assert_eq!(b.dense(), vec![vec![1, 0], vec![0, -1], vec![2, 0]]);
        assert_eq!(a.mul(&b).unwrap().dense(), vec![vec![5, 0], vec![0, 1]]);
    }

    #[test]
    fn triangle_boundary_squares_to_zero() {
        // a 2-simplex with vertices 0,1,2 and edges 01, 02, 12
        let d1 =
            SparseMatrix::from_triplets(3, 3, [(0, 0, -1), (1, 0, 1), (0, 1, -1), (2, 1, 1), (1, 2, -1), (2, 2, 1)])
                .unwrap();
        let d2 = SparseMatrix::from_triplets(3, 1, [(0, 0, 1), (1, 0, -1), (2, 0, 1)]).unwrap();
        let c = ChainComplex::new(vec![3, 3, 1], vec![d1, d2]).unwrap();
        c.check_boundary_squared().unwrap();
        assert_eq!(c.euler_characteristic(), 1);
    }
}
