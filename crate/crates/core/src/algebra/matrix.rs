//! Dense matrices over `F_q` with row reduction.

use super::field::{Fq, FqElem};
use crate::error::{MzvError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    field: Fq,
    rows: usize,
    cols: usize,
    entries: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zeros(field: Fq, rows: usize, cols: usize) -> Self {
        FqMatrix { field, rows, cols, entries: vec![FqElem::ZERO; rows * cols] }
    }

    pub fn identity(field: Fq, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: Fq, cols: usize, rows: &[Vec<FqElem>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(MzvError::InvalidArgument(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            entries.extend_from_slice(r);
        }
        Ok(FqMatrix { field, rows: rows.len(), cols, entries })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: Fq, rows: usize, columns: &[Vec<FqElem>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(MzvError::InvalidArgument(format!("column of length {} in a {rows}-row matrix", c.len())));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FqElem) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(FqElem::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.cols {
            return Err(MzvError::InvalidArgument("column counts differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j);
                m.set(r, j, k.mul(x, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = k.neg(factor);
                for j in c..m.cols {
                    let x = k.add(m.get(i, j), k.mul(neg, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, each with a 1
    /// in its free position and zeros in the other free positions.
    pub fn nullspace(&self) -> Vec<Vec<FqElem>> {
        let k = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![FqElem::ZERO; self.cols];
                x[free] = FqElem::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = k.neg(r.get(row, free));
                }
                x
            })
            .collect()
    }
}
