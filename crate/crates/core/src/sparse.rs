//! Compressed-sparse-row complex matrices.
//!
//! Every model operator is a handful of ladder and projector terms, so
//! operators are stored sparse and densified only where a solver needs it.

use std::collections::BTreeMap;

use crate::{Matrix, Vector, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: vec![C64::from(1.0); n],
        }
    }

    /// Duplicates are summed; entries that end up exactly zero are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) outside {nrows}×{ncols}");
            *rows[i].entry(j).or_insert(C64::from(0.0)) += v;
        }
        Self::from_rows(nrows, ncols, rows.into_iter().map(|r| r.into_iter()))
    }

    fn from_rows<R: Iterator<Item = (usize, C64)>>(nrows: usize, ncols: usize, rows: impl Iterator<Item = R>) -> Self {
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in rows {
            for (j, v) in row {
                if v != C64::from(0.0) {
                    indices.push(j);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows, ncols, indptr, indices, data }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let (r, c) = m.dim();
        Self::from_rows(r, c, m.rows().into_iter().map(|row| row.into_iter().copied().enumerate().collect::<Vec<_>>().into_iter()))
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros((self.nrows, self.ncols));
        for (i, j, v) in self.iter() {
            m[[i, j]] = v;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Fraction of stored entries.
    pub fn fill(&self) -> f64 {
        self.nnz() as f64 / ((self.nrows * self.ncols).max(1)) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.data[k]))
        })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.data[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let lo = self.indptr[i];
        let hi = self.indptr[i + 1];
        match self.indices[lo..hi].binary_search(&j) {
            Ok(k) => self.data[lo + k],
            Err(_) => C64::from(0.0),
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let rows = (0..self.nrows).map(|i| self.row(i).map(|(j, v)| (j, f(v))).collect::<Vec<_>>().into_iter());
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(i, j, v)| (j, i, v)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(i, j, v)| (j, i, v.conj())))
    }

    /// `self + c·other`
    pub fn add_scaled(&self, other: &CsrMatrix, c: C64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch in sparse sum");
        let rows = (0..self.nrows).map(|i| {
            let mut acc: BTreeMap<usize, C64> = self.row(i).collect();
            for (j, v) in other.row(i) {
                *acc.entry(j).or_insert(C64::from(0.0)) += c * v;
            }
            acc.into_iter()
        });
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in sparse product");
        let rows = (0..self.nrows).map(|i| {
            let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    *acc.entry(j).or_insert(C64::from(0.0)) += a * b;
                }
            }
            acc.into_iter()
        });
        Self::from_rows(self.nrows, other.ncols, rows)
    }

    /// Kronecker product, `self` most significant.
    pub fn kron(&self, other: &CsrMatrix) -> Self {
        let (r2, c2) = (other.nrows, other.ncols);
        let rows = (0..self.nrows * r2).map(|row| {
            let (i1, i2) = (row / r2, row % r2);
            self.row(i1)
                .flat_map(move |(j1, a)| other.row(i2).map(move |(j2, b)| (j1 * c2 + j2, a * b)))
                .collect::<Vec<_>>()
                .into_iter()
        });
        Self::from_rows(self.nrows * r2, self.ncols * c2, rows)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector::from_shape_fn(self.nrows, |i| self.row(i).map(|(j, a)| a * v[j]).sum())
    }

    /// Dense product `self · x`.
    pub fn left_mul(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros((self.nrows, x.ncols()));
        for (i, j, v) in self.iter() {
            let src = x.row(j);
            out.row_mut(i).zip_mut_with(&src, |o, &s| *o += v * s);
        }
        out
    }

    /// Dense product `x · self`.
    pub fn right_mul(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros((x.nrows(), self.ncols));
        for (i, j, v) in self.iter() {
            let src = x.column(i);
            out.column_mut(j).zip_mut_with(&src, |o, &s| *o += s * v);
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (largest column sum).
    pub fn one_norm(&self) -> f64 {
        let mut cols = vec![0.0; self.ncols];
        for (_, j, v) in self.iter() {
            cols[j] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// `max |A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.add_scaled(&self.adjoint(), C64::from(-1.0)).max_abs()
    }
}
