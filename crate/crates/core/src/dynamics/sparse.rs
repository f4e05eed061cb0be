//! Dense-or-sparse storage picked by fill fraction.

use crate::{CsrMatrix, Matrix, Vector};

/// Dense when more than this fraction of entries is nonzero.
const DENSE_FILL: f64 = 0.1;

#[derive(Debug, Clone)]
pub(crate) enum OpRepr {
    Dense(Matrix),
    Sparse(CsrMatrix),
}

impl OpRepr {
    pub fn from_sparse(m: CsrMatrix) -> Self {
        if m.fill() > DENSE_FILL {
            OpRepr::Dense(m.to_dense())
        } else {
            OpRepr::Sparse(m)
        }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        Self::from_sparse(CsrMatrix::from_dense(m))
    }

    /// `self · x`
    pub fn left_mul(&self, x: &Matrix) -> Matrix {
        match self {
            OpRepr::Dense(m) => m.dot(x),
            OpRepr::Sparse(s) => s.left_mul(x),
        }
    }

    /// `x · self`
    pub fn right_mul(&self, x: &Matrix) -> Matrix {
        match self {
            OpRepr::Dense(m) => x.dot(m),
            OpRepr::Sparse(s) => s.right_mul(x),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        match self {
            OpRepr::Dense(m) => m.dot(v),
            OpRepr::Sparse(s) => s.apply(v),
        }
    }

    pub fn one_norm(&self) -> f64 {
        match self {
            OpRepr::Dense(m) => crate::linalg::one_norm(m),
            OpRepr::Sparse(s) => s.one_norm(),
        }
    }

    #[cfg(test)]
    pub fn to_dense(&self) -> Matrix {
        match self {
            OpRepr::Dense(m) => m.clone(),
            OpRepr::Sparse(s) => s.to_dense(),
        }
    }
}
