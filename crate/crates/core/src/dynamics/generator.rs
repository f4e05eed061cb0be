use super::sparse::OpRepr;
use crate::models::LindbladModel;
use crate::{Matrix, C64};

/// Matrix-form generator `ρ̇ = Aρ + ρA† + Σ 2c·LρR` with `A = −iH − X`.
///
/// The right factor is stored separately because `X` need not be Hermitian
/// for the as-printed generators.
#[derive(Debug, Clone)]
pub struct Generator {
    pub(crate) left: OpRepr,
    pub(crate) right: OpRepr,
    pub(crate) sandwiches: Vec<(C64, OpRepr, OpRepr)>,
    dim: usize,
}

impl Generator {
    pub fn new(model: &LindbladModel) -> Self {
        let h = model.hamiltonian().sparse();
        let x = model.decay_operator();
        let mi = C64::new(0.0, -1.0);
        let left = x.scale(C64::from(-1.0)).add_scaled(h, mi);
        let right = x.scale(C64::from(-1.0)).add_scaled(h, -mi);
        let mut sandwiches = Vec::new();
        for t in model.terms() {
            for (c, l, r) in t.sandwiches() {
                sandwiches.push((c * 2.0, OpRepr::from_sparse(l), OpRepr::from_sparse(r)));
            }
        }
        Generator {
            left: OpRepr::from_sparse(left),
            right: OpRepr::from_sparse(right),
            sandwiches,
            dim: model.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &Matrix) -> Matrix {
        let mut out = self.left.left_mul(rho) + self.right.right_mul(rho);
        for (c, l, r) in &self.sandwiches {
            let lr = r.right_mul(&l.left_mul(rho));
            out.zip_mut_with(&lr, |o, &v| *o += *c * v);
        }
        out
    }

    /// Crude norm bound used for step-size and spectral-radius estimates.
    pub fn norm_bound(&self) -> f64 {
        let mut s = self.left.one_norm() + self.right.one_norm();
        for (c, l, r) in &self.sandwiches {
            s += c.norm() * l.one_norm() * r.one_norm();
        }
        s
    }

    /// Power-iteration estimate of the largest generator eigenvalue magnitude.
    pub fn spectral_radius_estimate(&self, iterations: usize) -> f64 {
        let d = self.dim;
        let mut x = Matrix::from_shape_fn((d, d), |(i, j)| {
            C64::new(1.0 / (1 + i + 2 * j) as f64, ((i * 7 + j * 3) % 5) as f64 * 0.1)
        });
        let mut lambda = 0.0;
        for _ in 0..iterations {
            let y = self.apply(&x);
            let n = crate::linalg::frobenius(&y);
            let nx = crate::linalg::frobenius(&x);
            if n == 0.0 || nx == 0.0 {
                return 0.0;
            }
            lambda = n / nx;
            x = y.mapv(|z| z / n);
        }
        lambda
    }
}
