use super::space::{dimension_cap, SpaceSpec};
use crate::sparse::CsrMatrix;
use crate::{Error, Matrix, Result, Vector, C64};

/// Sparse operator on a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: SpaceSpec,
    matrix: CsrMatrix,
}

impl Operator {
    pub fn new(space: SpaceSpec, matrix: Matrix) -> Result<Self> {
        Self::from_sparse(space, CsrMatrix::from_dense(&matrix))
    }

    pub fn from_sparse(space: SpaceSpec, matrix: CsrMatrix) -> Result<Self> {
        let d = space.dim();
        if (matrix.nrows(), matrix.ncols()) != (d, d) {
            return Err(Error::invalid(format!(
                "matrix shape {:?} does not match space dimension {d}",
                (matrix.nrows(), matrix.ncols())
            )));
        }
        Ok(Operator { space, matrix })
    }

    pub fn identity(space: &SpaceSpec) -> Self {
        Operator {
            space: space.clone(),
            matrix: CsrMatrix::identity(space.dim()),
        }
    }

    pub fn zeros(space: &SpaceSpec) -> Self {
        let d = space.dim();
        Operator {
            space: space.clone(),
            matrix: CsrMatrix::zeros(d, d),
        }
    }

    /// `|to⟩⟨from|` in the computational basis of `space`.
    pub fn transition(space: &SpaceSpec, to: usize, from: usize) -> Result<Self> {
        let d = space.dim();
        if to >= d || from >= d {
            return Err(Error::invalid("basis index out of range"));
        }
        Ok(Operator {
            space: space.clone(),
            matrix: CsrMatrix::from_triplets(d, d, [(to, from, C64::from(1.0))]),
        })
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn sparse(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn to_dense(&self) -> Matrix {
        self.matrix.to_dense()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dag(&self) -> Self {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: impl Into<C64>) -> Self {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.scale(c.into()),
        }
    }

    fn check_same(&self, other: &Operator, what: &str) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "{what}: operands act on different spaces"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.check_same(other, "sum")?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: self.matrix.add_scaled(&other.matrix, C64::from(1.0)),
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.check_same(other, "difference")?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: self.matrix.add_scaled(&other.matrix, C64::from(-1.0)),
        })
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Operator) -> Result<Self> {
        self.check_same(other, "product")?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    pub fn add_assign_scaled(&mut self, other: &Operator, c: impl Into<C64>) -> Result<()> {
        self.check_same(other, "sum")?;
        self.matrix = self.matrix.add_scaled(&other.matrix, c.into());
        Ok(())
    }

    /// Kronecker product with concatenated space.
    pub fn tensor(&self, other: &Operator) -> Result<Self> {
        let space = self.space.tensor(&other.space);
        space.checked_dim(dimension_cap())?;
        Ok(Operator {
            space,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// Lift a single-factor operator into `full` at factor `index`,
    /// tensoring with identities on every other factor.
    pub fn embed(&self, full: &SpaceSpec, index: usize) -> Result<Self> {
        if index >= full.factors().len() {
            return Err(Error::invalid(format!("factor index {index} out of range")));
        }
        Self::product(full, &[(index, self)])
    }

    /// Tensor product over all factors of `full`, taking `parts[k] = (i, op)`
    /// on factor `i` and the identity elsewhere.
    pub fn product(full: &SpaceSpec, parts: &[(usize, &Operator)]) -> Result<Self> {
        if parts.iter().any(|(k, _)| *k >= full.factors().len()) {
            return Err(Error::invalid("factor index out of range"));
        }
        full.checked_dim(dimension_cap())?;
        let mut m: Option<CsrMatrix> = None;
        for (i, f) in full.factors().iter().enumerate() {
            let local = match parts.iter().find(|(k, _)| *k == i) {
                Some((_, op)) => {
                    if !op.space.is_single() || &op.space.factors()[0] != f {
                        return Err(Error::SpaceMismatch(format!(
                            "operator does not act on factor '{}'",
                            f.label
                        )));
                    }
                    op.matrix.clone()
                }
                None => CsrMatrix::identity(f.dim),
            };
            m = Some(match m {
                None => local,
                Some(acc) => acc.kron(&local),
            });
        }
        Ok(Operator {
            space: full.clone(),
            matrix: m.expect("space has at least one factor"),
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.matrix.adjoint().matmul(&self.matrix);
        prod.add_scaled(&CsrMatrix::identity(self.dim()), C64::from(-1.0)).max_abs() <= tol
    }

    pub fn apply(&self, psi: &Vector) -> Vector {
        self.matrix.apply(psi)
    }

    /// `⟨ψ|A|ψ⟩`
    pub fn expect(&self, psi: &Vector) -> C64 {
        psi.iter().zip(self.matrix.apply(psi).iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `tr(self · ρ)`.
    pub fn expect_rho(&self, rho: &Matrix) -> C64 {
        self.matrix.iter().map(|(i, k, v)| v * rho[[k, i]]).sum()
    }
}
