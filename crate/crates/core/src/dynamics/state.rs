use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, trace};
use crate::{Error, Matrix, Result, Vector, C64};

/// Smallest eigenvalue below this is a warning ...
pub const PSD_WARN: f64 = -1e-8;
/// ... and below this an error.
pub const PSD_ERROR: f64 = -1e-5;

/// `|ψ⟩⟨ψ|`.
pub fn ket_to_dm(psi: &Vector) -> Matrix {
    let d = psi.len();
    Matrix::from_shape_fn((d, d), |(i, j)| psi[i] * psi[j].conj())
}

/// Computational basis vector `|index⟩`.
pub fn basis_ket(dim: usize, index: usize) -> Result<Vector> {
    if index >= dim {
        return Err(Error::invalid(format!("basis index {index} out of range for dimension {dim}")));
    }
    let mut v = Vector::zeros(dim);
    v[index] = C64::from(1.0);
    Ok(v)
}

/// Validate a density matrix; returns soft warnings.
pub fn check_density(rho: &Matrix, what: &str) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    if rho.nrows() != rho.ncols() {
        return Err(Error::invalid(format!("{what}: density matrix must be square")));
    }
    let herm = hermiticity_defect(rho);
    if herm > 1e-8 {
        return Err(Error::invalid(format!("{what}: not Hermitian (defect {herm:.3e})")));
    }
    let tr = trace(rho);
    if (tr - 1.0).norm() > 1e-8 {
        return Err(Error::invalid(format!("{what}: trace {:.12} ≠ 1", tr.re)));
    }
    let min = min_eigenvalue(rho)?;
    if min < PSD_ERROR {
        return Err(Error::invalid(format!("{what}: not positive semidefinite (λ_min = {min:.3e})")));
    }
    if min < PSD_WARN {
        warnings.push(format!("{what}: slightly negative eigenvalue {min:.3e}"));
    }
    Ok(warnings)
}

pub fn min_eigenvalue(rho: &Matrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(&crate::linalg::hermitian_part(rho))?;
    Ok(ev.iter().cloned().fold(f64::INFINITY, f64::min))
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("time grid is empty"));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid contains non-finite values"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("time grid must be non-decreasing"));
    }
    Ok(())
}
