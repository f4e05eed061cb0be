use crate::hilbert::{Operator, SpaceSpec};
use crate::linalg;
use crate::{CsrMatrix, Error, Matrix, Result, C64};

use super::dissipator::DissipatorTerm;

/// Hamiltonian plus generalized dissipator terms on one space.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    name: String,
    hamiltonian: Operator,
    terms: Vec<DissipatorTerm>,
    warnings: Vec<String>,
}

impl LindbladModel {
    pub fn new(name: impl Into<String>, hamiltonian: Operator) -> Self {
        LindbladModel {
            name: name.into(),
            hamiltonian,
            terms: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &SpaceSpec {
        self.hamiltonian.space()
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn terms(&self) -> &[DissipatorTerm] {
        &self.terms
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    /// Add a term; zero-coefficient terms are dropped.
    pub fn push(&mut self, term: DissipatorTerm) -> Result<()> {
        if term.left.space() != self.space() {
            return Err(Error::SpaceMismatch(format!(
                "term '{}' does not act on the model space",
                term.label
            )));
        }
        if !term.is_zero() {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn push_lindblad(&mut self, rate: f64, op: Operator, label: &str) -> Result<()> {
        if rate != 0.0 {
            self.push(DissipatorTerm::lindblad(rate, op, label))?;
        }
        Ok(())
    }

    pub fn add_hamiltonian(&mut self, h: &Operator) -> Result<()> {
        self.hamiltonian = self.hamiltonian.add(h)?;
        Ok(())
    }

    /// `ρ̇ = −i[H, ρ] + Σ terms`, evaluated directly.
    pub fn apply(&self, rho: &Matrix) -> Matrix {
        let h = self.hamiltonian.sparse();
        let mut out = (h.left_mul(rho) - h.right_mul(rho)).mapv(|z| z * C64::new(0.0, -1.0));
        for t in &self.terms {
            out = out + t.apply(rho);
        }
        out
    }

    /// `|tr L[ρ]|` maximized over `probes`.
    pub fn trace_defect(&self, probes: &[Matrix]) -> f64 {
        probes
            .iter()
            .map(|r| linalg::trace(&self.apply(r)).norm())
            .fold(0.0, f64::max)
    }

    /// Sum of the non-sandwich operators `X` in `−Xρ − ρX`.
    pub fn decay_operator(&self) -> CsrMatrix {
        let d = self.dim();
        let mut k = CsrMatrix::zeros(d, d);
        for t in &self.terms {
            if let Some(x) = t.decay_operator() {
                k = k.add_scaled(&x, C64::from(1.0));
            }
        }
        k
    }

    /// Hermitian part of `H` is checked against `tol`.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let defect = self.hamiltonian.sparse().hermiticity_defect();
        if defect > tol {
            return Err(Error::invalid(format!(
                "Hamiltonian of '{}' is not Hermitian (defect {defect:.3e})",
                self.name
            )));
        }
        Ok(())
    }

    /// Trace preservation holds for every `ρ` iff `Σ_sandwich 2c·RL = 2X`;
    /// returns the largest entry of the difference.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut acc = self.decay_operator().scale(C64::from(-2.0));
        for t in &self.terms {
            for (c, l, r) in t.sandwiches() {
                acc = acc.add_scaled(&r.matmul(&l), c * 2.0);
            }
        }
        acc.max_abs()
    }
}
