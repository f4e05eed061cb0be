use serde::{Deserialize, Serialize};

use crate::hilbert::Operator;
use crate::linalg::dagger;
use crate::{CsrMatrix, Error, Matrix, Result, C64};

/// Shape of a generalized dissipator `c·F(L, R, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermForm {
    /// `2LρR − RLρ − ρRL`
    Full,
    /// `2LρR`
    Sandwich,
    /// `−RLρ − ρRL`
    Decay,
}

/// One generator block `c·F(L, R, ρ)` (plus its Hermitian conjugate when
/// `add_hc`). A standard Lindblad term `γ D[A]` is `Full` with `L = A`,
/// `R = A†`.
#[derive(Debug, Clone)]
pub struct DissipatorTerm {
    pub coeff: C64,
    pub left: Operator,
    pub right: Operator,
    pub add_hc: bool,
    pub form: TermForm,
    pub label: String,
}

impl DissipatorTerm {
    pub fn new(
        coeff: impl Into<C64>,
        left: Operator,
        right: Operator,
        form: TermForm,
        add_hc: bool,
        label: impl Into<String>,
    ) -> Result<Self> {
        if left.space() != right.space() {
            return Err(Error::SpaceMismatch(
                "dissipator operands act on different spaces".into(),
            ));
        }
        Ok(DissipatorTerm {
            coeff: coeff.into(),
            left,
            right,
            add_hc,
            form,
            label: label.into(),
        })
    }

    /// `rate · D[A]`.
    pub fn lindblad(rate: f64, a: Operator, label: impl Into<String>) -> Self {
        let ad = a.dag();
        DissipatorTerm {
            coeff: C64::from(rate),
            left: a,
            right: ad,
            add_hc: false,
            form: TermForm::Full,
            label: label.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.norm() == 0.0
    }

    /// Contribution to `ρ̇`.
    pub fn apply(&self, rho: &Matrix) -> Matrix {
        let l = self.left.sparse();
        let r = self.right.sparse();
        let mut out = Matrix::zeros(rho.raw_dim());
        if self.form != TermForm::Decay {
            out = out + r.right_mul(&l.left_mul(rho)).mapv(|z| z * 2.0);
        }
        if self.form != TermForm::Sandwich {
            let rl = r.matmul(l);
            out = out - rl.left_mul(rho) - rl.right_mul(rho);
        }
        out.mapv_inplace(|z| z * self.coeff);
        if self.add_hc {
            let h = dagger(&out);
            out = out + h;
        }
        out
    }

    /// Operator `X` such that the non-sandwich part reads `−Xρ − ρX`
    /// (zero for pure sandwiches).
    pub fn decay_operator(&self) -> Option<CsrMatrix> {
        if self.form == TermForm::Sandwich {
            return None;
        }
        let mut x = self.right.sparse().matmul(self.left.sparse()).scale(self.coeff);
        if self.add_hc {
            x = x.add_scaled(&x.adjoint(), C64::from(1.0));
        }
        // −c·RLρ − c·ρRL with h.c. −c̄ρ(RL)† − c̄(RL)†ρ: same operator on both sides
        Some(x)
    }

    /// Sandwich pieces `(c, L, R)` meaning `2c·LρR`.
    pub fn sandwiches(&self) -> Vec<(C64, CsrMatrix, CsrMatrix)> {
        if self.form == TermForm::Decay {
            return Vec::new();
        }
        let mut out = vec![(self.coeff, self.left.sparse().clone(), self.right.sparse().clone())];
        if self.add_hc {
            out.push((self.coeff.conj(), self.right.sparse().adjoint(), self.left.sparse().adjoint()));
        }
        out
    }
}
