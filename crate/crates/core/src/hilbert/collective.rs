use std::fmt;

use serde::{Deserialize, Serialize};

use super::operator::Operator;
use super::space::{FactorKind, SpaceSpec};
use crate::linalg::ln_factorial;
use crate::{CsrMatrix, Error, Result, C64};

/// Symbolic label of a symmetric collective state.
///
/// `E(0)` is the global ground state `|G⟩`; `E(j)` has `j` atoms in `|e⟩`;
/// `ER(j)` additionally carries the single blockaded Rydberg excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollectiveLabel {
    E(usize),
    ER(usize),
}

impl fmt::Display for CollectiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollectiveLabel::E(0) => write!(f, "G"),
            CollectiveLabel::E(j) => write!(f, "E{j}"),
            CollectiveLabel::ER(j) => write!(f, "E{j}R"),
        }
    }
}

/// Which collective transition a ladder operator drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderBranch {
    /// `|E^{j-1}⟩⟨E^j|`, weight `√j·√(N−j+1)`.
    CavityNoR,
    /// `|E^{j-1}R⟩⟨E^jR|`, weight `√j·√(N−j)`.
    CavityWithR,
    /// `|E^{j-1}R⟩⟨E^j|`, weight `√j`.
    Laser,
}

/// Symmetric single-Rydberg-excitation basis of `N` blockaded atoms.
///
/// Index layout: `E^j ↦ j` for `j = 0..=N`, `E^jR ↦ N+1+j` for `j = 0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectiveBasis {
    n_atoms: usize,
    space: SpaceSpec,
}

impl CollectiveBasis {
    pub fn new(n_atoms: usize, label: impl Into<String>) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::invalid("collective basis needs at least one atom"));
        }
        let space = SpaceSpec::single(
            label,
            2 * n_atoms + 1,
            FactorKind::CollectiveAtomic { n_atoms },
        )?;
        Ok(CollectiveBasis { n_atoms, space })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        2 * self.n_atoms + 1
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn index(&self, label: CollectiveLabel) -> Result<usize> {
        let n = self.n_atoms;
        match label {
            CollectiveLabel::E(j) if j <= n => Ok(j),
            CollectiveLabel::ER(j) if j < n => Ok(n + 1 + j),
            _ => Err(Error::invalid(format!("label {label} does not exist for N = {n}"))),
        }
    }

    pub fn label(&self, index: usize) -> Result<CollectiveLabel> {
        let n = self.n_atoms;
        if index <= n {
            Ok(CollectiveLabel::E(index))
        } else if index < 2 * n + 1 {
            Ok(CollectiveLabel::ER(index - n - 1))
        } else {
            Err(Error::invalid(format!("index {index} out of range for N = {n}")))
        }
    }

    pub fn labels(&self) -> Vec<CollectiveLabel> {
        (0..self.dim()).map(|i| self.label(i).unwrap()).collect()
    }

    /// `ln N_E^j` with `N_E^j = N!·j!/(N−j)!`, the squared norm of `(Σσ_eg)^j|G⟩`.
    pub fn ln_norm_e(&self, j: usize) -> f64 {
        let n = self.n_atoms as u64;
        let j = j as u64;
        ln_factorial(n) + ln_factorial(j) - ln_factorial(n - j)
    }

    /// `ln N_R^j` with `N_R^j = N!·j!/(N−1−j)!`, the squared norm of
    /// `(Σσ_eg)^j (Σσ_rg)|G⟩`.
    pub fn ln_norm_r(&self, j: usize) -> f64 {
        let n = self.n_atoms as u64;
        let j = j as u64;
        ln_factorial(n) + ln_factorial(j) - ln_factorial(n - 1 - j)
    }

    /// `|a⟩⟨b|`.
    pub fn transition(&self, a: CollectiveLabel, b: CollectiveLabel) -> Result<Operator> {
        Operator::transition(&self.space, self.index(a)?, self.index(b)?)
    }

    pub fn projector(&self, a: CollectiveLabel) -> Result<Operator> {
        self.transition(a, a)
    }
}

/// Collective lowering operator on one branch of the ladder.
pub fn collective_lowering(basis: &CollectiveBasis, which: LadderBranch) -> Operator {
    let n = basis.n_atoms;
    let d = basis.dim();
    let mut m = Vec::new();
    let nf = n as f64;
    match which {
        LadderBranch::CavityNoR => {
            for j in 1..=n {
                let jf = j as f64;
                m.push((j - 1, j, C64::from(jf.sqrt() * (nf - jf + 1.0).sqrt())));
            }
        }
        LadderBranch::CavityWithR => {
            for j in 1..n {
                let jf = j as f64;
                m.push((n + j, n + 1 + j, C64::from(jf.sqrt() * (nf - jf).sqrt())));
            }
        }
        LadderBranch::Laser => {
            for j in 1..=n {
                m.push((n + j, j, C64::from((j as f64).sqrt())));
            }
        }
    }
    Operator::from_sparse(basis.space.clone(), CsrMatrix::from_triplets(d, d, m)).expect("shape matches basis")
}
