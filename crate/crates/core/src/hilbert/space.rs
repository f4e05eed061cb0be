use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default ceiling on the total Hilbert-space dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 16;

/// Environment variable overriding [`DEFAULT_DIMENSION_CAP`].
pub const DIMENSION_CAP_ENV: &str = "SUPERATOM_MAX_DIM";

pub fn dimension_cap() -> usize {
    std::env::var(DIMENSION_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DIMENSION_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Fock,
    /// Symmetric single-Rydberg-excitation basis of `n_atoms` atoms, dimension `2N+1`.
    CollectiveAtomic { n_atoms: usize },
    /// Per-atom strings over `{g, e, r}`.
    MicroscopicAtomic {
        n_atoms: usize,
        blockade: bool,
        /// Keep only strings with at most this many non-ground atoms.
        max_excited: Option<usize>,
    },
    /// `{|G⟩, |R⟩}` with `|G⟩` at index 0.
    TwoLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
    pub kind: FactorKind,
}

/// Ordered tensor product of factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    factors: Vec<Factor>,
}

impl SpaceSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("a space needs at least one factor"));
        }
        for f in &factors {
            if f.dim == 0 {
                return Err(Error::invalid(format!("factor '{}' has dimension 0", f.label)));
            }
            if let FactorKind::CollectiveAtomic { n_atoms } = f.kind {
                if f.dim != 2 * n_atoms + 1 {
                    return Err(Error::invalid(format!(
                        "collective factor '{}' for N = {n_atoms} must have dimension {}",
                        f.label,
                        2 * n_atoms + 1
                    )));
                }
            }
            if f.kind == FactorKind::TwoLevel && f.dim != 2 {
                return Err(Error::invalid("two-level factor must have dimension 2"));
            }
        }
        let space = SpaceSpec { factors };
        space.checked_dim(dimension_cap())?;
        Ok(space)
    }

    pub fn single(label: impl Into<String>, dim: usize, kind: FactorKind) -> Result<Self> {
        Self::new(vec![Factor {
            label: label.into(),
            dim,
            kind,
        }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    /// Total dimension, failing when it exceeds `cap` (or overflows).
    pub fn checked_dim(&self, cap: usize) -> Result<usize> {
        let mut total: usize = 1;
        for f in &self.factors {
            total = total.checked_mul(f.dim).ok_or(Error::ResourceLimit {
                what: "Hilbert-space dimension".into(),
                requested: usize::MAX,
                cap,
            })?;
        }
        if total > cap {
            return Err(Error::ResourceLimit {
                what: "Hilbert-space dimension".into(),
                requested: total,
                cap,
            });
        }
        Ok(total)
    }

    pub fn is_single(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn factor_index(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    pub fn factor_index_of_kind(&self, pred: impl Fn(&FactorKind) -> bool) -> Option<usize> {
        self.factors.iter().position(|f| pred(&f.kind))
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &SpaceSpec) -> SpaceSpec {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        SpaceSpec { factors }
    }

    /// Sub-space formed by the listed factors, in the given order.
    pub fn subspace(&self, keep: &[usize]) -> Result<SpaceSpec> {
        let mut factors = Vec::with_capacity(keep.len());
        for &k in keep {
            let f = self
                .factors
                .get(k)
                .ok_or_else(|| Error::invalid(format!("factor index {k} out of range")))?;
            factors.push(f.clone());
        }
        SpaceSpec::new(factors)
    }
}

/// `{|G⟩, |R⟩}` superatom factor.
pub fn two_level_space(label: impl Into<String>) -> Result<SpaceSpec> {
    SpaceSpec::single(label, 2, FactorKind::TwoLevel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_is_product() {
        let a = SpaceSpec::single("m", 3, FactorKind::Fock).unwrap();
        let b = SpaceSpec::single("c", 4, FactorKind::Fock).unwrap();
        assert_eq!(a.tensor(&b).dim(), 12);
    }

    #[test]
    fn collective_dimension_enforced() {
        assert!(SpaceSpec::single("a", 5, FactorKind::CollectiveAtomic { n_atoms: 2 }).is_ok());
        assert!(SpaceSpec::single("a", 4, FactorKind::CollectiveAtomic { n_atoms: 2 }).is_err());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(SpaceSpec::single("x", 0, FactorKind::Fock).is_err());
    }

    #[test]
    fn over_cap_is_resource_error() {
        let a = SpaceSpec::single("m", 1000, FactorKind::Fock).unwrap();
        let big = a.tensor(&a);
        assert!(matches!(big.checked_dim(1 << 16), Err(Error::ResourceLimit { .. })));
    }
}
