
use super::operator::Operator;
use super::space::{FactorKind, SpaceSpec};
use crate::{CsrMatrix, Error, Result, C64};

/// Truncated Fock space with states `|0⟩ .. |cutoff−1⟩`.
pub fn fock_space(cutoff: usize, label: impl Into<String>) -> Result<SpaceSpec> {
    if cutoff == 0 {
        return Err(Error::invalid("Fock cutoff must be at least 1"));
    }
    SpaceSpec::single(label, cutoff, FactorKind::Fock)
}

fn require_fock(space: &SpaceSpec) -> Result<usize> {
    match space.factors() {
        [f] if f.kind == FactorKind::Fock => Ok(f.dim),
        _ => Err(Error::invalid(
            "ladder operators need a single Fock factor",
        )),
    }
}

/// `⟨n−1|b|n⟩ = √n`.
pub fn annihilation_op(space: &SpaceSpec) -> Result<Operator> {
    let d = require_fock(space)?;
    let m = CsrMatrix::from_triplets(d, d, (1..d).map(|n| (n - 1, n, C64::from((n as f64).sqrt()))));
    Operator::from_sparse(space.clone(), m)
}

pub fn creation_op(space: &SpaceSpec) -> Result<Operator> {
    Ok(annihilation_op(space)?.dag())
}

pub fn number_op(space: &SpaceSpec) -> Result<Operator> {
    let d = require_fock(space)?;
    let m = CsrMatrix::from_triplets(d, d, (0..d).map(|n| (n, n, C64::from(n as f64))));
    Operator::from_sparse(space.clone(), m)
}
