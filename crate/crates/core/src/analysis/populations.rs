use serde::Serialize;

use super::partial::partial_trace;
use crate::hilbert::{microscopic_basis, AtomLevel, CollectiveLabel, FactorKind, MicroscopicBasis, Operator, SpaceSpec};
use crate::linalg::trace;
use crate::{Error, Matrix, Result, C64};

#[derive(Debug, Clone, Serialize)]
pub struct SubspacePops {
    pub t: f64,
    /// `⟨G|ρ|G⟩`
    pub p_g: f64,
    /// `⟨E⁰R|ρ|E⁰R⟩`
    pub p_r: f64,
    pub p_symmetric: f64,
    pub p_nonsymmetric: f64,
}

/// Index of the microscopic atomic factor and its rebuilt basis.
pub fn atomic_basis_of(space: &SpaceSpec) -> Result<(usize, MicroscopicBasis)> {
    let idx = space
        .factor_index_of_kind(|k| matches!(k, FactorKind::MicroscopicAtomic { .. }))
        .ok_or_else(|| Error::invalid("space has no microscopic atomic factor"))?;
    let f = &space.factors()[idx];
    let FactorKind::MicroscopicAtomic { n_atoms, blockade, max_excited } = f.kind else {
        unreachable!()
    };
    Ok((idx, microscopic_basis(n_atoms, blockade, max_excited, f.label.clone())?))
}

/// Projector onto the symmetric atomic subspace, lifted to the full space.
pub fn symmetric_projector(space: &SpaceSpec) -> Result<Operator> {
    let (idx, basis) = atomic_basis_of(space)?;
    Operator::product(space, &[(idx, &basis.symmetric_embedding().projector())])
}

/// Symmetric / non-symmetric split of the atomic state.
pub fn subspace_populations(rho: &Matrix, space: &SpaceSpec, t: f64) -> Result<SubspacePops> {
    let (idx, basis) = atomic_basis_of(space)?;
    let (rho_at, _) = partial_trace(rho, space, &[idx])?;
    Ok(atomic_populations(&rho_at, &basis, t))
}

/// Same as [`subspace_populations`] for a state already reduced to the atoms.
pub fn atomic_populations(rho_at: &Matrix, basis: &MicroscopicBasis, t: f64) -> SubspacePops {
    let emb = basis.symmetric_embedding();
    let v = emb.isometry();
    let proj = crate::linalg::dagger(v).dot(rho_at).dot(v);
    let p_sym = trace(&proj).re;
    let col = |l| emb.labels().iter().position(|&x| x == l);
    let p_of = |l| col(l).map(|k| proj[[k, k]].re).unwrap_or(0.0);
    let ground = basis.index_of(&vec![AtomLevel::G; basis.n_atoms()]).expect("ground state always present");
    debug_assert!((p_of(CollectiveLabel::E(0)) - rho_at[[ground, ground]].re).abs() < 1e-12);
    SubspacePops {
        t,
        p_g: rho_at[[ground, ground]].re,
        p_r: p_of(CollectiveLabel::ER(0)),
        p_symmetric: p_sym,
        p_nonsymmetric: trace(rho_at).re - p_sym,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhononDist {
    pub t: f64,
    pub p_n: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub mandel_q: f64,
    /// `|1 − Σ p_n|`
    pub truncation_defect: f64,
}

impl PhononDist {
    pub fn from_probabilities(p_n: Vec<f64>, t: f64) -> Self {
        let total: f64 = p_n.iter().sum();
        let mean: f64 = p_n.iter().enumerate().map(|(n, p)| n as f64 * p).sum::<f64>() / total;
        let second: f64 = p_n.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum::<f64>() / total;
        let variance = second - mean * mean;
        PhononDist {
            t,
            mandel_q: if mean > 0.0 { (variance - mean) / mean } else { f64::NAN },
            truncation_defect: (1.0 - total).abs(),
            p_n,
            mean,
            variance,
        }
    }
}

/// Fock-state populations of factor `phonon` after tracing out everything else.
pub fn phonon_distribution(rho: &Matrix, space: &SpaceSpec, phonon: usize, t: f64) -> Result<PhononDist> {
    if space.factors().get(phonon).map(|f| &f.kind) != Some(&FactorKind::Fock) {
        return Err(Error::invalid("phonon factor must be a Fock factor"));
    }
    let (r, _) = partial_trace(rho, space, &[phonon])?;
    Ok(PhononDist::from_probabilities(r.diag().iter().map(|z: &C64| z.re).collect(), t))
}

/// Bose–Einstein probabilities `N^n/(N+1)^{n+1}` for `n < len`.
pub fn bose_einstein(mean: f64, len: usize) -> Vec<f64> {
    let r = mean / (mean + 1.0);
    (0..len).map(|n| r.powi(n as i32) / (mean + 1.0)).collect()
}

#[derive(Debug, Clone, Copy)]
pub enum BeReference {
    /// Thermal state with the same mean as the input.
    MatchedMean,
    Mean(f64),
}

/// Total-variation distance to an untruncated Bose–Einstein distribution; the
/// thermal weight beyond the input's support counts fully.
pub fn bose_einstein_distance(p_n: &[f64], reference: BeReference) -> f64 {
    let mean = match reference {
        BeReference::MatchedMean => {
            let total: f64 = p_n.iter().sum();
            p_n.iter().enumerate().map(|(n, p)| n as f64 * p).sum::<f64>() / total
        }
        BeReference::Mean(m) => m,
    };
    let q = bose_einstein(mean, p_n.len());
    let tail = 1.0 - q.iter().sum::<f64>();
    0.5 * (p_n.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() + tail.max(0.0))
}
