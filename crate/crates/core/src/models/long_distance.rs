//! Membrane and superatom coupled through a free-space light field.

use serde::{Deserialize, Serialize};

use super::effective::jcm_ops;
use super::{DissipatorTerm, LindbladModel, LongDistanceParams, PhysicalParams, TermForm};
use crate::{Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LongDistanceMode {
    /// Position-dependent couplings at phase `k_L^m z̄`.
    Positional,
    /// `k_L^m z̄ ≪ 1` limit with membrane heating and Rydberg decay.
    ResonantLimit,
}

/// Membrane Fock space of `phonon_cutoff` states ⊗ superatom `{G, R}`.
///
/// `Positional`: `H = −Δ_at sin(2kz̄)σ_RR + Ḡ(cos(kz̄) b†σ_GR + h.c.)` with
/// `(γ_m^diff/4)D[b†]`, the block `2Δ_at sin²(kz̄)(2Nσ_GRρσ_RG − σ_RRρ − ρσ_RR)`
/// and the cascaded block `(Ḡ/√N) sin(kz̄)(2bρσ_RG − σ_RG bρ − ρσ_RG b + h.c.)`,
/// all taken as written. The `Δ_at` block is not trace preserving for `N > 1`.
///
/// `ResonantLimit`: `H = Ḡ(b†σ_GR + σ_RG b)` with `(γ_m^diff/4)D[b]`,
/// `(γ_m/2)(N_m+1)D[b]`, `(γ_m/2)N_m D[b†]` and `(Γ_r/2)D[σ_GR]`.
///
/// A nonzero `ld.drive` adds `η(σ_GR + σ_RG)` in either mode.
pub fn build_long_distance(
    ld: &LongDistanceParams,
    p: &PhysicalParams,
    mode: LongDistanceMode,
    phonon_cutoff: usize,
) -> Result<LindbladModel> {
    ld.validate()?;
    let warnings = p.validate()?;
    let ops = jcm_ops(phonon_cutoff)?;
    let n = p.n_atoms as f64;
    let gbar = ld.g_bar_eff(p.n_atoms);
    let s_gr = ops.s_gr.clone();
    let s_rg = s_gr.dag();
    let bd = ops.b.dag();
    let hop = bd.mul(&s_gr)?; // b†σ_GR

    let mut model = match mode {
        LongDistanceMode::Positional => {
            let x = ld.phase();
            let mut h = ops.p_r.scale(-ld.delta_at() * (2.0 * x).sin());
            h = h.add(&hop.add(&hop.dag())?.scale(gbar * x.cos()))?;
            let mut m = LindbladModel::new("long_distance_positional", h);
            m.push_lindblad(ld.gamma_m_diff() / 4.0, bd.clone(), "membrane diffusion")?;
            let s2 = 2.0 * ld.delta_at() * x.sin().powi(2);
            m.push(DissipatorTerm::new(
                s2 * n,
                s_gr.clone(),
                s_rg.clone(),
                TermForm::Sandwich,
                false,
                "Delta_at sandwich",
            )?)?;
            m.push(DissipatorTerm::new(
                s2,
                s_gr.clone(),
                s_rg.clone(),
                TermForm::Decay,
                false,
                "Delta_at decay",
            )?)?;
            m.push(DissipatorTerm::new(
                C64::from(gbar / n.sqrt() * x.sin()),
                ops.b.clone(),
                s_rg.clone(),
                TermForm::Full,
                true,
                "cascaded",
            )?)?;
            if p.n_atoms > 1 && s2 != 0.0 {
                m.warn("positional Δ_at block is not trace preserving for N > 1");
            }
            m
        }
        LongDistanceMode::ResonantLimit => {
            let h = hop.add(&hop.dag())?.scale(gbar);
            let mut m = LindbladModel::new("long_distance_resonant", h);
            m.push_lindblad(ld.gamma_m_diff() / 4.0, ops.b.clone(), "membrane diffusion")?;
            m.push_lindblad(p.gamma_m / 2.0 * (p.n_m + 1.0), ops.b.clone(), "phonon decay")?;
            m.push_lindblad(p.gamma_m / 2.0 * p.n_m, bd.clone(), "phonon heating")?;
            m.push_lindblad(p.gamma_r / 2.0, s_gr.clone(), "Rydberg decay")?;
            m
        }
    };
    if ld.drive != 0.0 {
        model.add_hamiltonian(&s_gr.add(&s_rg)?.scale(ld.drive))?;
    }
    for w in warnings {
        model.warn(w);
    }
    Ok(model)
}
