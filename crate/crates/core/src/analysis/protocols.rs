use serde::Serialize;

use crate::dynamics::{evolve_master, ket_to_dm, steady_state, MasterOptions, SteadyMethod};
use crate::linalg::expect;
use crate::models::{build_cooling, effective_rates_approx, CoolingParams, LindbladModel, PhysicalParams};
use crate::{Error, Result, Vector};

use super::populations::phonon_distribution;

/// Overlap of the evolved state with a pure target.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferFidelity {
    /// `⟨ψ|ρ|ψ⟩`
    pub population: f64,
    /// `⟨ψ|ρ|ψ⟩^{1/2}`, the amplitude overlap `|⟨ψ|Ψ(t)⟩|` for a pure evolution.
    pub amplitude: f64,
    pub trace_defect: f64,
}

/// Evolve `psi0` for `t_g` and compare with `target`.
pub fn transfer_fidelity(
    model: &LindbladModel,
    psi0: &Vector,
    target: &Vector,
    t_g: f64,
    opts: &MasterOptions,
) -> Result<TransferFidelity> {
    if !(t_g >= 0.0) {
        return Err(Error::invalid("gate time must be non-negative"));
    }
    let norm = |v: &Vector| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm(target) - 1.0).abs() > 1e-10 || (norm(psi0) - 1.0).abs() > 1e-10 {
        return Err(Error::invalid("initial and target states must be normalized kets"));
    }
    if target.len() != model.dim() {
        return Err(Error::SpaceMismatch("target does not match model dimension".into()));
    }
    let run = evolve_master(model, &ket_to_dm(psi0), &[0.0, t_g], opts)?;
    let rho = run.states.last().expect("two grid points");
    let population = expect(rho, target).re.max(0.0);
    Ok(TransferFidelity {
        population,
        amplitude: population.sqrt(),
        trace_defect: run.summary.trace_defect,
    })
}

/// First-order transfer fidelity
/// `1 − (π/2G_eff)(4N_mγ_m + γ_m + Γ_r^eff + Γ_r)`.
pub fn fidelity_estimate_from(g_eff: f64, n_m: f64, gamma_m: f64, gamma_r_eff: f64, gamma_r: f64) -> f64 {
    let t_g = std::f64::consts::FRAC_PI_2 / g_eff.abs();
    1.0 - t_g * (4.0 * n_m * gamma_m + gamma_m + gamma_r_eff + gamma_r)
}

/// [`fidelity_estimate_from`] with the leading-order effective rates of `p`.
pub fn fidelity_estimate(p: &PhysicalParams) -> Result<f64> {
    let r = effective_rates_approx(p)?;
    Ok(fidelity_estimate_from(r.g_eff, p.n_m, p.gamma_m, r.gamma_r_eff, p.gamma_r))
}

/// Gate time `π/(2G_eff)` of a single-excitation swap.
pub fn gate_time(g_eff: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 / g_eff.abs()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoolingEstimate {
    /// `2N_mγ_m(1/G_eff + 1/γ_cool)`
    pub n_s: f64,
    pub g_eff: f64,
    pub gamma_cool: f64,
    /// `G_eff ≥ 10 N_mγ_m`
    pub strong_coupling: bool,
    /// Phonon mean of the steady state of the cooling model, when requested.
    pub simulated: Option<f64>,
    pub warnings: Vec<String>,
}

/// Steady phonon number of sympathetic cooling, with the leading-order `G_eff`.
pub fn cooling_steady_phonon(p: &PhysicalParams, c: &CoolingParams) -> Result<CoolingEstimate> {
    c.validate()?;
    let g_eff = effective_rates_approx(p)?.g_eff.abs();
    let gc = c.gamma_cool();
    let heating = p.n_m * p.gamma_m;
    let strong = g_eff >= 10.0 * heating;
    let mut warnings = Vec::new();
    if !strong {
        warnings.push(format!("not strongly coupled: G_eff = {g_eff:e}, N_mγ_m = {heating:e}"));
    }
    let n_s = if heating == 0.0 { 0.0 } else { 2.0 * heating * (1.0 / g_eff + 1.0 / gc) };
    Ok(CoolingEstimate { n_s, g_eff, gamma_cool: gc, strong_coupling: strong, simulated: None, warnings })
}

/// [`cooling_steady_phonon`] plus the phonon mean of `build_cooling`'s steady state.
pub fn cooling_steady_phonon_simulated(
    p: &PhysicalParams,
    c: &CoolingParams,
    phonon_cutoff: usize,
) -> Result<CoolingEstimate> {
    let mut est = cooling_steady_phonon(p, c)?;
    let model = build_cooling(p, c, phonon_cutoff)?;
    let ss = steady_state(&model, SteadyMethod::Nullspace)?;
    let pd = phonon_distribution(&ss.rho, model.space(), 0, f64::INFINITY)?;
    if pd.p_n.last().copied().unwrap_or(0.0) > 1e-6 {
        est.warnings.push(format!(
            "phonon cutoff {phonon_cutoff} carries population {:.2e}",
            pd.p_n.last().unwrap()
        ));
    }
    est.warnings.extend(model.warnings().iter().cloned());
    est.warnings.extend(ss.warnings);
    est.simulated = Some(pd.mean);
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_examples() {
        let f = fidelity_estimate_from(1.0, 0.0, 0.01, 0.0, 0.0);
        assert!((f - (1.0 - std::f64::consts::PI * 0.005)).abs() < 1e-15);
        let (a, b) = (
            1.0 - fidelity_estimate_from(2.0, 3.0, 1e-3, 2e-3, 4e-4),
            1.0 - fidelity_estimate_from(2.0, 3.0, 2e-3, 4e-3, 8e-4),
        );
        assert!((b / a - 2.0).abs() < 1e-12);
    }
}
