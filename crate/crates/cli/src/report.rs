//! `validate`: derived quantities of a configuration, no time evolution.

use std::fmt::Write;

use superatom::hilbert::microscopic_basis;
use superatom::models::{
    adiabatic_violations, check_strong_coupling, effective_rates_approx, effective_rates_exact, EffectiveRates,
    DEFAULT_MARGIN,
};

use crate::config::{ModelKind, Scenario, ScenarioConfig, Unit};
use crate::error::CliResult;

pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
    pub dimension: Option<usize>,
    pub g_eff_approx: Option<f64>,
    pub g_eff_exact: Option<f64>,
}

fn microscopic_dim(n: usize, max_excited: Option<usize>) -> CliResult<usize> {
    Ok(microscopic_basis(n, true, max_excited, "atoms")?.dim())
}

/// Hilbert dimension of the model the scenario builds (`None` when chosen at run time).
fn dimension(cfg: &ScenarioConfig) -> CliResult<Option<usize>> {
    let n = cfg.params.n_atoms;
    let bos = cfg.cutoffs.map(|c| c.phonon * c.cavity);
    Ok(match &cfg.scenario {
        Scenario::Fig2Trajectory { .. } => {
            let c = cfg.cutoffs.expect("validated");
            Some(c.phonon * c.cavity * microscopic_dim(n, c.max_excited)?)
        }
        Scenario::Fig4StatePrep { phonon_cutoff, .. } => (*phonon_cutoff > 0).then_some(2 * phonon_cutoff),
        Scenario::Fig5Linewidth { n_atoms, .. } => Some(microscopic_dim(*n_atoms, None)?),
        Scenario::StrongCouplingTable { .. } => None,
        Scenario::EffectiveVsFull { .. } => bos.map(|b| b * (2 * n + 1)),
        Scenario::CoolingSweep { phonon_cutoff, .. } => Some(2 * (phonon_cutoff + 1)),
        Scenario::Custom { model, excitations, .. } => match model {
            ModelKind::Microscopic => {
                let c = cfg.cutoffs.expect("validated");
                Some(c.phonon * c.cavity * microscopic_dim(n, c.max_excited)?)
            }
            ModelKind::Symmetric => bos.map(|b| b * (2 * n + 1)),
            ModelKind::Effective | ModelKind::EffectiveExact | ModelKind::Cooling => Some(2 * (excitations + 1)),
            ModelKind::LongDistancePositional | ModelKind::LongDistanceResonant => cfg.cutoffs.map(|c| 2 * c.phonon),
            ModelKind::Semiclassical => Some(microscopic_dim(n, None)?),
        },
    })
}

fn rates_block(s: &mut String, name: &str, r: &EffectiveRates, unit: Unit) {
    let _ = writeln!(s, "  {name}:");
    let _ = writeln!(s, "    G_eff      = {}", unit.show(r.g_eff));
    let _ = writeln!(s, "    Δ_G        = {}", unit.show(r.delta_g));
    let _ = writeln!(s, "    Δ_Ω        = {}", unit.show(r.delta_r));
    let _ = writeln!(s, "    Γ_r^eff    = {}", unit.show(r.gamma_r_eff));
    let _ = writeln!(s, "    γ_m^eff    = {}", unit.show(r.gamma_m_eff));
}

/// Build the report for a configuration already converted to internal units.
pub fn validate(cfg: &ScenarioConfig) -> CliResult<Report> {
    let mut warnings = cfg.validate()?;
    let p = &cfg.params;
    let unit = cfg.unit;
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", cfg.scenario.name());
    let _ = writeln!(s, "unit: {}", serde_json::to_value(unit).unwrap().as_str().unwrap_or(""));
    let _ = writeln!(s, "seed: {}  n_traj: {}", cfg.seed, cfg.n_traj);
    let _ = writeln!(s, "atoms: N = {}", p.n_atoms);
    let _ = writeln!(s, "detunings:");
    let _ = writeln!(s, "  Δ_c = {}", unit.show(p.delta_c()));
    let _ = writeln!(s, "  Δ_e = {}", unit.show(p.delta_e()));
    let _ = writeln!(s, "  Δ_p = {}", unit.show(p.delta_p()));
    let _ = writeln!(s, "  resonance mismatch = {}", unit.show(p.rydberg_mismatch()));
    let _ = writeln!(s, "collective coupling ḡ = √N g = {}", unit.show(p.g_bar()));

    let approx = effective_rates_approx(p);
    let exact = effective_rates_exact(p);
    let _ = writeln!(s, "effective rates:");
    match &approx {
        Ok(r) => rates_block(&mut s, "leading order", r, unit),
        Err(e) => {
            let _ = writeln!(s, "  leading order: undefined ({e})");
        }
    }
    match &exact {
        Ok(r) => rates_block(&mut s, "exact single excitation", r, unit),
        Err(e) => {
            let _ = writeln!(s, "  exact single excitation: undefined ({e})");
        }
    }
    if let Ok(r) = &approx {
        if r.g_eff != 0.0 {
            let _ = writeln!(
                s,
                "  shift ratios: |Δ_G|/G_eff = {:.3e}, |Δ_Ω|/G_eff = {:.3e}",
                (r.delta_g / r.g_eff).abs(),
                (r.delta_r / r.g_eff).abs()
            );
        }
    }

    let _ = writeln!(s, "adiabaticity (margin {DEFAULT_MARGIN}):");
    let _ = writeln!(
        s,
        "  |Δ_c|/max(G, Ω, Γ_e, κ) = {:.3e}",
        p.delta_c().abs() / [p.big_g, p.rabi, p.gamma_e, p.kappa].into_iter().fold(0.0, f64::max)
    );
    let _ = writeln!(
        s,
        "  |Δ_cΔ_e|/(g²N) = {:.3e}",
        (p.delta_c() * p.delta_e()).abs() / (p.g * p.g * p.n_atoms as f64)
    );
    let violations = adiabatic_violations(p, 1, DEFAULT_MARGIN);
    if violations.is_empty() {
        let _ = writeln!(s, "  all conditions hold");
    }
    warnings.extend(violations);

    let fr = check_strong_coupling(p, DEFAULT_MARGIN);
    let _ = writeln!(s, "strong coupling (√N g / loss ≥ {}): {}", fr.margin, if fr.pass { "pass" } else { "FAIL" });
    for t in &fr.terms {
        let _ = writeln!(s, "  {:32} {:>14.6e}  ratio {:.3e}", t.name, t.value / unit.factor(), t.ratio);
    }
    warnings.extend(fr.notes.iter().cloned());

    let dim = dimension(cfg)?;
    match dim {
        Some(d) => {
            let _ = writeln!(s, "Hilbert dimension: {d}");
        }
        None => {
            let _ = writeln!(s, "Hilbert dimension: chosen at run time");
        }
    }
    warnings.dedup();
    if !warnings.is_empty() {
        let _ = writeln!(s, "warnings:");
        for w in &warnings {
            let _ = writeln!(s, "  - {w}");
        }
    }
    Ok(Report {
        text: s,
        warnings,
        dimension: dim,
        g_eff_approx: approx.ok().map(|r| r.g_eff),
        g_eff_exact: exact.ok().map(|r| r.g_eff),
    })
}
