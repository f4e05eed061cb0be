//! Steady phonon number of sympathetic cooling against the closed-form estimate.

use superatom::analysis::cooling_steady_phonon_simulated;
use superatom::models::CoolingParams;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliResult;
use crate::output::{RunOutput, Table};

pub fn run(cfg: &ScenarioConfig, unit: f64) -> CliResult<RunOutput> {
    let Scenario::CoolingSweep { gamma_cool, gamma_cl, phonon_cutoff } = &cfg.scenario else { unreachable!() };
    let mut out = RunOutput::default();
    let mut t = Table::new(
        "cooling",
        &["gamma_cool", "g_eff", "n_s_formula", "n_s_steady_state", "relative_deviation", "strong_coupling"],
    )
    .plot("steady phonon number", "gamma_cool", &["n_s_formula", "n_s_steady_state"], "γ_cool", "n_s", "scatter");
    let mut worst = 0.0f64;
    for &g in gamma_cool {
        let c = CoolingParams::from_rate(g, *gamma_cl);
        let est = cooling_steady_phonon_simulated(&cfg.params, &c, *phonon_cutoff)?;
        for w in &est.warnings {
            out.warn(format!("γ_cool = {}: {w}", g / unit));
        }
        let sim = est.simulated.expect("simulated estimate");
        let dev = if est.n_s > 0.0 { (sim - est.n_s).abs() / est.n_s } else { sim.abs() };
        worst = worst.max(dev);
        t.push(vec![
            (g / unit).into(),
            (est.g_eff / unit).into(),
            est.n_s.into(),
            sim.into(),
            dev.into(),
            est.strong_coupling.into(),
        ]);
    }
    out.set("max_relative_deviation", worst);
    out.tables.push(t);
    Ok(out)
}
