//! Named reproduction scenarios. Each takes a configuration already converted
//! to internal angular units and returns tables in the configured unit.

mod compare;
mod cooling;
mod custom;
pub mod fig2;
pub mod fig4;
mod fig5;
mod table;

use ndarray::Array1;
use superatom::dynamics::{evolve_master_observe, EvolutionSummary, MasterOptions};
use superatom::hilbert::{number_op, Operator, SpaceSpec};
use superatom::models::{effective_rates_approx, LindbladModel, PhysicalParams};
use superatom::{Matrix, Vector, C64};

use crate::config::{Scenario, ScenarioConfig, TimeGrid};
use crate::error::{CliError, CliResult};
use crate::output::RunOutput;

/// Run `cfg` (internal units); `unit_factor` converts reported frequencies back.
pub fn run(cfg: &ScenarioConfig, unit_factor: f64) -> CliResult<RunOutput> {
    let mut out = match &cfg.scenario {
        Scenario::Fig2Trajectory { .. } => fig2::run(cfg),
        Scenario::Fig4StatePrep { .. } => fig4::run(cfg),
        Scenario::Fig5Linewidth { .. } => fig5::run(cfg, unit_factor),
        Scenario::StrongCouplingTable { .. } => table::run(cfg, unit_factor),
        Scenario::EffectiveVsFull { .. } => compare::run(cfg, unit_factor),
        Scenario::CoolingSweep { .. } => cooling::run(cfg, unit_factor),
        Scenario::Custom { .. } => custom::run(cfg),
    }?;
    out.set("scenario", cfg.scenario.name());
    out.set("seed", cfg.seed);
    Ok(out)
}

pub(crate) fn time_grid(cfg: &ScenarioConfig, g_ref: f64) -> CliResult<Vec<f64>> {
    cfg.time
        .as_ref()
        .ok_or_else(|| CliError::validation(format!("scenario {} needs a [time] table", cfg.scenario.name())))
        .and_then(|t: &TimeGrid| t.grid(g_ref))
}

/// `|G_eff|` of the leading-order elimination, `NaN` when undefined.
pub(crate) fn approx_g_eff(p: &PhysicalParams) -> f64 {
    effective_rates_approx(p).map(|r| r.g_eff.abs()).unwrap_or(f64::NAN)
}

pub(crate) fn basis_vec(d: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(d);
    v[i] = C64::from(1.0);
    v
}

/// `a ⊗ b`, `a` most significant.
pub(crate) fn kron_vec(a: &Vector, b: &Vector) -> Vector {
    Array1::from_iter(a.iter().flat_map(|x| b.iter().map(move |y| x * y)))
}

pub(crate) fn number_on(space: &SpaceSpec, label: &str) -> CliResult<Matrix> {
    let idx = space
        .factor_index(label)
        .ok_or_else(|| CliError::validation(format!("model has no '{label}' factor")))?;
    let local = space.subspace(&[idx])?;
    Ok(Operator::product(space, &[(idx, &number_op(&local)?)])?.to_dense())
}

/// `Re tr(O ρ)` for each observable.
pub(crate) fn expectations(ops: &[Matrix], rho: &Matrix) -> Vec<f64> {
    ops.iter()
        .map(|o| {
            let d = rho.nrows();
            let mut s = C64::from(0.0);
            for i in 0..d {
                for k in 0..d {
                    s += o[[i, k]] * rho[[k, i]];
                }
            }
            s.re
        })
        .collect()
}

/// Integrate and record `observables` on the grid; returns rows `[t, values…]`.
pub(crate) fn observe_master(
    opts: &MasterOptions,
    model: &LindbladModel,
    rho0: &Matrix,
    times: &[f64],
    observables: &[Matrix],
) -> CliResult<(Vec<Vec<f64>>, EvolutionSummary)> {
    let mut rows = Vec::with_capacity(times.len());
    let summary = evolve_master_observe(model, rho0, times, opts, &mut |_, t, rho| {
        let mut row = vec![t];
        row.extend(expectations(observables, rho));
        rows.push(row);
    })?;
    Ok((rows, summary))
}

/// Forward integrator warnings and keep the worst trace / positivity defects.
pub(crate) fn note_evolution(out: &mut RunOutput, what: &str, s: &EvolutionSummary) {
    for w in &s.warnings {
        out.warn(format!("{what}: {w}"));
    }
    let get = |out: &RunOutput, k: &str, init: f64| out.summary.get(k).and_then(|v| v.as_f64()).unwrap_or(init);
    let trace = get(out, "max_trace_defect", 0.0).max(s.trace_defect);
    let eig = get(out, "min_final_eigenvalue", f64::INFINITY).min(s.final_min_eigenvalue);
    out.set("max_trace_defect", trace);
    out.set("min_final_eigenvalue", eig);
}
