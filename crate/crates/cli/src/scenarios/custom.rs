//! Any model, any method, populations of chosen basis states.

use superatom::dynamics::{
    basis_ket, evolve_trajectories, ket_to_dm, steady_state, MasterOptions, Method, SteadyMethod, TrajectoryOptions,
};
use superatom::models::{
    build_cooling, build_effective_n, build_long_distance, build_microscopic, build_semiclassical, build_symmetric,
    LindbladModel, LongDistanceMode,
};
use superatom::{Matrix, C64};

use super::{approx_g_eff, expectations, note_evolution, time_grid};
use crate::config::{ModelKind, RunMethod, Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, RunOutput, Table};

const MAX_DEFAULT_OBSERVED: usize = 64;

fn build(cfg: &ScenarioConfig) -> CliResult<(LindbladModel, f64)> {
    let Scenario::Custom { model, excitations, delta, omega_int, .. } = &cfg.scenario else { unreachable!() };
    let p = &cfg.params;
    let cut = || cfg.cutoffs.expect("validated");
    let ld = |mode| -> CliResult<(LindbladModel, f64)> {
        Ok((build_long_distance(&cfg.long_distance, p, mode, cut().phonon)?, cfg.long_distance.g_bar_eff(p.n_atoms)))
    };
    Ok(match model {
        ModelKind::Microscopic => (build_microscopic(p, cut())?, approx_g_eff(p)),
        ModelKind::Symmetric => (build_symmetric(p, cut())?, approx_g_eff(p)),
        ModelKind::Effective => (build_effective_n(p, *excitations, false)?, approx_g_eff(p)),
        ModelKind::EffectiveExact => (build_effective_n(p, *excitations, true)?, approx_g_eff(p)),
        ModelKind::LongDistancePositional => ld(LongDistanceMode::Positional)?,
        ModelKind::LongDistanceResonant => ld(LongDistanceMode::ResonantLimit)?,
        ModelKind::Cooling => {
            let c = cfg.cooling.as_ref().ok_or_else(|| CliError::validation("model cooling needs a [cooling] table"))?;
            (build_cooling(p, c, *excitations)?, approx_g_eff(p))
        }
        ModelKind::Semiclassical => (build_semiclassical(p.n_atoms, *delta, *omega_int, p.rabi, p.gamma_e)?, p.rabi),
    })
}

pub fn run(cfg: &ScenarioConfig) -> CliResult<RunOutput> {
    let Scenario::Custom { method, initial, observe, .. } = &cfg.scenario else { unreachable!() };
    let (model, g_ref) = build(cfg)?;
    let d = model.dim();
    let observed: Vec<usize> =
        if observe.is_empty() { (0..d.min(MAX_DEFAULT_OBSERVED)).collect() } else { observe.clone() };
    if let Some(&bad) = observed.iter().find(|&&i| i >= d) {
        return Err(CliError::validation(format!("observe index {bad} outside dimension {d}")));
    }
    let psi0 = basis_ket(d, *initial)?;
    let projectors: Vec<Matrix> = observed
        .iter()
        .map(|&i| Matrix::from_shape_fn((d, d), |(r, c)| if r == i && c == i { C64::from(1.0) } else { C64::from(0.0) }))
        .collect();

    let mut out = RunOutput::default();
    for w in model.warnings() {
        out.warn(w.clone());
    }
    out.set("model", model.name());
    out.set("dimension", d);
    let names: Vec<String> = observed.iter().map(|i| format!("p_{i}")).collect();
    let yref: Vec<&str> = names.iter().map(String::as_str).collect();

    if *method == RunMethod::SteadyState {
        let ss = steady_state(&model, SteadyMethod::Nullspace)?;
        for w in &ss.warnings {
            out.warn(w.clone());
        }
        let mut t = Table::new("steady_state", &["index", "population"]).plot(
            "steady-state populations",
            "index",
            &["population"],
            "basis index",
            "population",
            "scatter",
        );
        for (&i, v) in observed.iter().zip(expectations(&projectors, &ss.rho)) {
            t.push(vec![i.into(), v.into()]);
        }
        out.set("residual", ss.residual);
        out.tables.push(t);
        return Ok(out);
    }

    let times = time_grid(cfg, g_ref)?;
    let mut cols = vec!["t".to_string()];
    cols.extend(names.iter().cloned());
    let mut t = Table::with_columns("populations", cols).plot("populations", "t", &yref, "t", "population", "line");
    match method {
        RunMethod::Trajectories => {
            let obs = names.iter().cloned().zip(projectors).collect();
            let r = evolve_trajectories(&model, &psi0, &times, &TrajectoryOptions { n_traj: cfg.n_traj, seed: cfg.seed, observables: obs })?;
            let stats: Vec<_> = (0..names.len()).map(|o| r.mean_and_stderr(o)).collect();
            let mut cols = vec!["t".to_string()];
            cols.extend(names.iter().map(|n| format!("{n}_stderr")));
            let mut errs = Table::with_columns("stderr", cols);
            for (k, &time) in times.iter().enumerate() {
                let mut row: Vec<Cell> = vec![time.into()];
                row.extend(stats.iter().map(|(m, _)| Cell::Num(m[k])));
                t.push(row);
                let mut row: Vec<Cell> = vec![time.into()];
                row.extend(stats.iter().map(|(_, e)| Cell::Num(e[k])));
                errs.push(row);
            }
            let jumps: usize = r.trajectories.iter().map(|t| t.jumps.len()).sum();
            out.set("total_jumps", jumps);
            out.tables.push(t);
            out.tables.push(errs);
        }
        RunMethod::AdaptiveRk | RunMethod::ExpmKrylov => {
            let m = if *method == RunMethod::AdaptiveRk { Method::AdaptiveRk } else { Method::ExpmKrylov };
            let mut rows = Vec::new();
            let s = superatom::dynamics::evolve_master_observe(
                &model,
                &ket_to_dm(&psi0),
                &times,
                &MasterOptions { method: m, ..cfg.solver.options() },
                &mut |_, time, rho| {
                    let mut row: Vec<Cell> = vec![time.into()];
                    row.extend(expectations(&projectors, rho).into_iter().map(Cell::Num));
                    rows.push(row);
                },
            )?;
            note_evolution(&mut out, "master equation", &s);
            for r in rows {
                t.push(r);
            }
            out.tables.push(t);
        }
        RunMethod::SteadyState => unreachable!(),
    }
    Ok(out)
}
