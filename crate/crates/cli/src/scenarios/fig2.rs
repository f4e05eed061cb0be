//! Quantum trajectories of the microscopic blockaded ensemble.

use superatom::analysis::{atomic_basis_of, symmetric_projector};
use superatom::dynamics::{evolve_trajectories, TrajectoryOptions, TrajectoryResult};
use superatom::hilbert::{AtomLevel, CollectiveLabel, Operator};
use superatom::linalg::identity;
use superatom::models::build_microscopic;
use superatom::Vector;

use super::{approx_g_eff, basis_vec, kron_vec, number_on, time_grid};
use crate::config::{Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, RunOutput, Table};

/// A state counts as having left the symmetric subspace above this population.
pub const NONSYM_THRESHOLD: f64 = 1e-10;

const OBSERVABLES: [&str; 5] = ["p_sym", "p_nonsym", "p_rydberg", "n_phonon", "n_photon"];

fn is_local(label: &str) -> bool {
    label.contains(" atom ")
}

pub fn run(cfg: &ScenarioConfig) -> CliResult<RunOutput> {
    let Scenario::Fig2Trajectory { phonons, rydberg } = cfg.scenario else { unreachable!() };
    let cut = cfg.cutoffs.expect("validated");
    if phonons >= cut.phonon {
        return Err(CliError::validation(format!(
            "fig2: {phonons} initial phonons need a phonon cutoff above {phonons} (have {})",
            cut.phonon
        )));
    }
    let model = build_microscopic(&cfg.params, cut)?;
    let g_eff = approx_g_eff(&cfg.params);
    let times = time_grid(cfg, g_eff)?;
    let space = model.space().clone();
    let (at_idx, basis) = atomic_basis_of(&space)?;

    let atoms: Vector = if rydberg {
        let emb = basis.symmetric_embedding();
        emb.column(CollectiveLabel::ER(0)).expect("E⁰R is always kept").to_owned()
    } else {
        basis_vec(basis.dim(), 0)
    };
    let psi0 = kron_vec(&kron_vec(&basis_vec(cut.phonon, phonons), &basis_vec(cut.cavity, 0)), &atoms);

    let p_sym = symmetric_projector(&space)?.to_dense();
    let p_non = identity(space.dim()) - &p_sym;
    let p_r = Operator::product(&space, &[(at_idx, &basis.level_count_op(AtomLevel::R))])?.to_dense();
    let observables = vec![
        ("p_sym".to_string(), p_sym),
        ("p_nonsym".to_string(), p_non),
        ("p_rydberg".to_string(), p_r),
        ("n_phonon".to_string(), number_on(&space, "membrane")?),
        ("n_photon".to_string(), number_on(&space, "cavity")?),
    ];
    let res = evolve_trajectories(
        &model,
        &psi0,
        &times,
        &TrajectoryOptions { n_traj: cfg.n_traj, seed: cfg.seed, observables },
    )?;

    let mut out = RunOutput::default();
    for w in model.warnings() {
        out.warn(w.clone());
    }
    out.set("dimension", space.dim());
    out.set("g_eff", g_eff);
    out.set("t_end_g_eff", times.last().unwrap() * g_eff);
    let s = summarize(&res);
    out.set("n_traj", res.n_traj);
    out.set("trajectories_with_local_jumps", s.with_local);
    out.set("trajectories_with_gamma_e_jumps", s.with_gamma_e);
    out.set("trajectories_leaving_after_gamma_e", s.leaving);
    out.set("fraction_leaving_after_gamma_e", s.fraction_leaving());
    out.set("max_nonsym_before_local_jump", s.max_before);
    out.set("max_renorm_error", s.max_renorm);
    out.tables = tables(&res, g_eff);
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Fig2Summary {
    pub with_local: usize,
    pub with_gamma_e: usize,
    /// Trajectories with a `Γ_e` jump after which `p_nonsym > NONSYM_THRESHOLD`.
    pub leaving: usize,
    /// Largest non-symmetric population on grid points before the first local jump.
    pub max_before: f64,
    pub max_renorm: f64,
}

impl Fig2Summary {
    pub fn fraction_leaving(&self) -> f64 {
        if self.with_gamma_e == 0 { 0.0 } else { self.leaving as f64 / self.with_gamma_e as f64 }
    }
}

pub fn summarize(res: &TrajectoryResult) -> Fig2Summary {
    let non = res.observable_index("p_nonsym").expect("observable recorded");
    let mut s = Fig2Summary::default();
    for tr in &res.trajectories {
        s.max_renorm = s.max_renorm.max(tr.renorm_error);
        let first_local = tr
            .jumps
            .iter()
            .find(|j| is_local(&res.channels[j.channel].label))
            .map(|j| j.time)
            .unwrap_or(f64::INFINITY);
        if first_local.is_finite() {
            s.with_local += 1;
        }
        for (k, &t) in res.times.iter().enumerate() {
            if t < first_local {
                s.max_before = s.max_before.max(tr.values[non][k].abs());
            }
        }
        let gamma_e: Vec<_> = tr.jumps.iter().filter(|j| res.channels[j.channel].label.starts_with("Gamma_e")).collect();
        if !gamma_e.is_empty() {
            s.with_gamma_e += 1;
            if gamma_e.iter().any(|j| j.after[non] > NONSYM_THRESHOLD) {
                s.leaving += 1;
            }
        }
    }
    s
}

fn tables(res: &TrajectoryResult, g_eff: f64) -> Vec<Table> {
    let mut cols = vec!["t", "t_g_eff", "trajectory"];
    cols.extend(OBSERVABLES);
    let mut traj = Table::new("trajectories", &cols).plot(
        "single trajectories",
        "t_g_eff",
        &["p_sym", "p_nonsym", "p_rydberg"],
        "t G_eff",
        "population",
        "line",
    );
    for tr in &res.trajectories {
        for (k, &t) in res.times.iter().enumerate() {
            let mut row: Vec<Cell> = vec![t.into(), (t * g_eff).into(), tr.index.into()];
            row.extend(tr.values.iter().map(|v| Cell::Num(v[k])));
            traj.push(row);
        }
    }

    let mut cols = vec!["t".to_string(), "t_g_eff".to_string()];
    for o in OBSERVABLES {
        cols.push(format!("{o}_mean"));
        cols.push(format!("{o}_stderr"));
    }
    let mut mean = Table::with_columns("mean", cols).plot(
        "trajectory average",
        "t_g_eff",
        &["p_sym_mean", "p_nonsym_mean", "p_rydberg_mean"],
        "t G_eff",
        "population",
        "line",
    );
    let stats: Vec<_> = (0..OBSERVABLES.len()).map(|o| res.mean_and_stderr(o)).collect();
    for (k, &t) in res.times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into(), (t * g_eff).into()];
        for (m, e) in &stats {
            row.push(m[k].into());
            row.push(e[k].into());
        }
        mean.push(row);
    }

    let non = res.observable_index("p_nonsym").unwrap();
    let mut jumps = Table::new(
        "jumps",
        &["trajectory", "t", "t_g_eff", "channel", "p_nonsym_before", "p_nonsym_after"],
    )
    .plot("quantum jumps", "t_g_eff", &["p_nonsym_after"], "t G_eff", "non-symmetric population", "scatter");
    for tr in &res.trajectories {
        for j in &tr.jumps {
            jumps.push(vec![
                tr.index.into(),
                j.time.into(),
                (j.time * g_eff).into(),
                res.channels[j.channel].label.as_str().into(),
                j.before[non].into(),
                j.after[non].into(),
            ]);
        }
    }
    vec![traj, mean, jumps]
}
