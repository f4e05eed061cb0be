//! Symmetric-basis cavity model against the eliminated Jaynes–Cummings model.

use superatom::hilbert::{CollectiveBasis, CollectiveLabel, Operator};
use superatom::models::{build_effective_n, build_symmetric, effective_rates_approx, effective_rates_exact};
use superatom::dynamics::ket_to_dm;
use superatom::Matrix;

use super::{basis_vec, kron_vec, note_evolution, number_on, observe_master, time_grid};
use crate::config::{Initial, Scenario, ScenarioConfig};
use crate::error::CliResult;
use crate::output::{Cell, RunOutput, Table};

pub fn run(cfg: &ScenarioConfig, unit: f64) -> CliResult<RunOutput> {
    let Scenario::EffectiveVsFull { use_exact_rates, initial } = cfg.scenario else { unreachable!() };
    let p = &cfg.params;
    let cut = cfg.cutoffs.expect("validated");
    let rates = if use_exact_rates { effective_rates_exact(p)? } else { effective_rates_approx(p)? };
    let g_eff = rates.g_eff.abs();
    let times = time_grid(cfg, g_eff)?;

    let full = build_symmetric(p, cut)?;
    let eff = build_effective_n(p, 1, use_exact_rates)?;
    let coll = CollectiveBasis::new(p.n_atoms, "atoms")?;
    let space = full.space().clone();
    let p_r_full = Operator::product(&space, &[(2, &coll.projector(CollectiveLabel::ER(0))?)])?.to_dense();
    // effective index = 2·phonon + atom, R = 1
    let p_r_eff = Matrix::from_shape_fn((4, 4), |(i, j)| if i == j && i % 2 == 1 { 1.0.into() } else { 0.0.into() });
    let n_eff = Matrix::from_shape_fn((4, 4), |(i, j)| if i == j { ((i / 2) as f64).into() } else { 0.0.into() });

    let (phonons, atom_label, eff_index) = match initial {
        Initial::Membrane => (1, CollectiveLabel::E(0), 2),
        Initial::Rydberg => (0, CollectiveLabel::ER(0), 1),
    };
    let psi_full = kron_vec(
        &kron_vec(&basis_vec(cut.phonon, phonons), &basis_vec(cut.cavity, 0)),
        &basis_vec(coll.dim(), coll.index(atom_label)?),
    );
    let (rows_f, sf) = observe_master(
        &cfg.solver.options(),
        &full,
        &ket_to_dm(&psi_full),
        &times,
        &[p_r_full, number_on(&space, "membrane")?, number_on(&space, "cavity")?],
    )?;
    let (rows_e, se) = observe_master(&cfg.solver.options(), &eff, &ket_to_dm(&basis_vec(4, eff_index)), &times, &[p_r_eff, n_eff])?;

    let mut out = RunOutput::default();
    for w in full.warnings().iter().chain(eff.warnings()) {
        out.warn(w.clone());
    }
    note_evolution(&mut out, "symmetric", &sf);
    note_evolution(&mut out, "effective", &se);
    let mut t = Table::new(
        "comparison",
        &["t", "t_g_eff", "p_r_full", "p_r_effective", "n_phonon_full", "n_phonon_effective", "n_photon_full"],
    )
    .plot("symmetric vs effective", "t_g_eff", &["p_r_full", "p_r_effective"], "t G_eff", "⟨E⁰R|ρ|E⁰R⟩", "line");
    let mut max_dev = 0.0f64;
    for (f, e) in rows_f.iter().zip(&rows_e) {
        max_dev = max_dev.max((f[1] - e[1]).abs());
        t.push(vec![f[0], f[0] * g_eff, f[1], e[1], f[2], e[2], f[3]].into_iter().map(Cell::Num).collect());
    }
    out.set("g_eff", g_eff / unit);
    out.set("exact_rates", use_exact_rates);
    out.set("max_abs_p_r_deviation", max_dev);
    out.tables.push(t);
    Ok(out)
}
