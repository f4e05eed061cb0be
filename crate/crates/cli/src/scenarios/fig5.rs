//! Linewidth of the intermediate-state Rabi oscillation, resonant vs detuned.

use superatom::analysis::{linewidth, power_spectrum, Linewidth, LinewidthOptions};
use superatom::dynamics::{basis_ket, ket_to_dm};
use superatom::hilbert::{microscopic_basis, CollectiveLabel};
use superatom::models::build_semiclassical;
use superatom::Matrix;

use super::{note_evolution, observe_master, time_grid};
use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliResult;
use crate::output::{Cell, RunOutput, Table};

pub fn run(cfg: &ScenarioConfig, unit: f64) -> CliResult<RunOutput> {
    let Scenario::Fig5Linewidth { n_atoms, omega, omega_int, gamma_e_ratio, detunings, window, detrend, min_frequency } =
        &cfg.scenario
    else {
        unreachable!()
    };
    let times = time_grid(cfg, *omega)?;
    let dt = times[1] - times[0];
    let gamma_e = gamma_e_ratio * omega_int;

    // |E¹⟩⟨E¹| on the blockaded microscopic basis
    let basis = microscopic_basis(*n_atoms, true, None, "atoms")?;
    let e1 = basis.symmetric_embedding().column(CollectiveLabel::E(1)).expect("E¹ exists").to_owned();
    let proj = Matrix::from_shape_fn((e1.len(), e1.len()), |(i, j)| e1[i] * e1[j].conj());
    let rho0 = ket_to_dm(&basis_ket(basis.dim(), 0)?);

    let opts = LinewidthOptions { window: *window, detrend: *detrend, min_frequency: min_frequency * omega, ..Default::default() };
    let mut out = RunOutput::default();
    let mut cols = vec!["t".to_string(), "t_omega".to_string()];
    cols.extend(detunings.iter().map(|d| format!("p_e1_delta{d}")));
    let ycols: Vec<String> = cols[2..].to_vec();
    let yref: Vec<&str> = ycols.iter().map(String::as_str).collect();
    let mut signal = Table::with_columns("signal", cols.clone()).plot(
        "intermediate-state population",
        "t_omega",
        &yref,
        "t Ω",
        "⟨E¹|ρ|E¹⟩",
        "line",
    );
    let mut lines = Table::new("linewidths", &["delta_over_omega", "delta", "fwhm", "center", "peak", "resolution"])
        .plot("linewidth vs detuning", "delta_over_omega", &["fwhm"], "Δ/Ω", "FWHM", "scatter");
    let mut series: Vec<Vec<f64>> = Vec::new();
    let mut fits: Vec<Linewidth> = Vec::new();
    for &d in detunings {
        let model = build_semiclassical(*n_atoms, d * omega, *omega_int, *omega, gamma_e)?;
        let (rows, summary) = observe_master(&cfg.solver.options(), &model, &rho0, &times, std::slice::from_ref(&proj))?;
        note_evolution(&mut out, &format!("Δ = {d}Ω"), &summary);
        let s: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let lw = match linewidth(&s, dt, &opts) {
            Ok(lw) => lw,
            Err(e @ superatom::Error::NoOscillation(_)) => {
                out.warn(format!("Δ = {d}Ω: {e}"));
                Linewidth { fwhm: f64::NAN, center: f64::NAN, peak: f64::NAN, resolution: 2.0 * std::f64::consts::PI / (dt * s.len() as f64) }
            }
            Err(e) => return Err(e.into()),
        };
        lines.push(vec![
            d.into(),
            (d * omega / unit).into(),
            (lw.fwhm / unit).into(),
            (lw.center / unit).into(),
            lw.peak.into(),
            (lw.resolution / unit).into(),
        ]);
        if lw.fwhm < 2.0 * lw.resolution {
            out.warn(format!("Δ = {d}Ω: FWHM within twice the resolution floor; lengthen the record"));
        }
        series.push(s);
        fits.push(lw);
    }
    for (k, &t) in times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into(), (t * omega).into()];
        row.extend(series.iter().map(|s| Cell::Num(s[k])));
        signal.push(row);
    }
    // spectra share one frequency grid; keep the band up to twice the largest scale
    let w_max = 2.0 * omega * (detunings.iter().fold(0.0f64, |a, d| a.max(d.abs())) + 4.0);
    let spectra = series.iter().map(|s| power_spectrum(s, dt, &opts)).collect::<Result<Vec<_>, _>>()?;
    let mut cols = vec!["omega".to_string()];
    cols.extend(detunings.iter().map(|d| format!("power_delta{d}")));
    let ycols: Vec<String> = cols[1..].to_vec();
    let yref: Vec<&str> = ycols.iter().map(String::as_str).collect();
    let mut spectrum = Table::with_columns("spectrum", cols).plot(
        "Fourier transform of the intermediate-state oscillation",
        "omega",
        &yref,
        "ω",
        "power (peak-normalized)",
        "line",
    );
    let peaks: Vec<f64> = spectra
        .iter()
        .map(|sp| sp.iter().filter(|(w, _)| *w >= min_frequency * omega).map(|x| x.1).fold(0.0, f64::max))
        .collect();
    for k in 0..spectra[0].len() {
        let w = spectra[0][k].0;
        if w > w_max {
            break;
        }
        let mut row: Vec<Cell> = vec![(w / unit).into()];
        row.extend(spectra.iter().zip(&peaks).map(|(sp, pk)| Cell::Num(sp[k].1 / pk)));
        spectrum.push(row);
    }
    out.set("fwhm", fits.iter().map(|l| l.fwhm / unit).collect::<Vec<_>>());
    out.set("center", fits.iter().map(|l| l.center / unit).collect::<Vec<_>>());
    if fits.len() >= 2 {
        out.set("fwhm_ratio_first_to_last", fits[0].fwhm / fits[fits.len() - 1].fwhm);
    }
    out.set("window", window);
    out.set("gamma_e", gamma_e / unit);
    out.tables = vec![signal, lines, spectrum];
    Ok(out)
}
