use serde::{Deserialize, Serialize};

use super::generator::Generator;
use super::krylov::{expm_krylov, KRYLOV_DIM};
use super::ode::{Dopri5, Tolerances};
use super::state::{check_density, check_times, min_eigenvalue, PSD_ERROR, PSD_WARN};
use crate::linalg::{hermitian_part, hermiticity_defect, trace, unvectorize, vectorize};
use crate::models::LindbladModel;
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AdaptiveRk,
    ExpmKrylov,
}

#[derive(Debug, Clone, Copy)]
pub struct MasterOptions {
    pub method: Method,
    pub tol: Tolerances,
    /// Per-substep tolerance of the Krylov propagator.
    pub krylov_tol: f64,
}

impl Default for MasterOptions {
    fn default() -> Self {
        MasterOptions {
            method: Method::AdaptiveRk,
            tol: Tolerances::default(),
            krylov_tol: 1e-10,
        }
    }
}

impl MasterOptions {
    pub fn with_method(method: Method) -> Self {
        MasterOptions { method, ..Default::default() }
    }
}

/// Diagnostics of a master-equation run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct EvolutionSummary {
    /// `max_t |tr ρ(t) − 1|`
    pub trace_defect: f64,
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the final state.
    pub final_min_eigenvalue: f64,
    pub steps: usize,
    pub rejected: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<Matrix>,
    pub summary: EvolutionSummary,
}

impl EvolutionResult {
    pub fn trace_defect(&self) -> f64 {
        self.summary.trace_defect
    }
}

/// Integrate and keep `ρ(t)` at every grid time.
pub fn evolve_master(
    model: &LindbladModel,
    rho0: &Matrix,
    times: &[f64],
    opts: &MasterOptions,
) -> Result<EvolutionResult> {
    let mut states = Vec::with_capacity(times.len());
    let summary = evolve_master_observe(model, rho0, times, opts, &mut |_, _, rho| {
        states.push(rho.clone())
    })?;
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        summary,
    })
}

/// Integrate, handing `ρ(t_k)` to `observer(k, t_k, ρ)` instead of storing it.
/// `ρ(times[0]) = rho0`.
pub fn evolve_master_observe(
    model: &LindbladModel,
    rho0: &Matrix,
    times: &[f64],
    opts: &MasterOptions,
    observer: &mut dyn FnMut(usize, f64, &Matrix),
) -> Result<EvolutionSummary> {
    check_times(times)?;
    if rho0.dim() != (model.dim(), model.dim()) {
        return Err(Error::SpaceMismatch("initial state does not match model dimension".into()));
    }
    let mut summary = EvolutionSummary {
        warnings: check_density(rho0, "initial state")?,
        ..Default::default()
    };
    let gen = Generator::new(model);
    let f = |r: &Matrix| gen.apply(r);
    let on_stiff = |t: f64, h: f64| Error::Stiffness {
        time: t,
        step: h,
        spectral_radius: gen.spectral_radius_estimate(50),
    };
    let mut rk = Dopri5::new(&f, opts.tol, &on_stiff);
    let d = model.dim();
    let mut rho = rho0.clone();
    let mut record = |k: usize, t: f64, rho: &Matrix, s: &mut EvolutionSummary| {
        s.trace_defect = s.trace_defect.max((trace(rho) - 1.0).norm());
        observer(k, t, rho);
    };
    record(0, times[0], &rho, &mut summary);
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        if t1 > t0 {
            match opts.method {
                Method::AdaptiveRk => rk.advance(&mut rho, t0, t1)?,
                Method::ExpmKrylov => {
                    let apply = |v: &crate::Vector| vectorize(&gen.apply(&unvectorize(v, d)));
                    let w = expm_krylov(&apply, &vectorize(&rho), t1 - t0, KRYLOV_DIM, opts.krylov_tol)?;
                    rho = unvectorize(&w, d);
                }
            }
            // the generator preserves Hermiticity: record the round-off drift, then remove it
            summary.hermiticity_defect = summary.hermiticity_defect.max(hermiticity_defect(&rho));
            rho = hermitian_part(&rho);
        }
        record(k, t1, &rho, &mut summary);
    }
    summary.steps = rk.stats.steps;
    summary.rejected = rk.stats.rejected;
    summary.final_min_eigenvalue = min_eigenvalue(&rho)?;
    if summary.final_min_eigenvalue < PSD_ERROR {
        return Err(Error::NonConvergence {
            iterations: summary.steps,
            residual: summary.final_min_eigenvalue,
        });
    }
    if summary.final_min_eigenvalue < PSD_WARN {
        summary.warnings.push(format!(
            "final state has eigenvalue {:.3e}",
            summary.final_min_eigenvalue
        ));
    }
    if summary.trace_defect > 1e-8 {
        summary.warnings.push(format!("trace defect {:.3e}", summary.trace_defect));
    }
    Ok(summary)
}
