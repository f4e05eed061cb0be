use ndarray_linalg::{Solve, SVD};
use serde::{Deserialize, Serialize};

use super::generator::Generator;
use super::ode::{Dopri5, Tolerances};
use super::state::{min_eigenvalue, PSD_ERROR, PSD_WARN};
use super::superop::liouvillian;
use crate::linalg::{frobenius, hermitian_part, trace, unvectorize};
use crate::models::LindbladModel;
use crate::{Error, Matrix, Result, Vector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteadyMethod {
    Nullspace,
    LongTime,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: Matrix,
    /// Frobenius norm of `L[ρ_ss]`.
    pub residual: f64,
    pub warnings: Vec<String>,
}

/// Residual accepted by both methods.
pub const STEADY_TOL: f64 = 1e-8;
const LONG_TIME_MAX: f64 = 1e8;

fn normalize(rho: Matrix) -> Result<Matrix> {
    let rho = hermitian_part(&rho);
    let tr = trace(&rho);
    if tr.norm() < 1e-300 {
        return Err(Error::Singular("steady-state candidate has zero trace".into()));
    }
    Ok(rho.mapv(|z| z / tr))
}

pub fn steady_state(model: &LindbladModel, method: SteadyMethod) -> Result<SteadyState> {
    let d = model.dim();
    let gen = Generator::new(model);
    let mut warnings = Vec::new();
    let rho = match method {
        SteadyMethod::Nullspace => {
            let l = liouvillian(model)?;
            let n = d * d;
            // replace the first equation by the trace functional
            let mut a = l.clone();
            for j in 0..n {
                a[[0, j]] = C64::from(0.0);
            }
            for i in 0..d {
                a[[0, i + i * d]] = C64::from(1.0);
            }
            let mut rhs = Vector::zeros(n);
            rhs[0] = C64::from(1.0);
            let candidate = a.solve(&rhs).ok().map(|v| unvectorize(&v, d));
            let ok = candidate
                .as_ref()
                .map(|r| r.iter().all(|z| z.is_finite()) && frobenius(&gen.apply(r)) < STEADY_TOL)
                .unwrap_or(false);
            if ok {
                normalize(candidate.unwrap())?
            } else {
                let (_, s, vt) = l.svd(false, true)?;
                let vt = vt.expect("requested right singular vectors");
                let smax = s[0].max(1e-300);
                let zeros = s.iter().filter(|&&x| x < 1e-10 * smax).count();
                if zeros > 1 {
                    warnings.push(format!(
                        "steady state is degenerate ({zeros} zero modes); returning the first"
                    ));
                }
                let k = n - 1;
                let v = vt.row(k).mapv(|z| z.conj());
                let mut rho = unvectorize(&v, d);
                // fix the arbitrary phase of the singular vector
                let tr = trace(&rho);
                if tr.norm() > 1e-12 {
                    rho.mapv_inplace(|z| z * tr.conj() / tr.norm());
                }
                normalize(rho)?
            }
        }
        SteadyMethod::LongTime => {
            let f = |r: &Matrix| gen.apply(r);
            let on_stiff = |t: f64, h: f64| Error::Stiffness {
                time: t,
                step: h,
                spectral_radius: gen.spectral_radius_estimate(50),
            };
            let tol = Tolerances { atol: 1e-12, rtol: 1e-10 };
            let mut rk = Dopri5::new(&f, tol, &on_stiff);
            let mut rho = Matrix::from_diag(&Vector::from_elem(d, C64::from(1.0 / d as f64)));
            let mut t = 0.0;
            let mut chunk = 1.0;
            loop {
                rk.advance(&mut rho, t, t + chunk)?;
                t += chunk;
                rho = normalize(rho)?;
                let res = frobenius(&gen.apply(&rho));
                if res < STEADY_TOL * 0.1 {
                    break;
                }
                if t > LONG_TIME_MAX {
                    return Err(Error::NonConvergence {
                        iterations: rk.stats.steps,
                        residual: res,
                    });
                }
                chunk = (chunk * 2.0).min(1e4);
            }
            rho
        }
    };
    let residual = frobenius(&gen.apply(&rho));
    if residual > STEADY_TOL {
        warnings.push(format!("steady-state residual {residual:.3e} above {STEADY_TOL:.0e}"));
    }
    let min = min_eigenvalue(&rho)?;
    if min < PSD_ERROR {
        return Err(Error::Singular(format!(
            "steady state is not positive semidefinite (λ_min = {min:.3e})"
        )));
    }
    if min < PSD_WARN {
        warnings.push(format!("steady state has eigenvalue {min:.3e}"));
    }
    Ok(SteadyState {
        rho,
        residual,
        warnings,
    })
}
