use serde::Serialize;

use super::PhysicalParams;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Serialize)]
pub struct Linearization {
    /// Pump-mode amplitude.
    pub alpha: C64,
    /// Membrane displacement.
    pub beta: C64,
    /// Linearized coupling `G = −α g₀`.
    pub g: C64,
    pub residual: f64,
    pub iterations: usize,
    /// `|α| g₀ / |Δ̃_p − ω_m|`; the rotating-wave reduction needs this ≪ 1.
    pub rwa_ratio: f64,
}

pub const LINEARIZE_MAX_ITER: usize = 10_000;
const DAMPING: f64 = 0.5;

fn residuals(p: &PhysicalParams, alpha: C64, beta: C64) -> (C64, C64) {
    let i = C64::i();
    let a_new = p.e_p / (p.kappa + i * (p.g0 * (beta.conj() + beta)) + i * p.delta_p());
    let b_new = p.g0 * alpha.norm_sqr() / (i * p.gamma_m - p.omega_m);
    (a_new, b_new)
}

/// Mean-field fixed point `α = E_p/(κ + ig₀(β*+β) + iΔ_p)`,
/// `β = g₀|α|²/(iγ_m − ω_m)` by damped fixed-point iteration.
pub fn linearize_optomech(p: &PhysicalParams, tol: f64) -> Result<Linearization> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let denom_b = C64::new(-p.omega_m, p.gamma_m);
    if denom_b.norm() == 0.0 && p.g0 != 0.0 {
        return Err(Error::Singular("ω_m = γ_m = 0 leaves β undefined".into()));
    }
    let mut alpha = C64::from(0.0);
    let mut beta = C64::from(0.0);
    let mut residual = f64::INFINITY;
    for it in 1..=LINEARIZE_MAX_ITER {
        let (a_new, b_new) = if p.g0 == 0.0 {
            (residuals(p, alpha, beta).0, C64::from(0.0))
        } else {
            residuals(p, alpha, beta)
        };
        let (a_res, b_res) = (a_new - alpha, b_new - beta);
        residual = a_res.norm().max(b_res.norm());
        if !residual.is_finite() {
            break;
        }
        if residual < tol {
            let dp_tilde = p.delta_p() + p.g0 * 2.0 * beta.re;
            let gap = (dp_tilde - p.omega_m).abs();
            return Ok(Linearization {
                alpha,
                beta,
                g: -alpha * p.g0,
                residual,
                iterations: it,
                rwa_ratio: if gap == 0.0 { f64::INFINITY } else { alpha.norm() * p.g0 / gap },
            });
        }
        alpha += a_res * DAMPING;
        beta += b_res * DAMPING;
    }
    Err(Error::NonConvergence {
        iterations: LINEARIZE_MAX_ITER,
        residual,
    })
}
