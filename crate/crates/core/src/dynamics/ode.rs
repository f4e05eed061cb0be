//! Dormand–Prince 5(4) on matrix-valued states.

use crate::{Error, Matrix, Result, C64};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            atol: 1e-9,
            rtol: 1e-7,
        }
    }
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
/// Fifth- minus fourth-order weights (7 stages, last is the FSAL stage).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn combo(y: &Matrix, h: f64, ks: &[&Matrix], w: &[f64]) -> Matrix {
    let mut out = y.clone();
    for (k, &c) in ks.iter().zip(w) {
        if c != 0.0 {
            let s = C64::from(h * c);
            out.zip_mut_with(k, |o, &v| *o += s * v);
        }
    }
    out
}

pub(crate) struct Stats {
    pub steps: usize,
    pub rejected: usize,
}

/// Adaptive integrator that lands exactly on each requested output time.
pub(crate) struct Dopri5<'a, F: Fn(&Matrix) -> Matrix> {
    f: &'a F,
    tol: Tolerances,
    h: Option<f64>,
    fsal: Option<Matrix>,
    pub stats: Stats,
    /// Called on step-size underflow to build the error.
    on_stiff: &'a dyn Fn(f64, f64) -> Error,
}

impl<'a, F: Fn(&Matrix) -> Matrix> Dopri5<'a, F> {
    pub fn new(f: &'a F, tol: Tolerances, on_stiff: &'a dyn Fn(f64, f64) -> Error) -> Self {
        Dopri5 {
            f,
            tol,
            h: None,
            fsal: None,
            stats: Stats { steps: 0, rejected: 0 },
            on_stiff,
        }
    }

    fn err_norm(&self, y: &Matrix, ynew: &Matrix, err: &Matrix) -> f64 {
        let mut acc = 0.0;
        for ((a, b), e) in y.iter().zip(ynew.iter()).zip(err.iter()) {
            let sc = self.tol.atol + self.tol.rtol * a.norm().max(b.norm());
            acc += (e.norm() / sc).powi(2);
        }
        (acc / y.len() as f64).sqrt()
    }

    fn initial_step(&self, y: &Matrix, k1: &Matrix, span: f64) -> f64 {
        let d0 = crate::linalg::frobenius(y) / (y.len() as f64).sqrt();
        let d1 = crate::linalg::frobenius(k1) / (y.len() as f64).sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(span)
    }

    /// Advance `y` from `t0` to `t1`.
    pub fn advance(&mut self, y: &mut Matrix, t0: f64, t1: f64) -> Result<()> {
        let mut t = t0;
        let f = self.f;
        let mut k1 = match self.fsal.take() {
            Some(k) => k,
            None => f(y),
        };
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(y, &k1, t1 - t0),
        };
        while t < t1 {
            let remaining = t1 - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let step = if last { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) && !last {
                return Err((self.on_stiff)(t, step));
            }
            let k2 = f(&combo(y, step, &[&k1], &A2));
            let k3 = f(&combo(y, step, &[&k1, &k2], &A3));
            let k4 = f(&combo(y, step, &[&k1, &k2, &k3], &A4));
            let k5 = f(&combo(y, step, &[&k1, &k2, &k3, &k4], &A5));
            let k6 = f(&combo(y, step, &[&k1, &k2, &k3, &k4, &k5], &A6));
            let ynew = combo(y, step, &[&k1, &k2, &k3, &k4, &k5, &k6], &B);
            let k7 = f(&ynew);
            let err = combo(
                &Matrix::zeros(y.raw_dim()),
                step,
                &[&k1, &k2, &k3, &k4, &k5, &k6, &k7],
                &E,
            );
            let en = self.err_norm(y, &ynew, &err);
            if en <= 1.0 {
                t = if last { t1 } else { t + step };
                *y = ynew;
                k1 = k7;
                self.stats.steps += 1;
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                // a step truncated to hit t1 says little about the natural size
                h = if last && step < h { h } else { step * fac };
            } else {
                self.stats.rejected += 1;
                let fac = if en.is_finite() { (0.9 * en.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                h = step * fac;
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err((self.on_stiff)(t, h));
                }
            }
        }
        self.h = Some(h);
        self.fsal = Some(k1);
        Ok(())
    }
}
