//! Monte-Carlo wave-function unraveling.

use std::collections::HashMap;

use ndarray_linalg::{Eigh, UPLO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sparse::OpRepr;
use super::state::check_times;
use crate::linalg::{dagger, expm, max_abs, norm_sqr, one_norm};
use crate::models::LindbladModel;
use crate::{CsrMatrix, Error, Matrix, Result, Vector, C64};

/// Largest allowed negative eigenvalue of the dissipator coefficient matrix.
const NEGATIVE_RATE_TOL: f64 = 1e-10;
/// Relative bisection tolerance on the jump time.
const JUMP_TIME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Channel {
    pub label: String,
    /// `λ_k` in `λ_k D[J_k]`.
    pub rate: f64,
}

/// Diagonal Lindblad form `H_eff = H − iK`, jumps `C_k = √(2λ_k) J_k`.
#[derive(Debug, Clone)]
pub struct Unraveling {
    h_eff: Matrix,
    jumps: Vec<OpRepr>,
    channels: Vec<Channel>,
}

impl Unraveling {
    pub fn new(model: &LindbladModel) -> Result<Self> {
        // collect distinct operators F_a and coefficients h_ab of 2h_ab F_a ρ F_b†
        let mut ops: Vec<CsrMatrix> = Vec::new();
        let mut labels: Vec<Vec<String>> = Vec::new();
        let mut h: HashMap<(usize, usize), C64> = HashMap::new();
        let find = |m: CsrMatrix, label: &str, ops: &mut Vec<CsrMatrix>, labels: &mut Vec<Vec<String>>| {
            let scale = m.max_abs().max(1e-300);
            for (i, o) in ops.iter().enumerate() {
                if o.add_scaled(&m, C64::from(-1.0)).max_abs() <= 1e-14 * scale {
                    if !labels[i].iter().any(|l| l == label) {
                        labels[i].push(label.to_string());
                    }
                    return i;
                }
            }
            ops.push(m);
            labels.push(vec![label.to_string()]);
            ops.len() - 1
        };
        for t in model.terms() {
            for (c, l, r) in t.sandwiches() {
                let a = find(l, &t.label, &mut ops, &mut labels);
                let b = find(r.adjoint(), &t.label, &mut ops, &mut labels);
                *h.entry((a, b)).or_insert(C64::from(0.0)) += c;
            }
        }
        let n = ops.len();
        let mut hm = Matrix::zeros((n, n));
        for (&(a, b), &c) in &h {
            hm[[a, b]] += c;
        }
        if max_abs(&(&hm - &dagger(&hm))) > 1e-10 * max_abs(&hm).max(1.0) {
            return Err(Error::Unsupported(format!(
                "model '{}' has a non-Hermitian dissipator coefficient matrix",
                model.name()
            )));
        }
        let diagonal = (0..n).all(|a| (0..n).all(|b| a == b || hm[[a, b]].norm() == 0.0));
        let (lambda, u): (Vec<f64>, Matrix) = if diagonal {
            ((0..n).map(|a| hm[[a, a]].re).collect(), crate::linalg::identity(n))
        } else {
            let (ev, vecs) = hm.eigh(UPLO::Lower)?;
            (ev.to_vec(), vecs)
        };
        let d = model.dim();
        let mut k_sum = CsrMatrix::zeros(d, d);
        let mut jumps = Vec::new();
        let mut channels = Vec::new();
        let lam_scale = lambda.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        for (k, &lam) in lambda.iter().enumerate() {
            if lam < -NEGATIVE_RATE_TOL * lam_scale.max(1.0) {
                return Err(Error::Unsupported(format!(
                    "model '{}' is not completely positive (dissipator eigenvalue {lam:.3e})",
                    model.name()
                )));
            }
            if lam <= 1e-14 * lam_scale {
                continue;
            }
            let mut j = CsrMatrix::zeros(d, d);
            for a in 0..n {
                let w = u[[a, k]];
                if w.norm() != 0.0 {
                    j = j.add_scaled(&ops[a], w);
                }
            }
            k_sum = k_sum.add_scaled(&j.adjoint().matmul(&j), C64::from(lam));
            let label = if diagonal {
                labels[k].join("+")
            } else {
                format!("mode {k}")
            };
            jumps.push(OpRepr::from_sparse(j.scale(C64::from((2.0 * lam).sqrt()))));
            channels.push(Channel { label, rate: lam });
        }
        let x = model.decay_operator();
        let defect = x.add_scaled(&k_sum, C64::from(-1.0)).max_abs();
        if defect > 1e-10 * x.max_abs().max(1.0) {
            return Err(Error::Unsupported(format!(
                "model '{}' is not in Lindblad form (decay operator differs from ΣλJ†J by {defect:.3e})",
                model.name()
            )));
        }
        let h_eff = model.hamiltonian().sparse().add_scaled(&x, -C64::i()).to_dense();
        Ok(Unraveling {
            h_eff,
            jumps,
            channels,
        })
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// `H − iK`.
    pub fn effective_hamiltonian(&self) -> &Matrix {
        &self.h_eff
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpRecord {
    pub time: f64,
    pub channel: usize,
    /// Observables of the normalized state just before the jump.
    pub before: Vec<f64>,
    /// ... and just after it.
    pub after: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub index: usize,
    /// `values[o][k]`: observable `o` at grid time `k`.
    pub values: Vec<Vec<f64>>,
    pub jumps: Vec<JumpRecord>,
    /// Largest `|‖ψ‖ − 1|` right after a renormalization.
    pub renorm_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryResult {
    pub times: Vec<f64>,
    pub observables: Vec<String>,
    pub channels: Vec<Channel>,
    pub trajectories: Vec<Trajectory>,
    pub seed: u64,
    pub n_traj: usize,
}

impl TrajectoryResult {
    pub fn observable_index(&self, name: &str) -> Option<usize> {
        self.observables.iter().position(|o| o == name)
    }

    /// Ensemble mean and standard error of observable `o` at each grid time.
    pub fn mean_and_stderr(&self, o: usize) -> (Vec<f64>, Vec<f64>) {
        let n = self.trajectories.len() as f64;
        let nt = self.times.len();
        let mut mean = vec![0.0; nt];
        let mut err = vec![0.0; nt];
        for k in 0..nt {
            let xs = self.trajectories.iter().map(|t| t.values[o][k]);
            let m = xs.clone().sum::<f64>() / n;
            let var = if n > 1.0 {
                xs.map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            mean[k] = m;
            err[k] = (var / n).sqrt();
        }
        (mean, err)
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryOptions {
    pub n_traj: usize,
    pub seed: u64,
    /// Hermitian observables recorded on the grid and around each jump.
    pub observables: Vec<(String, Matrix)>,
}

struct Engine<'a> {
    un: &'a Unraveling,
    a: OpRepr,
    a_norm: f64,
    propagators: Vec<Matrix>,
    observables: Vec<OpRepr>,
}

impl Engine<'_> {
    /// `exp(−iH_eff t) v` by chunked Taylor series.
    fn drift(&self, v: &Vector, t: f64) -> Vector {
        let chunks = ((self.a_norm * t).ceil() as usize).max(1);
        let dt = C64::from(t / chunks as f64);
        let mut out = v.clone();
        for _ in 0..chunks {
            let mut term = out.clone();
            let mut acc = out.clone();
            let scale = norm_sqr(&out).sqrt().max(1e-300);
            for k in 1..60 {
                term = self.a.apply(&term).mapv(|z| z * dt / k as f64);
                acc += &term;
                if norm_sqr(&term).sqrt() <= 1e-17 * scale {
                    break;
                }
            }
            out = acc;
        }
        out
    }

    fn measure(&self, psi: &Vector) -> Vec<f64> {
        let n = norm_sqr(psi);
        self.observables
            .iter()
            .map(|o| {
                let v = o.apply(psi);
                psi.iter().zip(v.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / n
            })
            .collect()
    }

    fn run(&self, psi0: &Vector, times: &[f64], intervals: &[usize], index: usize, seed: u64) -> Trajectory {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let draw = |rng: &mut ChaCha8Rng| 1.0 - rng.random::<f64>();
        let mut threshold = draw(&mut rng);
        let mut psi = psi0.mapv(|z| z / norm_sqr(psi0).sqrt());
        let mut values = vec![Vec::with_capacity(times.len()); self.observables.len()];
        let mut jumps = Vec::new();
        let mut renorm_error: f64 = 0.0;
        let push = |values: &mut Vec<Vec<f64>>, obs: Vec<f64>| {
            for (v, x) in values.iter_mut().zip(obs) {
                v.push(x);
            }
        };
        push(&mut values, self.measure(&psi));
        for k in 1..times.len() {
            let (t0, t1) = (times[k - 1], times[k]);
            let mut t = t0;
            let mut fresh = true;
            while t < t1 {
                let cand = if fresh && intervals[k] != usize::MAX {
                    self.propagators[intervals[k]].dot(&psi)
                } else {
                    self.drift(&psi, t1 - t)
                };
                fresh = false;
                if norm_sqr(&cand) > threshold || self.un.jumps.is_empty() {
                    psi = cand;
                    t = t1;
                    continue;
                }
                // bisection for the time at which ‖ψ‖² crosses the threshold
                let (mut lo, mut hi) = (t, t1);
                let mut psi_lo = psi.clone();
                let tol = JUMP_TIME_TOL * (t1 - t0);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    let p = self.drift(&psi_lo, mid - lo);
                    if norm_sqr(&p) > threshold {
                        psi_lo = p;
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let pre = self.drift(&psi_lo, hi - lo);
                let weights: Vec<f64> = self.un.jumps.iter().map(|c| norm_sqr(&c.apply(&pre))).collect();
                let total: f64 = weights.iter().sum();
                let before = self.measure(&pre);
                let mut pick = rng.random::<f64>() * total;
                let mut channel = weights.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if pick < *w {
                        channel = i;
                        break;
                    }
                    pick -= w;
                }
                let post = self.un.jumps[channel].apply(&pre);
                let nrm = norm_sqr(&post).sqrt();
                psi = post.mapv(|z| z / nrm);
                renorm_error = renorm_error.max((norm_sqr(&psi).sqrt() - 1.0).abs());
                jumps.push(JumpRecord {
                    time: hi,
                    channel,
                    before,
                    after: self.measure(&psi),
                });
                threshold = draw(&mut rng);
                t = hi;
            }
            push(&mut values, self.measure(&psi));
        }
        Trajectory {
            index,
            values,
            jumps,
            renorm_error,
        }
    }
}

/// Unravel `model` into `n_traj` quantum trajectories starting from `psi0`.
///
/// Trajectory `i` draws from `ChaCha8(seed)` on stream `i`, so results do not
/// depend on scheduling. Observables are recorded on the output grid only.
pub fn evolve_trajectories(
    model: &LindbladModel,
    psi0: &Vector,
    times: &[f64],
    opts: &TrajectoryOptions,
) -> Result<TrajectoryResult> {
    check_times(times)?;
    if psi0.len() != model.dim() {
        return Err(Error::SpaceMismatch("initial state does not match model dimension".into()));
    }
    if norm_sqr(psi0) == 0.0 {
        return Err(Error::invalid("initial state has zero norm"));
    }
    if opts.n_traj == 0 {
        return Err(Error::invalid("n_traj must be at least 1"));
    }
    for (name, o) in &opts.observables {
        if o.dim() != (model.dim(), model.dim()) {
            return Err(Error::SpaceMismatch(format!("observable '{name}' has the wrong dimension")));
        }
    }
    let un = Unraveling::new(model)?;
    let a = un.h_eff.mapv(|z| z * C64::new(0.0, -1.0));
    let a_norm = one_norm(&a);
    // one dense propagator per distinct grid spacing
    let mut spacing: Vec<f64> = Vec::new();
    let mut intervals = vec![usize::MAX; times.len()];
    for k in 1..times.len() {
        let dt = times[k] - times[k - 1];
        if dt <= 0.0 {
            continue;
        }
        let idx = match spacing.iter().position(|&s| (s - dt).abs() <= 1e-12 * dt) {
            Some(i) => i,
            None if spacing.len() < 8 => {
                spacing.push(dt);
                spacing.len() - 1
            }
            None => continue,
        };
        intervals[k] = idx;
    }
    let propagators = spacing
        .iter()
        .map(|&dt| expm(&a.mapv(|z| z * dt)))
        .collect::<Result<Vec<_>>>()?;
    let engine = Engine {
        un: &un,
        a: OpRepr::from_dense(&a),
        a_norm,
        propagators,
        observables: opts.observables.iter().map(|(_, o)| OpRepr::from_dense(o)).collect(),
    };
    let trajectories: Vec<Trajectory> = (0..opts.n_traj)
        .into_par_iter()
        .map(|i| engine.run(psi0, times, &intervals, i, opts.seed))
        .collect();
    Ok(TrajectoryResult {
        times: times.to_vec(),
        observables: opts.observables.iter().map(|(n, _)| n.clone()).collect(),
        channels: un.channels.clone(),
        trajectories,
        seed: opts.seed,
        n_traj: opts.n_traj,
    })
}
