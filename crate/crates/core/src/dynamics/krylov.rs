//! Arnoldi approximation of `exp(tA)v` with step halving.

use ndarray::{s, Array2};

use crate::linalg::{expm, norm_sqr};
use crate::{Error, Result, Vector, C64};

pub const KRYLOV_DIM: usize = 30;

fn dotc(a: &Vector, b: &Vector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `exp(tA)v` for a linear map `apply`, subdividing `t` until the a-posteriori
/// Arnoldi error estimate of every sub-step is below `tol·‖v‖`.
pub fn expm_krylov(
    apply: &dyn Fn(&Vector) -> Vector,
    v: &Vector,
    t: f64,
    m: usize,
    tol: f64,
) -> Result<Vector> {
    let n = v.len();
    let m = m.min(n).max(1);
    let mut w = v.clone();
    let mut done = 0.0;
    let mut tau = t;
    let mut halvings = 0usize;
    while done < t * (1.0 - 1e-14) {
        tau = tau.min(t - done);
        let beta = norm_sqr(&w).sqrt();
        if beta == 0.0 {
            return Ok(w);
        }
        // Arnoldi with one reorthogonalization pass
        let mut basis: Vec<Vector> = vec![w.mapv(|z| z / beta)];
        let mut h = Array2::<C64>::zeros((m + 1, m));
        let mut k = m;
        let mut breakdown = false;
        for j in 0..m {
            let mut p = apply(&basis[j]);
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let c = dotc(q, &p);
                    h[[i, j]] += c;
                    p.zip_mut_with(q, |a, &b| *a -= c * b);
                }
            }
            let hn = norm_sqr(&p).sqrt();
            h[[j + 1, j]] = C64::from(hn);
            if hn < 1e-12 * beta.max(1.0) {
                k = j + 1;
                breakdown = true;
                break;
            }
            basis.push(p.mapv(|z| z / hn));
        }
        loop {
            let hk = h.slice(s![..k, ..k]).mapv(|z| z * tau);
            let f = expm(&hk)?;
            let err = if breakdown {
                0.0
            } else {
                beta * h[[k, k - 1]].norm() * tau * f[[k - 1, 0]].norm()
            };
            if err <= tol * beta || tau < 1e-300 {
                let mut next = Vector::zeros(n);
                for (i, q) in basis.iter().take(k).enumerate() {
                    let c = f[[i, 0]] * beta;
                    next.zip_mut_with(q, |a, &b| *a += c * b);
                }
                w = next;
                done += tau;
                if err < 0.01 * tol * beta {
                    tau *= 2.0;
                }
                break;
            }
            tau *= 0.5;
            halvings += 1;
            if halvings > 200 {
                return Err(Error::NonConvergence {
                    iterations: halvings,
                    residual: err / beta,
                });
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    #[test]
    fn matches_dense_exponential() {
        let n = 60;
        let a = Matrix::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                C64::new(-(i as f64) * 0.05, 0.3)
            } else if i + 1 == j || j + 1 == i {
                C64::new(0.0, -0.7)
            } else {
                C64::from(0.0)
            }
        });
        let v = Vector::from_shape_fn(n, |i| C64::new(1.0 / (1.0 + i as f64), 0.0));
        let exact = expm(&a.mapv(|z| z * 3.0)).unwrap().dot(&v);
        let approx = expm_krylov(&|x| a.dot(x), &v, 3.0, 20, 1e-12).unwrap();
        let diff = (&exact - &approx).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-9, "{diff}");
    }
}
