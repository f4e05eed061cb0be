//! Small dense linear-algebra helpers shared by the builders and integrators.

use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{Eigh, Inverse, UPLO};

use crate::{Error, Matrix, Result, Vector, C64};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(n: usize) -> Matrix {
    Array2::eye(n)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.t().mapv(|z| z.conj())
}

pub fn dagger_view(m: ArrayView2<C64>) -> Matrix {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product `a ⊗ b`, `a` taking the most significant index.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == ZERO {
            continue;
        }
        out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc])
            .assign(&b.mapv(|y| x * y));
    }
    out
}

pub fn trace(m: &Matrix) -> C64 {
    m.diag().sum()
}

/// Max-abs entry distance between `m` and `m†`.
pub fn hermiticity_defect(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn one_norm(m: &Matrix) -> f64 {
    m.axis_iter(Axis(1))
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_sqr(v: &Vector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Column-stacking vectorization: `vec(ρ)[i + j d] = ρ[i, j]`.
pub fn vectorize(m: &Matrix) -> Vector {
    let d = m.nrows();
    let mut v = Array1::zeros(d * m.ncols());
    for ((i, j), &x) in m.indexed_iter() {
        v[i + j * d] = x;
    }
    v
}

pub fn unvectorize(v: &Vector, d: usize) -> Matrix {
    Array2::from_shape_fn((d, d), |(i, j)| v[i + j * d])
}

pub fn hermitian_part(m: &Matrix) -> Matrix {
    (m + &dagger(m)).mapv(|z| z * 0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Array1<f64>> {
    let (vals, _) = hermitian_part(m).eigh(UPLO::Upper)?;
    Ok(vals)
}

pub fn expect(op: &Matrix, psi: &Vector) -> C64 {
    psi.iter()
        .zip(op.dot(psi).iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

const PADE_THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[
            17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
        ],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        _ => &[
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ],
    }
}

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn expm(a: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::invalid("expm needs a square matrix"));
    }
    let norm = one_norm(a);
    let (order, squarings) = match PADE_THETA.iter().find(|(_, theta)| norm <= *theta) {
        Some(&(m, _)) => (m, 0),
        None => {
            let s = if norm > THETA_13 {
                (norm / THETA_13).log2().ceil() as i32
            } else {
                0
            };
            (13, s.max(0) as u32)
        }
    };
    let scale = C64::from(0.5f64.powi(squarings as i32));
    let a = a.mapv(|z| z * scale);
    let b = pade_coefficients(order);
    let id = identity(n);
    let a2 = a.dot(&a);
    let (u, v) = if order == 13 {
        let a4 = a2.dot(&a2);
        let a6 = a4.dot(&a2);
        let c = |k: usize| C64::from(b[k]);
        let inner_u = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
        let u = a.dot(&(a6.dot(&inner_u) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1)));
        let inner_v = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
        let v = a6.dot(&inner_v) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);
        (u, v)
    } else {
        let mut powers = vec![id.clone(), a2.clone()];
        while powers.len() <= order / 2 {
            let next = powers.last().unwrap().dot(&a2);
            powers.push(next);
        }
        let mut u_even = Array2::zeros((n, n));
        let mut v = Array2::zeros((n, n));
        for k in 0..=order / 2 {
            u_even = u_even + &powers[k] * C64::from(b[2 * k + 1]);
            v = v + &powers[k] * C64::from(b[2 * k]);
        }
        (a.dot(&u_even), v)
    };
    let denom = (&v - &u).inv()?;
    let mut r = denom.dot(&(&v + &u));
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    Ok(r)
}

/// `exp(t A) v` by a truncated Taylor series, split into chunks with
/// `‖A‖₁ |t_chunk| ≤ 1`.
pub fn expm_apply_taylor(a: &Matrix, v: &Vector, t: f64, a_norm: f64) -> Vector {
    let chunks = ((a_norm * t.abs()).ceil() as usize).max(1);
    let dt = C64::from(t / chunks as f64);
    let mut out = v.clone();
    for _ in 0..chunks {
        let mut term = out.clone();
        let mut acc = out.clone();
        let scale = term.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        for k in 1..40 {
            term = a.dot(&term).mapv(|z| z * dt / k as f64);
            acc += &term;
            let size = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if size <= 1e-17 * scale {
                break;
            }
        }
        out = acc;
    }
    out
}

pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::factorial::ln_factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn expm_of_rotation_generator() {
        // exp(-iθσx) = cos θ − i sin θ σx
        let theta = 0.7;
        let a = Array2::from_shape_vec((2, 2), vec![ZERO, -I * theta, -I * theta, ZERO]).unwrap();
        let e = expm(&a).unwrap();
        assert_abs_diff_eq!(e[[0, 0]].re, theta.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[[0, 1]].im, -theta.sin(), epsilon = 1e-14);
    }

    #[test]
    fn expm_large_norm_matches_diagonal() {
        let a = Array2::from_diag(&Array1::from(vec![C64::new(-30.0, 4.0), C64::new(2.0, -1.0)]));
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - C64::new(-30.0, 4.0).exp()).norm() < 1e-12);
        assert!((e[[1, 1]] - C64::new(2.0, -1.0).exp()).norm() < 1e-12);
    }

    #[test]
    fn taylor_apply_agrees_with_expm() {
        let a = Array2::from_shape_fn((4, 4), |(i, j)| {
            C64::new((i as f64 - j as f64) * 0.3, ((i * j) as f64).sin() * 0.5)
        });
        let v = Array1::from_shape_fn(4, |i| C64::new(1.0 + i as f64, 0.5));
        let t = 2.3;
        let dense = expm(&a.mapv(|z| z * t)).unwrap().dot(&v);
        let taylor = expm_apply_taylor(&a, &v, t, one_norm(&a));
        for (x, y) in dense.iter().zip(taylor.iter()) {
            assert!((x - y).norm() < 1e-11);
        }
    }

    #[test]
    fn vectorize_is_column_stacking() {
        let m = Array2::from_shape_fn((2, 2), |(i, j)| C64::from((i + 2 * j) as f64));
        let v = vectorize(&m);
        assert_eq!(v[1], C64::from(1.0));
        assert_eq!(v[2], C64::from(2.0));
        assert_eq!(unvectorize(&v, 2), m);
    }
}
