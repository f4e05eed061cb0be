use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// Rectangular; keeps a decaying signal's Lorentzian intact.
    #[default]
    None,
    Hann,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinewidthOptions {
    pub window: Window,
    /// Padded length is `zero_pad × next_pow2(n)`.
    pub zero_pad: usize,
    /// Minimum half-width of the fit window, in padded bins.
    pub fit_bins: usize,
    /// Peaks below this angular frequency are ignored.
    pub min_frequency: f64,
    /// Remove the least-squares line before transforming.
    pub detrend: bool,
}

impl Default for LinewidthOptions {
    fn default() -> Self {
        LinewidthOptions {
            window: Window::None,
            zero_pad: 4,
            fit_bins: 10,
            min_frequency: 0.0,
            detrend: true,
        }
    }
}

/// Spectral line parameters, in angular frequency.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Linewidth {
    pub fwhm: f64,
    pub center: f64,
    /// Peak power of the fitted Lorentzian.
    pub peak: f64,
    /// Resolution of the unpadded transform, `2π/T`.
    pub resolution: f64,
}

fn prepare(signal: &[f64], opts: &LinewidthOptions) -> Vec<f64> {
    let n = signal.len();
    let mut x = signal.to_vec();
    if opts.detrend && n > 1 {
        let nf = n as f64;
        let tm = (nf - 1.0) / 2.0;
        let ym = x.iter().sum::<f64>() / nf;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (i, y) in x.iter().enumerate() {
            let d = i as f64 - tm;
            sxy += d * (y - ym);
            sxx += d * d;
        }
        let slope = sxy / sxx;
        for (i, y) in x.iter_mut().enumerate() {
            *y -= ym + slope * (i as f64 - tm);
        }
    }
    if opts.window == Window::Hann && n > 1 {
        for (i, y) in x.iter_mut().enumerate() {
            *y *= 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
        }
    }
    x
}

/// One-sided power spectrum `(ω_k, |F_k|²)` of the prepared, zero-padded signal.
pub fn power_spectrum(signal: &[f64], dt: f64, opts: &LinewidthOptions) -> Result<Vec<(f64, f64)>> {
    if signal.len() < 4 {
        return Err(Error::invalid("signal needs at least 4 samples"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt must be positive"));
    }
    if signal.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("signal has non-finite samples"));
    }
    let x = prepare(signal, opts);
    let len = signal.len().next_power_of_two() * opts.zero_pad.max(1);
    let mut buf: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    buf.resize(len, C64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let dw = 2.0 * std::f64::consts::PI / (len as f64 * dt);
    Ok(buf[..=len / 2].iter().enumerate().map(|(k, z)| (k as f64 * dw, z.norm_sqr())).collect())
}

/// FWHM and centre of the dominant non-DC spectral line.
///
/// The line is fitted as `P(ω) = A/((ω−ω₀)² + γ²)` by weighted least squares on
/// `1/P`, which is quadratic in `ω`; `fwhm = 2γ`.
pub fn linewidth(signal: &[f64], dt: f64, opts: &LinewidthOptions) -> Result<Linewidth> {
    let spec = power_spectrum(signal, dt, opts)?;
    let total: f64 = spec.iter().map(|s| s.1).sum();
    let lo = spec.iter().position(|&(w, _)| w >= opts.min_frequency).unwrap_or(spec.len()).max(1);
    if lo + 2 >= spec.len() {
        return Err(Error::NoOscillation("minimum frequency above Nyquist".into()));
    }
    let (kmax, pmax) = spec[lo..]
        .iter()
        .enumerate()
        .map(|(i, s)| (i + lo, s.1))
        .fold((lo, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    let last = spec.len() - 1;
    if !(pmax > 1e-24 * total.max(f64::MIN_POSITIVE)) || pmax <= 0.0 {
        return Err(Error::NoOscillation("flat spectrum".into()));
    }
    // a maximum on the band edge is the skirt of something outside the band
    if kmax == lo && spec[lo - 1].1 >= pmax || kmax == last {
        return Err(Error::NoOscillation(format!(
            "no interior spectral peak above ω = {}",
            opts.min_frequency
        )));
    }
    let half = 0.5 * pmax;
    let mut left = kmax;
    while left > lo && spec[left].1 > half {
        left -= 1;
    }
    let mut right = kmax;
    while right < last && spec[right].1 > half {
        right += 1;
    }
    let reach = opts.fit_bins.max(1).max(3 * (right - left) / 4);
    // fit only the contiguous core of the line, above 10% of the peak
    let mut a = kmax.saturating_sub(reach).max(lo.saturating_sub(1)).max(1);
    let mut b = (kmax + reach).min(last);
    if let Some(k) = (a..kmax).rev().find(|&k| spec[k].1 < 0.1 * pmax) {
        a = k + 1;
    }
    if let Some(k) = (kmax..=b).find(|&k| spec[k].1 < 0.1 * pmax) {
        b = k - 1;
    }
    // 1/P = c0 + c1 u + c2 u² with u = ω − ω_peak, weights P² ≈ residual in P
    let w0 = spec[kmax].0;
    let scale = spec[1].0;
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for &(w, pw) in &spec[a..=b] {
        if pw <= 0.0 {
            continue;
        }
        let u = (w - w0) / scale;
        let basis = [1.0, u, u * u];
        let wt = (pw / pmax).powi(2);
        let y = pmax / pw;
        for i in 0..3 {
            r[i] += wt * basis[i] * y;
            for j in 0..3 {
                m[i][j] += wt * basis[i] * basis[j];
            }
        }
    }
    let c = solve3(m, r);
    let resolution = 2.0 * std::f64::consts::PI / (signal.len() as f64 * dt);
    let fallback = || {
        // interpolated half-maximum width
        let interp = |k0: usize, k1: usize| {
            let (w0, p0) = spec[k0];
            let (w1, p1) = spec[k1];
            if (p1 - p0).abs() < f64::MIN_POSITIVE { w0 } else { w0 + (half - p0) * (w1 - w0) / (p1 - p0) }
        };
        let wl = if left < kmax { interp(left, left + 1) } else { spec[kmax].0 };
        let wr = if right > kmax { interp(right - 1, right) } else { spec[kmax].0 };
        Linewidth { fwhm: wr - wl, center: w0, peak: pmax, resolution }
    };
    let fitted = match c {
        Some([c0, c1, c2]) if c2 > 0.0 => {
            let u0 = -c1 / (2.0 * c2);
            let g2 = c0 / c2 - u0 * u0;
            (g2 > 0.0 && u0.abs() <= reach as f64).then(|| Linewidth {
                fwhm: 2.0 * g2.sqrt() * scale,
                center: w0 + u0 * scale,
                peak: pmax / (c0 - c2 * u0 * u0),
                resolution,
            })
        }
        _ => None,
    };
    let lw = fitted.unwrap_or_else(fallback);
    // a line whose half-maximum reaches DC is a relaxation, not an oscillation
    if lw.center < 0.5 * lw.fwhm {
        return Err(Error::NoOscillation(format!(
            "spectral maximum at ω = {:.3e} is not resolved from DC (FWHM {:.3e})",
            lw.center, lw.fwhm
        )));
    }
    Ok(lw)
}

fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        x[i] = (r[i] - (i + 1..3).map(|k| m[i][k] * x[k]).sum::<f64>()) / m[i][i];
    }
    Some(x)
}

/// Amplitude of the `ω` component of the mean-subtracted signal, `|2/n Σ x_k e^{−iωt_k}|`.
pub fn fourier_amplitude(signal: &[f64], dt: f64, omega: f64) -> f64 {
    let n = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / n;
    let s: C64 = signal
        .iter()
        .enumerate()
        .map(|(k, &x)| (x - mean) * C64::from_polar(1.0, -omega * k as f64 * dt))
        .sum();
    2.0 * s.norm() / n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn damped(n: usize, dt: f64, w0: f64, g: f64) -> Vec<f64> {
        (0..n).map(|k| {
            let t = k as f64 * dt;
            (-g * t).exp() * (w0 * t).cos()
        }).collect()
    }

    #[test]
    fn damped_cosine_is_lorentzian() {
        let (w0, g) = (3.0, 0.05);
        let lw = linewidth(&damped(1 << 14, 0.02, w0, g), 0.02, &LinewidthOptions::default()).unwrap();
        assert!((lw.center - w0).abs() < 0.01, "{lw:?}");
        assert!((lw.fwhm / (2.0 * g) - 1.0).abs() < 0.05, "{lw:?}");
    }

    #[test]
    fn pure_cosine_sits_at_resolution_floor() {
        let (n, dt) = (1 << 12, 0.05);
        let lw = linewidth(&damped(n, dt, 2.0, 0.0), dt, &LinewidthOptions::default()).unwrap();
        let floor = 2.0 * std::f64::consts::PI / (n as f64 * dt);
        assert!(lw.fwhm > 0.5 * floor && lw.fwhm < 1.5 * floor, "{} vs {floor}", lw.fwhm);
    }

    #[test]
    fn resampling_keeps_width() {
        let (w0, g, dt) = (2.0, 0.08, 0.04);
        let a = linewidth(&damped(4096, dt, w0, g), dt, &LinewidthOptions::default()).unwrap();
        let b = linewidth(&damped(8192, dt / 2.0, w0, g), dt / 2.0, &LinewidthOptions::default()).unwrap();
        assert!((a.fwhm / b.fwhm - 1.0).abs() < 0.02, "{} {}", a.fwhm, b.fwhm);
    }

    #[test]
    fn constant_signal_has_no_oscillation() {
        let e = linewidth(&vec![0.3; 1024], 0.1, &LinewidthOptions::default()).unwrap_err();
        assert!(matches!(e, Error::NoOscillation(_)));
        let decay: Vec<f64> = (0..1024).map(|k| (-0.01 * k as f64).exp()).collect();
        let e = linewidth(&decay, 0.1, &LinewidthOptions::default()).unwrap_err();
        assert!(matches!(e, Error::NoOscillation(_)), "{e:?}");
    }

    #[test]
    fn fourier_amplitude_of_cosine() {
        let dt = 0.01;
        let x: Vec<f64> = (0..10000).map(|k| 0.4 * (2.0 * k as f64 * dt).cos()).collect();
        assert!((fourier_amplitude(&x, dt, 2.0) - 0.4).abs() < 1e-3);
        assert!(fourier_amplitude(&x, dt, 5.0) < 0.01);
    }
}
