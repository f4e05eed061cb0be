use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Frequencies, couplings and rates of the cavity-mediated setup.
///
/// Detunings are derived from the bare frequencies; [`PhysicalParams::with_detunings`]
/// sets the frequencies so that `Δ_c`, `Δ_e` take the requested values and the
/// two-photon resonance `ω_gr = ω_L + ω_L^m + ω_m` holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalParams {
    pub n_atoms: usize,
    pub omega_m: f64,
    pub omega_0: f64,
    pub omega_p: f64,
    pub omega_ge: f64,
    pub omega_gr: f64,
    #[serde(rename = "omega_L")]
    pub omega_l: f64,
    #[serde(rename = "omega_L_m")]
    pub omega_l_m: f64,
    pub g0: f64,
    pub g: f64,
    /// Linearized membrane–cavity coupling `|G|`.
    #[serde(rename = "G")]
    pub big_g: f64,
    /// Phase of `G`; only `|G|` enters observable rates.
    #[serde(rename = "G_phase")]
    pub g_phase: f64,
    #[serde(rename = "Omega")]
    pub rabi: f64,
    #[serde(rename = "E_p")]
    pub e_p: f64,
    pub kappa: f64,
    #[serde(rename = "Gamma_e")]
    pub gamma_e: f64,
    #[serde(rename = "Gamma_r")]
    pub gamma_r: f64,
    pub gamma_m: f64,
    #[serde(rename = "N_m")]
    pub n_m: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            n_atoms: 1,
            omega_m: 0.0,
            omega_0: 0.0,
            omega_p: 0.0,
            omega_ge: 0.0,
            omega_gr: 0.0,
            omega_l: 0.0,
            omega_l_m: 0.0,
            g0: 0.0,
            g: 0.0,
            big_g: 0.0,
            g_phase: 0.0,
            rabi: 0.0,
            e_p: 0.0,
            kappa: 0.0,
            gamma_e: 0.0,
            gamma_r: 0.0,
            gamma_m: 0.0,
            n_m: 0.0,
        }
    }
}

impl PhysicalParams {
    /// Frequencies chosen in the rotating frame so that `Δ_c`, `Δ_e` are as given
    /// and the Rydberg resonance is exact.
    pub fn with_detunings(n_atoms: usize, delta_c: f64, delta_e: f64) -> Self {
        PhysicalParams {
            n_atoms,
            omega_0: delta_c,
            omega_ge: delta_e,
            ..Default::default()
        }
    }

    /// `Δ_c = ω₀ − ω_L^m − ω_m`.
    pub fn delta_c(&self) -> f64 {
        self.omega_0 - self.omega_l_m - self.omega_m
    }

    /// `Δ_e = ω_ge − ω_L^m − ω_m`.
    pub fn delta_e(&self) -> f64 {
        self.omega_ge - self.omega_l_m - self.omega_m
    }

    /// `Δ_p = ω_p − ω_L^m`.
    pub fn delta_p(&self) -> f64 {
        self.omega_p - self.omega_l_m
    }

    /// `ω_gr − (ω_L + ω_L^m + ω_m)`; zero at resonance. Acts as a Rydberg
    /// detuning in the rotating frame.
    pub fn rydberg_mismatch(&self) -> f64 {
        self.omega_gr - (self.omega_l + self.omega_l_m + self.omega_m)
    }

    /// Complex `G = |G| e^{iφ}`.
    pub fn g_complex(&self) -> C64 {
        C64::from_polar(self.big_g, self.g_phase)
    }

    /// Collective cavity coupling `ḡ = √N g`.
    pub fn g_bar(&self) -> f64 {
        (self.n_atoms as f64).sqrt() * self.g
    }

    /// Hard errors for invalid records; soft issues come back as warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.n_atoms == 0 {
            return Err(Error::invalid("n_atoms must be at least 1"));
        }
        let rates = [
            ("kappa", self.kappa),
            ("Gamma_e", self.gamma_e),
            ("Gamma_r", self.gamma_r),
            ("gamma_m", self.gamma_m),
            ("N_m", self.n_m),
        ];
        for (name, v) in rates {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        let all = [
            self.omega_m, self.omega_0, self.omega_p, self.omega_ge, self.omega_gr, self.omega_l,
            self.omega_l_m, self.g0, self.g, self.big_g, self.g_phase, self.rabi, self.e_p,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("parameters must be finite"));
        }
        let mut warnings = Vec::new();
        let mismatch = self.rydberg_mismatch();
        if mismatch.abs() > 1e-12 * (1.0 + self.omega_gr.abs()) {
            warnings.push(format!(
                "resonance condition ω_gr = ω_L + ω_L^m + ω_m violated by {mismatch:.6e}"
            ));
        }
        Ok(warnings)
    }
}

/// Membrane coupled to the ensemble through a free-space light field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LongDistanceParams {
    pub g_m: f64,
    pub g_at: f64,
    pub k_l_m: f64,
    pub z_bar: f64,
    /// Coherent drive `η(σ_GR + σ_RG)` on the superatom; zero by default.
    pub drive: f64,
}

impl Default for LongDistanceParams {
    fn default() -> Self {
        LongDistanceParams {
            g_m: 0.0,
            g_at: 0.0,
            k_l_m: 0.0,
            z_bar: 0.0,
            drive: 0.0,
        }
    }
}

impl LongDistanceParams {
    /// Parameters reproducing a given collective coupling `Ḡ_eff` for `n_atoms`
    /// with `g_at = g_m`.
    pub fn from_collective(g_bar_eff: f64, n_atoms: usize) -> Self {
        let g = (g_bar_eff / (n_atoms as f64).sqrt()).sqrt();
        LongDistanceParams {
            g_m: g,
            g_at: g,
            ..Default::default()
        }
    }

    /// `Ḡ_eff = g_m g_at √N`.
    pub fn g_bar_eff(&self, n_atoms: usize) -> f64 {
        self.g_m * self.g_at * (n_atoms as f64).sqrt()
    }

    /// `Δ_at = g_at²`.
    pub fn delta_at(&self) -> f64 {
        self.g_at * self.g_at
    }

    /// `γ_m^diff = 2 g_m²`.
    pub fn gamma_m_diff(&self) -> f64 {
        2.0 * self.g_m * self.g_m
    }

    pub fn phase(&self) -> f64 {
        self.k_l_m * self.z_bar
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g_m", self.g_m), ("g_at", self.g_at)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite and non-negative")));
            }
        }
        if !self.k_l_m.is_finite() || !self.z_bar.is_finite() || !self.drive.is_finite() {
            return Err(Error::invalid("long-distance parameters must be finite"));
        }
        Ok(())
    }
}

/// De-excitation pulse and auxiliary-state removal used for sympathetic cooling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingParams {
    #[serde(rename = "Omega_d")]
    pub omega_d: f64,
    pub gamma_cl: f64,
    /// Minimum `γ_cl/Ω_d` for the elimination of the auxiliary state.
    #[serde(default = "CoolingParams::default_ratio")]
    pub min_ratio: f64,
}

impl CoolingParams {
    fn default_ratio() -> f64 {
        10.0
    }

    pub fn new(omega_d: f64, gamma_cl: f64) -> Self {
        CoolingParams {
            omega_d,
            gamma_cl,
            min_ratio: Self::default_ratio(),
        }
    }

    /// Parameters realizing a target `γ^R_cool` at the given `γ_cl`.
    pub fn from_rate(gamma_cool: f64, gamma_cl: f64) -> Self {
        Self::new((gamma_cool * gamma_cl).sqrt(), gamma_cl)
    }

    /// `γ^R_cool = Ω_d²/γ_cl`.
    pub fn gamma_cool(&self) -> f64 {
        self.omega_d * self.omega_d / self.gamma_cl
    }

    pub fn elimination_valid(&self) -> bool {
        self.gamma_cl >= self.min_ratio * self.omega_d.abs()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_cl > 0.0) || !self.gamma_cl.is_finite() {
            return Err(Error::invalid("gamma_cl must be positive"));
        }
        if !self.omega_d.is_finite() {
            return Err(Error::invalid("Omega_d must be finite"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detunings_from_frequencies() {
        let p = PhysicalParams {
            omega_0: 10.0,
            omega_ge: 7.0,
            omega_l_m: 2.0,
            omega_m: 1.0,
            omega_p: 4.0,
            omega_l: 3.0,
            omega_gr: 6.0,
            ..Default::default()
        };
        assert_eq!(p.delta_c(), 7.0);
        assert_eq!(p.delta_e(), 4.0);
        assert_eq!(p.delta_p(), 2.0);
        assert_eq!(p.rydberg_mismatch(), 0.0);
        assert!(p.validate().unwrap().is_empty());
    }

    #[test]
    fn resonance_violation_warns() {
        let p = PhysicalParams {
            omega_gr: 0.5,
            ..PhysicalParams::with_detunings(3, 10.0, 10.0)
        };
        assert_eq!(p.validate().unwrap().len(), 1);
    }

    #[test]
    fn invalid_records_rejected() {
        assert!(PhysicalParams { n_atoms: 0, ..Default::default() }.validate().is_err());
        assert!(PhysicalParams { kappa: -1.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn long_distance_derived() {
        let ld = LongDistanceParams { g_m: 0.5, g_at: 2.0, ..Default::default() };
        assert_eq!(ld.gamma_m_diff(), 0.5);
        assert_eq!(ld.delta_at(), 4.0);
        assert_eq!(ld.g_bar_eff(4), 2.0);
        let ld = LongDistanceParams::from_collective(0.3, 9);
        assert!((ld.g_bar_eff(9) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn cooling_rate() {
        let c = CoolingParams::new(1.0, 100.0);
        assert!((c.gamma_cool() - 0.01).abs() < 1e-15);
        assert!(c.elimination_valid());
        assert!(!CoolingParams::new(1.0, 5.0).elimination_valid());
        assert!((CoolingParams::from_rate(0.1, 10.0).gamma_cool() - 0.1).abs() < 1e-15);
    }
}
