use serde::Serialize;

use super::PhysicalParams;

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityTerm {
    pub name: String,
    pub value: f64,
    /// `√N g / value`; infinite when the loss vanishes.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub g_bar: f64,
    pub margin: f64,
    pub terms: Vec<FeasibilityTerm>,
    pub pass: bool,
    pub notes: Vec<String>,
}

pub const DEFAULT_MARGIN: f64 = 10.0;

/// Strong-coupling test `√N g ≫ κ, Γ_e, (Δ_e²/Ω²)Γ_r, (Δ_c²/G²)γ_m(N_m+1)`,
/// which presumes `G = Ω` and `Δ_c = Δ_e`; departures are noted.
pub fn check_strong_coupling(p: &PhysicalParams, margin: f64) -> FeasibilityReport {
    let g_bar = p.g_bar();
    let (dc, de) = (p.delta_c(), p.delta_e());
    let safe = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };
    let values = [
        ("kappa", p.kappa),
        ("Gamma_e", p.gamma_e),
        ("Gamma_r (Delta_e/Omega)^2", safe(de * de * p.gamma_r, p.rabi * p.rabi)),
        (
            "gamma_m (N_m+1) (Delta_c/G)^2",
            safe(dc * dc * p.gamma_m * (p.n_m + 1.0), p.big_g * p.big_g),
        ),
    ];
    let terms: Vec<FeasibilityTerm> = values
        .iter()
        .map(|&(name, value)| {
            let ratio = if value == 0.0 { f64::INFINITY } else { g_bar / value };
            FeasibilityTerm {
                name: name.into(),
                value,
                ratio,
                pass: ratio >= margin,
            }
        })
        .collect();
    let mut notes = Vec::new();
    if (p.big_g - p.rabi).abs() > 1e-9 * p.big_g.abs().max(p.rabi.abs()) {
        notes.push("G ≠ Ω: the condition assumes equal couplings".into());
    }
    if (dc - de).abs() > 1e-9 * dc.abs().max(de.abs()) {
        notes.push("Δ_c ≠ Δ_e: the condition assumes equal detunings".into());
    }
    FeasibilityReport {
        g_bar,
        margin,
        pass: terms.iter().all(|t| t.pass),
        terms,
        notes,
    }
}
