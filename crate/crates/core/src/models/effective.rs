//! Adiabatically eliminated Jaynes–Cummings model of superatom and membrane.

use serde::Serialize;

use super::{CoolingParams, DissipatorTerm, LindbladModel, PhysicalParams};
use crate::hilbert::{annihilation_op, fock_space, two_level_space, Operator, SpaceSpec};
use crate::{CsrMatrix, Error, Result, C64};

/// Effective coupling, shifts and rates of the eliminated model.
///
/// `delta_g`, `delta_r` follow the sign convention of the formula they came
/// from: the approximate shifts are `Δ_G ≈ G²/Δ_c`, `Δ_Ω ≈ Ω²/Δ_e` entering
/// `−nΔ_G|G,n⟩⟨G,n| − Δ_Ω|R,n−1⟩⟨R,n−1|`, while the exact single-excitation
/// values are negative for large positive detunings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveRates {
    pub g_eff: f64,
    pub delta_g: f64,
    pub delta_r: f64,
    pub gamma_r_eff: f64,
    pub gamma_m_eff: f64,
    /// Weights of `J_Γ = |G,0⟩(w₀⟨G,1| + w₁⟨R,0|)`; zero for the approximate rates.
    pub exact_jump_gamma: [C64; 2],
    /// Weights of `J_κ`, same layout.
    pub exact_jump_kappa: [C64; 2],
    pub exact: bool,
}

/// Leading-order rates: `G_eff ≈ √N gGΩ/(Δ_eΔ_c)`, `Δ_G ≈ G²/Δ_c`,
/// `Δ_Ω ≈ Ω²/Δ_e`, `γ_m^eff ≈ κ(G/Δ_c)²`, `Γ_r^eff ≈ Γ_e(Ω/Δ_e)²`.
pub fn effective_rates_approx(p: &PhysicalParams) -> Result<EffectiveRates> {
    let (dc, de) = (p.delta_c(), p.delta_e());
    if dc == 0.0 || de == 0.0 {
        return Err(Error::Singular("approximate rates need Δ_c, Δ_e ≠ 0".into()));
    }
    let g = p.big_g;
    Ok(EffectiveRates {
        g_eff: p.g_bar() * g * p.rabi / (de * dc),
        delta_g: g * g / dc,
        delta_r: p.rabi * p.rabi / de,
        gamma_r_eff: p.gamma_e * (p.rabi / de).powi(2),
        gamma_m_eff: p.kappa * (g / dc).powi(2),
        exact_jump_gamma: [C64::from(0.0); 2],
        exact_jump_kappa: [C64::from(0.0); 2],
        exact: false,
    })
}

/// Closed-form single-excitation rates from eliminating `|G,1,0⟩`, `|E¹,0,0⟩`.
///
/// With `D = (Γ_eκ + ḡ² − Δ_cΔ_e)² + (Δ_cΓ_e + Δ_eκ)²`:
/// `G_eff = GḡΩ(Γ_eκ + ḡ² − Δ_eΔ_c)/D`,
/// `Δ_g = G²(Δ_eḡ² − Δ_c(Δ_e² + Γ_e²))/D`, `Δ_r = Ω²(Δ_cḡ² − Δ_e(Δ_c² + κ²))/D`.
/// The rates `Γ_r^eff`, `γ_m^eff` are the `R` and `G` weights of the two jump
/// operators.
pub fn effective_rates_exact(p: &PhysicalParams) -> Result<EffectiveRates> {
    let (dc, de) = (p.delta_c(), p.delta_e());
    let (ge, k) = (p.gamma_e, p.kappa);
    let gb = p.g_bar();
    let (g, om) = (p.big_g, p.rabi);
    let re = ge * k + gb * gb - dc * de;
    let im = dc * ge + de * k;
    let d = re * re + im * im;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Singular("effective-rate denominator D vanishes".into()));
    }
    let i = C64::i();
    let sd = d.sqrt();
    let jg = [
        i * (ge.sqrt() * gb * g / sd),
        -(i * dc + k) * (ge.sqrt() * om / sd),
    ];
    let jk = [
        -(i * de + ge) * (k.sqrt() * g / sd),
        i * (k.sqrt() * gb * om / sd),
    ];
    Ok(EffectiveRates {
        g_eff: g * gb * om * re / d,
        delta_g: g * g * (de * gb * gb - dc * (de * de + ge * ge)) / d,
        delta_r: om * om * (dc * gb * gb - de * (dc * dc + k * k)) / d,
        gamma_r_eff: jg[1].norm_sqr() + jk[1].norm_sqr(),
        gamma_m_eff: jg[0].norm_sqr() + jk[0].norm_sqr(),
        exact_jump_gamma: jg,
        exact_jump_kappa: jk,
        exact: true,
    })
}

/// Violations of `Δ_c, Δ_e ≫ G√n, Ω, Γ_e, κ` and `Δ_cΔ_e ≫ g²Nn` at `margin`.
pub fn adiabatic_violations(p: &PhysicalParams, n: usize, margin: f64) -> Vec<String> {
    let mut out = Vec::new();
    let scales = [
        ("G√n", p.big_g * (n as f64).sqrt()),
        ("Ω", p.rabi),
        ("Γ_e", p.gamma_e),
        ("κ", p.kappa),
    ];
    for (dname, d) in [("Δ_c", p.delta_c()), ("Δ_e", p.delta_e())] {
        for (name, s) in scales {
            if d.abs() < margin * s {
                out.push(format!("adiabatic condition {dname} ≫ {name} violated ({:.3e} vs {:.3e})", d.abs(), s));
            }
        }
    }
    let lhs = (p.delta_c() * p.delta_e()).abs();
    let rhs = p.g * p.g * p.n_atoms as f64 * n as f64;
    if lhs < margin * rhs {
        out.push(format!("adiabatic condition Δ_cΔ_e ≫ g²Nn violated ({lhs:.3e} vs {rhs:.3e})"));
    }
    out
}

pub(crate) struct JcmOps {
    pub space: SpaceSpec,
    pub b: Operator,
    /// `σ_GR = |G⟩⟨R|`
    pub s_gr: Operator,
    pub p_g: Operator,
    pub p_r: Operator,
}

/// Membrane Fock space of `cutoff` states ⊗ `{|G⟩, |R⟩}`.
pub(crate) fn jcm_ops(cutoff: usize) -> Result<JcmOps> {
    let ph = fock_space(cutoff, "membrane")?;
    let at = two_level_space("superatom")?;
    let space = ph.tensor(&at);
    let space = SpaceSpec::new(space.factors().to_vec())?;
    let b = Operator::product(&space, &[(0, &annihilation_op(&ph)?)])?;
    let loc = |to, from| -> Result<Operator> {
        Operator::product(&space, &[(1, &Operator::transition(&at, to, from)?)])
    };
    Ok(JcmOps {
        s_gr: loc(0, 1)?,
        p_g: loc(0, 0)?,
        p_r: loc(1, 1)?,
        b,
        space,
    })
}

/// Effective model for up to `n` excitations on membrane Fock(n+1) ⊗ {G, R}.
///
/// `H = −Δ_G b†b⊗|G⟩⟨G| − Δ_Ω|R⟩⟨R| + G_eff(b|R⟩⟨G| + b†|G⟩⟨R|)`, which on the
/// `n`-th manifold gives the `−nΔ_G`, `−Δ_Ω` shifts and `√n G_eff` coupling.
/// With `use_exact_rates` (only `n = 1`) the single-excitation closed forms
/// are used verbatim, including the jump operators `J_Γ`, `J_κ`.
pub fn build_effective_n(p: &PhysicalParams, n: usize, use_exact_rates: bool) -> Result<LindbladModel> {
    if n == 0 {
        return Err(Error::invalid("excitation number n must be at least 1"));
    }
    if use_exact_rates && n > 1 {
        return Err(Error::Unsupported(
            "exact effective rates are only available for a single excitation".into(),
        ));
    }
    let warnings = p.validate()?;
    let ops = jcm_ops(n + 1)?;
    let rates = if use_exact_rates {
        effective_rates_exact(p)?
    } else {
        effective_rates_approx(p)?
    };
    let bd = ops.b.dag();
    let nb = bd.mul(&ops.b)?;
    let mut h = nb.mul(&ops.p_g)?.scale(-rates.delta_g);
    h = h.add(&ops.p_r.scale(-rates.delta_r))?;
    let hop = ops.b.mul(&ops.s_gr.dag())?;
    h = h.add(&hop.add(&hop.dag())?.scale(rates.g_eff))?;

    let mut model = LindbladModel::new(
        if use_exact_rates { "effective_exact" } else { "effective" },
        h,
    );
    for w in warnings.into_iter().chain(adiabatic_violations(p, n, 10.0)) {
        model.warn(w);
    }
    if use_exact_rates {
        model.push_lindblad(p.gamma_r, ops.s_gr.clone(), "Gamma_r")?;
        let ground1 = ops.b.mul(&ops.p_g)?; // |G,0⟩⟨G,1|
        for (w, label) in [(rates.exact_jump_gamma, "J_Gamma"), (rates.exact_jump_kappa, "J_kappa")] {
            let j = ground1.scale(w[0]).add(&ops.s_gr.scale(w[1]))?;
            // restrict |R⟩⟨…| parts to the zero-phonon component
            let j = project_zero_phonon(&ops, &j)?;
            if w.iter().any(|z| z.norm() > 0.0) {
                model.push(DissipatorTerm::lindblad(1.0, j, label))?;
            }
        }
        model.push_lindblad((p.n_m + 1.0) * p.gamma_m, ops.b.clone(), "phonon decay")?;
        model.push_lindblad(p.n_m * p.gamma_m, bd, "phonon heating")?;
    } else {
        model.push_lindblad(p.gamma_r + rates.gamma_r_eff, ops.s_gr.clone(), "Rydberg decay")?;
        model.push_lindblad(
            (p.n_m + 1.0) * p.gamma_m + rates.gamma_m_eff,
            ops.b.clone(),
            "phonon decay",
        )?;
        model.push_lindblad(p.n_m * p.gamma_m, bd, "phonon heating")?;
    }
    Ok(model)
}

/// Keep only matrix elements that end in `|G,0⟩`.
fn project_zero_phonon(ops: &JcmOps, j: &Operator) -> Result<Operator> {
    // index of |phonon, atom⟩ = 2·phonon + atom; |G,0⟩ = 0
    let d = j.dim();
    let m = CsrMatrix::from_triplets(d, d, j.sparse().iter().filter(|&(r, _, _)| r == 0));
    Operator::from_sparse(ops.space.clone(), m)
}

/// Effective model plus the eliminated de-excitation channel
/// `γ^R_cool D[|G⟩⟨R|]`. The removed atom is not tracked: the ensemble ground
/// state stands in for the `N−1` atom vacuum.
pub fn build_cooling(p: &PhysicalParams, c: &CoolingParams, n: usize) -> Result<LindbladModel> {
    c.validate()?;
    let mut model = build_effective_n(p, n, false)?;
    if !c.elimination_valid() {
        model.warn(format!(
            "auxiliary-state elimination needs γ_cl ≫ Ω_d (γ_cl/Ω_d = {:.3} < {})",
            c.gamma_cl / c.omega_d.abs(),
            c.min_ratio
        ));
    }
    let ops = jcm_ops(n + 1)?;
    model.push_lindblad(c.gamma_cool(), ops.s_gr, "cooling")?;
    Ok(model)
}
