//! Cavity-mediated models: per-atom microscopic and symmetric collective.

use serde::{Deserialize, Serialize};

use super::{DissipatorTerm, LindbladModel, PhysicalParams, TermForm};
use crate::hilbert::{
    annihilation_op, collective_lowering, fock_space, microscopic_basis, AtomLevel,
    CollectiveBasis, CollectiveLabel, LadderBranch, Operator, SpaceSpec,
};
use crate::{Result, C64};

/// Fock truncations (number of kept states) for the bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cutoffs {
    pub phonon: usize,
    pub cavity: usize,
    /// Microscopic models only: drop atomic strings with more non-ground atoms.
    #[serde(default)]
    pub max_excited: Option<usize>,
}

impl Cutoffs {
    pub fn new(phonon: usize, cavity: usize) -> Self {
        Cutoffs {
            phonon,
            cavity,
            max_excited: None,
        }
    }
}

pub(crate) const PHONON: usize = 0;
pub(crate) const CAVITY: usize = 1;
pub(crate) const ATOMS: usize = 2;

struct Modes {
    space: SpaceSpec,
    b: Operator,
    a: Operator,
}

fn modes(cut: Cutoffs, atoms: &SpaceSpec) -> Result<Modes> {
    let ph = fock_space(cut.phonon, "membrane")?;
    let cav = fock_space(cut.cavity, "cavity")?;
    let space = SpaceSpec::new(
        ph.factors()
            .iter()
            .chain(cav.factors())
            .chain(atoms.factors())
            .cloned()
            .collect(),
    )?;
    let b = Operator::product(&space, &[(PHONON, &annihilation_op(&ph)?)])?;
    let a = Operator::product(&space, &[(CAVITY, &annihilation_op(&cav)?)])?;
    Ok(Modes { space, b, a })
}

/// `Δ_c a†a + G a†b + G* b†a` and the bosonic dissipators shared by both
/// cavity models.
fn bosonic_part(p: &PhysicalParams, m: &Modes) -> Result<(Operator, Vec<DissipatorTerm>)> {
    let ad = m.a.dag();
    let bd = m.b.dag();
    let g = p.g_complex();
    let mut h = ad.mul(&m.a)?.scale(p.delta_c());
    h = h.add(&ad.mul(&m.b)?.scale(g))?;
    h = h.add(&bd.mul(&m.a)?.scale(g.conj()))?;
    let mut terms = Vec::new();
    for (rate, op, label) in [
        ((p.n_m + 1.0) * p.gamma_m, m.b.clone(), "phonon decay"),
        (p.n_m * p.gamma_m, bd, "phonon heating"),
        (p.kappa, m.a.clone(), "cavity loss"),
    ] {
        if rate != 0.0 {
            terms.push(DissipatorTerm::lindblad(rate, op, label));
        }
    }
    Ok((h, terms))
}

/// Per-atom model with a hard blockade constraint.
///
/// Space: membrane ⊗ cavity ⊗ atomic strings. In the rotating frame the
/// Hamiltonian is `Δ_c a†a + Δ_e Σ|e⟩⟨e| + δ_r Σ|r⟩⟨r| + gΣ(a†|g⟩⟨e| + h.c.)
/// + ΩΣ(|e⟩⟨r| + h.c.) + G a†b + G* b†a`, where `δ_r` is the violation of
/// the Rydberg resonance condition (zero by default).
pub fn build_microscopic(p: &PhysicalParams, cut: Cutoffs) -> Result<LindbladModel> {
    let warnings = p.validate()?;
    let basis = microscopic_basis(p.n_atoms, true, cut.max_excited, "atoms")?;
    let m = modes(cut, basis.space())?;
    let on_atoms = |op: &Operator| Operator::product(&m.space, &[(ATOMS, op)]);

    let (mut h, terms) = bosonic_part(p, &m)?;
    let lower = basis.collective_transition(AtomLevel::G, AtomLevel::E);
    let laser = basis.collective_transition(AtomLevel::E, AtomLevel::R);
    let n_e = basis.level_count_op(AtomLevel::E);
    let n_r = basis.level_count_op(AtomLevel::R);
    h = h.add(&on_atoms(&n_e)?.scale(p.delta_e()))?;
    if p.rydberg_mismatch() != 0.0 {
        h = h.add(&on_atoms(&n_r)?.scale(p.rydberg_mismatch()))?;
    }
    let ad_lower = Operator::product(
        &m.space,
        &[(CAVITY, &annihilation_op(&fock_space(cut.cavity, "cavity")?)?.dag()), (ATOMS, &lower)],
    )?;
    h = h.add(&ad_lower.add(&ad_lower.dag())?.scale(p.g))?;
    let laser_full = on_atoms(&laser)?;
    h = h.add(&laser_full.add(&laser_full.dag())?.scale(p.rabi))?;

    let mut model = LindbladModel::new("microscopic", h);
    for w in warnings {
        model.warn(w);
    }
    for t in terms {
        model.push(t)?;
    }
    for i in 0..p.n_atoms {
        if p.gamma_e != 0.0 {
            let op = on_atoms(&basis.transition(i, AtomLevel::G, AtomLevel::E)?)?;
            model.push_lindblad(p.gamma_e, op, &format!("Gamma_e atom {i}"))?;
        }
        if p.gamma_r != 0.0 {
            let op = on_atoms(&basis.transition(i, AtomLevel::G, AtomLevel::R)?)?;
            model.push_lindblad(p.gamma_r, op, &format!("Gamma_r atom {i}"))?;
        }
    }
    Ok(model)
}

/// Model restricted to the symmetric collective basis.
///
/// The intermediate-state decay is the symmetric projection of the per-atom
/// decay: four sandwich blocks `2Γ_e A_x ρ A_y†` with `A = L_noR/√N`,
/// `A_R = L_R/√N`, plus `−Γ_e(Kρ + ρK)` with
/// `K = Σ_j j|E^j⟩⟨E^j| + (j−1)|E^{j−1}R⟩⟨E^{j−1}R|`. For `N ≥ 2` and
/// `Γ_e > 0` this block is not trace preserving: the missing weight is the
/// population that leaks into the non-symmetric subspace.
pub fn build_symmetric(p: &PhysicalParams, cut: Cutoffs) -> Result<LindbladModel> {
    let warnings = p.validate()?;
    let n = p.n_atoms;
    let basis = CollectiveBasis::new(n, "atoms")?;
    let m = modes(cut, basis.space())?;
    let on_atoms = |op: &Operator| Operator::product(&m.space, &[(ATOMS, op)]);

    let (mut h, terms) = bosonic_part(p, &m)?;

    let mut diag = Operator::zeros(basis.space());
    let mut n_r = Operator::zeros(basis.space());
    for j in 1..=n {
        diag.add_assign_scaled(&basis.projector(CollectiveLabel::E(j))?, j as f64)?;
    }
    for j in 0..n {
        diag.add_assign_scaled(&basis.projector(CollectiveLabel::ER(j))?, j as f64)?;
        n_r.add_assign_scaled(&basis.projector(CollectiveLabel::ER(j))?, 1.0)?;
    }
    h = h.add(&on_atoms(&diag)?.scale(p.delta_e()))?;
    if p.rydberg_mismatch() != 0.0 {
        h = h.add(&on_atoms(&n_r)?.scale(p.rydberg_mismatch()))?;
    }

    let l_nor = collective_lowering(&basis, LadderBranch::CavityNoR);
    let l_r = collective_lowering(&basis, LadderBranch::CavityWithR);
    let l_laser = collective_lowering(&basis, LadderBranch::Laser);
    let ad = annihilation_op(&fock_space(cut.cavity, "cavity")?)?.dag();
    let cav = l_nor.add(&l_r)?;
    let ad_l = Operator::product(&m.space, &[(CAVITY, &ad), (ATOMS, &cav)])?;
    h = h.add(&ad_l.add(&ad_l.dag())?.scale(p.g))?;
    let laser = on_atoms(&l_laser)?;
    h = h.add(&laser.add(&laser.dag())?.scale(p.rabi))?;

    let mut model = LindbladModel::new("symmetric", h);
    for w in warnings {
        model.warn(w);
    }
    for t in terms {
        model.push(t)?;
    }
    if p.gamma_r != 0.0 {
        for i in 0..n {
            let op = on_atoms(&basis.transition(CollectiveLabel::E(i), CollectiveLabel::ER(i))?)?;
            model.push_lindblad(p.gamma_r, op, &format!("Gamma_r E{i}R"))?;
        }
    }
    if p.gamma_e != 0.0 {
        let s = 1.0 / (n as f64).sqrt();
        let a = on_atoms(&l_nor.scale(s))?;
        let a_r = on_atoms(&l_r.scale(s))?;
        for (l, r, label) in [
            (&a, a.dag(), "Gamma_e E-E"),
            (&a_r, a.dag(), "Gamma_e ER-E"),
            (&a, a_r.dag(), "Gamma_e E-ER"),
            (&a_r, a_r.dag(), "Gamma_e ER-ER"),
        ] {
            model.push(DissipatorTerm::new(p.gamma_e, l.clone(), r, TermForm::Sandwich, false, label)?)?;
        }
        let mut k = Operator::zeros(basis.space());
        for j in 1..=n {
            k.add_assign_scaled(&basis.projector(CollectiveLabel::E(j))?, j as f64)?;
            k.add_assign_scaled(&basis.projector(CollectiveLabel::ER(j - 1))?, (j - 1) as f64)?;
        }
        let k = on_atoms(&k)?;
        let id = Operator::identity(&m.space);
        model.push(DissipatorTerm::new(
            C64::from(p.gamma_e),
            k,
            id,
            TermForm::Decay,
            false,
            "Gamma_e decay",
        )?)?;
        if n >= 2 {
            model.warn(
                "symmetric-subspace Γ_e dissipator leaks population out of the symmetric \
                 subspace; the trace is not conserved for N ≥ 2",
            );
        }
    }
    Ok(model)
}
