use super::LindbladModel;
use crate::hilbert::{microscopic_basis, AtomLevel};
use crate::Result;

/// Classically driven blockaded ensemble without cavity or membrane:
/// `H = ΔΣ|e⟩⟨e| + Σ(Ω_int|g⟩⟨e| + Ω|e⟩⟨r| + h.c.)` and per-atom `Γ_e D[|g⟩⟨e|]`.
pub fn build_semiclassical(
    n_atoms: usize,
    delta: f64,
    omega_int: f64,
    omega: f64,
    gamma_e: f64,
) -> Result<LindbladModel> {
    let basis = microscopic_basis(n_atoms, true, None, "atoms")?;
    let ge = basis.collective_transition(AtomLevel::G, AtomLevel::E);
    let er = basis.collective_transition(AtomLevel::E, AtomLevel::R);
    let mut h = basis.level_count_op(AtomLevel::E).scale(delta);
    h = h.add(&ge.add(&ge.dag())?.scale(omega_int))?;
    h = h.add(&er.add(&er.dag())?.scale(omega))?;
    let mut model = LindbladModel::new("semiclassical", h);
    for i in 0..n_atoms {
        model.push_lindblad(
            gamma_e,
            basis.transition(i, AtomLevel::G, AtomLevel::E)?,
            &format!("Gamma_e atom {i}"),
        )?;
    }
    Ok(model)
}
