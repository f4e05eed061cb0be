use crate::linalg::{identity, kron};
use crate::models::LindbladModel;
use crate::{Error, Matrix, Result, C64};

pub const DEFAULT_SUPEROP_CAP: usize = 4096;
pub const SUPEROP_CAP_ENV: &str = "SUPERATOM_MAX_SUPEROP_DIM";

/// Largest Hilbert dimension `d` for which a `d²×d²` superoperator is built.
pub fn superop_cap() -> usize {
    std::env::var(SUPEROP_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SUPEROP_CAP)
}

/// Superoperator `L` with `vec(ρ̇) = L vec(ρ)` in the column-stacking
/// convention `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`, index `i + j·d`.
///
/// The cap applies to `d²`, the side length of `L`.
pub fn liouvillian(model: &LindbladModel) -> Result<Matrix> {
    let d = model.dim();
    let cap = superop_cap();
    if d * d > cap {
        return Err(Error::ResourceLimit {
            what: "Liouvillian dimension".into(),
            requested: d * d,
            cap,
        });
    }
    let id = identity(d);
    let h = model.hamiltonian().to_dense();
    let x = model.decay_operator().to_dense();
    let mi = C64::new(0.0, -1.0);
    let a = h.mapv(|z| z * mi) - &x; // acts from the left
    let b = h.mapv(|z| -z * mi) - &x; // acts from the right
    let mut l = kron(&id, &a) + kron(&b.t().to_owned(), &id);
    for t in model.terms() {
        for (c, left, right) in t.sandwiches() {
            let s = kron(&right.to_dense().t().to_owned(), &left.to_dense());
            l.zip_mut_with(&s, |o, &v| *o += c * 2.0 * v);
        }
    }
    Ok(l)
}
