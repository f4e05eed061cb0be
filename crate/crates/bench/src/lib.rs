//! Fixed workloads shared by the benchmarks.

use superatom::dynamics::{basis_ket, ket_to_dm};
use superatom::models::{
    build_cooling, build_long_distance, build_symmetric, CoolingParams, Cutoffs, LongDistanceMode, LongDistanceParams,
    PhysicalParams,
};
use superatom::{LindbladModel, Matrix, Vector};

/// Dispersive cavity parameters with every loss channel switched on.
pub fn lossy_params(n_atoms: usize) -> PhysicalParams {
    PhysicalParams {
        g: 1.0,
        big_g: 1.0,
        rabi: 1.0,
        kappa: 0.1,
        gamma_e: 0.1,
        gamma_r: 1e-3,
        gamma_m: 1e-3,
        n_m: 2.0,
        ..PhysicalParams::with_detunings(n_atoms, 20.0, 20.0)
    }
}

/// Symmetric-basis model and its one-phonon initial state.
pub fn symmetric_workload(n_atoms: usize, cutoff: usize) -> (LindbladModel, Matrix) {
    let m = build_symmetric(&lossy_params(n_atoms), Cutoffs::new(cutoff, cutoff)).expect("valid model");
    // |1 phonon, 0 photons, G⟩: index 1·(cutoff·(2N+1))
    let rho = ket_to_dm(&basis_ket(m.dim(), cutoff * (2 * n_atoms + 1)).unwrap());
    (m, rho)
}

/// Resonant-limit long-distance model from `|G, 1⟩`.
pub fn long_distance_workload(phonon_cutoff: usize) -> (LindbladModel, Vector) {
    let p = PhysicalParams { gamma_r: 0.05, gamma_m: 0.02, n_m: 1.0, ..PhysicalParams::with_detunings(4, 0.0, 0.0) };
    let ld = LongDistanceParams::from_collective(1.0, 4);
    let m = build_long_distance(&ld, &p, LongDistanceMode::ResonantLimit, phonon_cutoff).expect("valid model");
    (m, basis_ket(2 * phonon_cutoff, 2).unwrap())
}

pub fn cooling_workload(excitations: usize) -> LindbladModel {
    let p = PhysicalParams { n_m: 10.0, gamma_m: 1e-3, ..lossy_params(10_000) };
    build_cooling(&p, &CoolingParams::from_rate(0.1, 100.0), excitations).expect("valid model")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build() {
        let (m, rho) = symmetric_workload(2, 3);
        assert_eq!(rho.nrows(), m.dim());
        assert_eq!(rho[[15, 15]].re, 1.0);
        let (m, psi) = long_distance_workload(6);
        assert_eq!(psi.len(), m.dim());
        assert_eq!(cooling_workload(4).dim(), 10);
    }
}
