//! Observables extracted from simulated states and time series.

mod partial;
mod populations;
mod protocols;
mod spectrum;

pub use partial::partial_trace;
pub use populations::{
    atomic_basis_of, atomic_populations, bose_einstein, bose_einstein_distance, phonon_distribution,
    subspace_populations, symmetric_projector, BeReference, PhononDist, SubspacePops,
};
pub use protocols::{
    cooling_steady_phonon, cooling_steady_phonon_simulated, fidelity_estimate, fidelity_estimate_from,
    gate_time, transfer_fidelity, CoolingEstimate, TransferFidelity,
};
pub use spectrum::{fourier_amplitude, linewidth, power_spectrum, Linewidth, LinewidthOptions, Window};
