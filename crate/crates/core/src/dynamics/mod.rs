//! Master-equation integration, quantum trajectories and steady states.
//!
//! Density matrices are vectorized by column stacking: `vec(AρB) = (Bᵀ⊗A) vec(ρ)`
//! with `ρ[i, j] ↦ i + j·d`.

mod generator;
mod krylov;
mod master;
mod ode;
mod sparse;
mod state;
mod steady;
mod superop;
mod trajectories;

pub use generator::Generator;
pub use krylov::{expm_krylov, KRYLOV_DIM};
pub use master::{
    evolve_master, evolve_master_observe, EvolutionResult, EvolutionSummary, MasterOptions, Method,
};
pub use ode::Tolerances;
pub use state::{basis_ket, check_density, ket_to_dm, min_eigenvalue, PSD_ERROR, PSD_WARN};
pub use steady::{steady_state, SteadyMethod, SteadyState, STEADY_TOL};
pub use superop::{liouvillian, superop_cap, DEFAULT_SUPEROP_CAP, SUPEROP_CAP_ENV};
pub use trajectories::{
    evolve_trajectories, Channel, JumpRecord, Trajectory, TrajectoryOptions, TrajectoryResult,
    Unraveling,
};
