//! Membrane / cavity / Rydberg-superatom open-system dynamics.
//!
//! The crate is organized bottom-up:
//!
//! * [`hilbert`] builds truncated Fock spaces, the symmetric collective basis
//!   of a blockaded ensemble, the microscopic per-atom basis and dense
//!   operators on tensor products of them.
//! * [`models`] assembles every Hamiltonian / master-equation variant as a
//!   [`LindbladModel`], together with closed-form effective rates and
//!   feasibility checks.
//! * [`dynamics`] integrates master equations, unravels them into quantum
//!   trajectories and finds steady states.
//! * [`analysis`] turns evolution results into figures of merit.
//!
//! Tensor factors are always ordered membrane ⊗ cavity ⊗ atoms, with the
//! first factor the most significant index of the Kronecker product.
//!
//! All dissipators use the factor-2 convention
//! `D[A]ρ = 2AρA† − A†Aρ − ρA†A`, so a rate `γ` in front of `D[σ]`
//! depletes the upper level at `2γ`.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod sparse;

pub use error::{Error, Result};
pub use hilbert::{
    CollectiveBasis, CollectiveLabel, Factor, FactorKind, LadderBranch, MicroscopicBasis,
    Operator, SpaceSpec,
};

pub use models::{
    CoolingParams, Cutoffs, DissipatorTerm, EffectiveRates, LindbladModel, LongDistanceParams,
    PhysicalParams, TermForm,
};

pub use num_complex::Complex64 as C64;
pub use sparse::CsrMatrix;

/// Dense complex matrix used for operators and density matrices.
pub type Matrix = ndarray::Array2<C64>;
/// Dense complex vector used for state vectors.
pub type Vector = ndarray::Array1<C64>;
