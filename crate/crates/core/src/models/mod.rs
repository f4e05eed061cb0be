//! Hamiltonians and master equations for every model level, plus closed-form
//! effective rates and feasibility checks.

mod cavity;
mod dissipator;
mod effective;
mod feasibility;
mod linearize;
mod long_distance;
mod model;
mod params;
mod semiclassical;

pub use cavity::{build_microscopic, build_symmetric, Cutoffs};
pub use dissipator::{DissipatorTerm, TermForm};
pub use effective::{
    adiabatic_violations, build_cooling, build_effective_n, effective_rates_approx,
    effective_rates_exact, EffectiveRates,
};
pub use feasibility::{check_strong_coupling, FeasibilityReport, FeasibilityTerm, DEFAULT_MARGIN};
pub use linearize::{linearize_optomech, Linearization, LINEARIZE_MAX_ITER};
pub use long_distance::{build_long_distance, LongDistanceMode};
pub use model::LindbladModel;
pub use params::{CoolingParams, LongDistanceParams, PhysicalParams};
pub use semiclassical::build_semiclassical;
