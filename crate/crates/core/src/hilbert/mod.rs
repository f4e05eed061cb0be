//! State spaces and dense operators.
//!
//! A [`SpaceSpec`] is an ordered list of tensor factors; an [`Operator`] is a
//! dense matrix tagged with the space it acts on. Products and sums check that
//! both operands live on the same space.

mod collective;
mod fock;
mod microscopic;
mod operator;
mod space;

pub use collective::{collective_lowering, CollectiveBasis, CollectiveLabel, LadderBranch};
pub use fock::{annihilation_op, creation_op, fock_space, number_op};
pub use microscopic::{
    microscopic_basis, AtomLevel, MicroscopicBasis, SymmetricEmbedding,
};
pub use operator::Operator;
pub use space::{dimension_cap, two_level_space, Factor, FactorKind, SpaceSpec, DEFAULT_DIMENSION_CAP};
