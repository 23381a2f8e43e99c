//! Deterministic SIR/SIRQ epidemic simulation, multi-source evidence
//! likelihoods, and recovery of piecewise-constant time-varying rates by
//! minimizing a total-variation-regularized negative log-posterior with an
//! iterated Nelder-Mead search.
//!
//! The numeric core is generic over the scalar type (see [`real::Real`]);
//! the aliases below pin the f64 instantiation used by the command-line
//! tools and the file formats.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod objective;
pub mod observation;
pub mod optimizer;
pub mod real;
pub mod synthesis;

pub use error::{Error, Result};
pub use real::Real;

/// Scalar type used by the command-line tools and the file formats.
pub type Scalar = f64;
pub type State = dynamics::StateVector<Scalar>;
pub type Grid = dynamics::TimeGrid<Scalar>;
pub type RatePath = dynamics::ParameterPath<Scalar>;
pub type Traj = dynamics::Trajectory<Scalar>;
pub type EvidenceSet = observation::Dataset<Scalar>;
