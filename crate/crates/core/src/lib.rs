//! Equilibria of the quadratic cheap-talk game.
//!
//! An informed encoder observes a source value `M` and sends one of finitely
//! (or countably) many messages; the decoder picks an action. The encoder's
//! target is offset from the decoder's by a bias `b`. Equilibria are interval
//! partitions whose edges satisfy the nearest-neighbor condition against the
//! decoder's centroids.
//!
//! Everything numeric is generic over [`Real`] (implemented for `f32` and
//! `f64`); the `*64` aliases at the crate root are the usual entry points.

pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod exp_solver;
pub mod gauss_solver;
mod scalar;
pub mod sources;
pub mod special_fn;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SourceModel64 = sources::SourceModel<f64>;
pub type SourceModel32 = sources::SourceModel<f32>;
pub type Partition64 = equilibrium::Partition<f64>;
pub type Partition32 = equilibrium::Partition<f32>;
pub type ActionProfile64 = equilibrium::ActionProfile<f64>;
pub type Certificate64 = equilibrium::EquilibriumCertificate<f64>;
pub type CostReport64 = equilibrium::CostReport<f64>;
pub type Bracket64 = special_fn::Bracket<f64>;
pub type ExpRecursionState64 = exp_solver::ExpRecursionState<f64>;
pub type TruncatedLadder64 = gauss_solver::TruncatedLadder<f64>;
pub type IterationTrace64 = dynamics::IterationTrace<f64>;
