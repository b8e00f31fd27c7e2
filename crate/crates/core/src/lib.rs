//! One-shot strategic information design between a sender and a distrustful
//! receiver.
//!
//! The sender (Alice) holds a private reward belief and transmits either the
//! full belief distribution or just its per-choice means; the receiver (Bob)
//! blends the signal with his own prior in proportion to a trust parameter,
//! picks the choice that maximizes his posterior expected reward, and then
//! adjusts his trust once true rewards reveal his regret. This crate provides
//! the belief arithmetic, both signal-design solvers, the receiver's side of
//! the game, and a deterministic Monte Carlo harness for parameter sweeps.
//!
//! All numeric code is generic over the [`scalar::Real`] scalar (`f32` or
//! `f64`); the `*64` aliases below fix the double-precision types used by the
//! harness and the command-line front end.

pub mod error;
pub mod optim;
pub mod receiver;
pub mod scalar;
pub mod sender;
pub mod simplex;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases for the common domain types.
pub type ProbVector64 = simplex::ProbVector<f64>;
pub type RewardGrid64 = simplex::RewardGrid<f64>;
pub type BeliefSet64 = simplex::BeliefSet<f64>;
pub type SolveReport64 = optim::SolveReport<f64>;
pub type Signal64 = sender::Signal<f64>;
pub type ReceiverState64 = receiver::ReceiverState<f64>;
pub type DecisionRule64 = receiver::DecisionRule<f64>;
