//! Core kernel for deciding steering paradoxes of the form `k_Q = (1+delta_k)_C`.
//!
//! Alice and Bob share a small multipartite state. Alice measures one of `k`
//! complete projective settings on her sites; Bob's side is summarized by the
//! assemblage of unnormalized conditional states. When every conditional state
//! is pure, a local-hidden-state model either exists (no contradiction) or
//! fails with a quantified trace gap. This crate computes the assemblage,
//! audits its physics, and runs that reduction.
//!
//! The crate is `no_std` (with `alloc`): all operations are pure functions on
//! immutable values, so everything here is freely shareable across threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assemblage;
pub mod eigen;
mod error;
pub mod matrix;
pub mod measurements;
pub mod paradox;
pub mod shape;
pub mod states;

pub use error::Error;
pub use matrix::{partial_trace, projector_fidelity, rank_one_decompose, ComplexMatrix, Ket, C64};
pub use shape::SubsystemShape;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Default tolerance driving purity, ray-equality and weight-consistency checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Traces below this are treated as the zero operator (outcome never occurs).
pub const ZERO_TRACE_TOL: f64 = 1e-12;
