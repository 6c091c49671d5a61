//! Exact windability certificates for symmetric constraint functions, Holant
//! partition functions over half-edge assignments, the lazy Metropolis chain
//! on nearly-consistent assignments, and an approximate counter for
//! b-matchings and b-edge-covers built on top of it.
//!
//! Everything that decides windability runs in exact rational arithmetic.
//! Floating point only appears where a probability is drawn or a mixing
//! bound involving `exp` is evaluated.
//!
//! The crate is `no_std` and needs only `alloc`.
#![cfg_attr(not(test), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod counter;
pub mod error;
pub mod holant;
pub mod mcmc;
pub mod rational;
pub mod symfunc;
pub mod windability;

pub use error::{Error, Result};
pub use holant::{Assignment, HolantInstance};
pub use rational::Rational;
pub use symfunc::{NamedFunction, SymmetricFunction};
pub use windability::{PartitionMatrix, PairPartition, TwoDecomposition, Verdict, WindabilityReport};
