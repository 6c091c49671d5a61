//! Standard-library companion to `windmill-core`: JSON formats, bundled
//! fixtures, invariant suites, thread-pool helpers and the command line.

#![deny(missing_docs)]

pub mod cli;
pub mod fixtures;
pub mod format;
pub mod parallel;
pub mod suites;
