//! Windability of symmetric functions.
//!
//! A symmetric `F` is windable iff for every pinning `G` of arity `m >= 1`
//! the lower-triangular system `A_m x = h` has a nonnegative solution, where
//! `h` is the first half of `G(x) G(complement(x))`. Everything here is
//! exact; a verdict is a certificate, not an estimate.

mod closed_form;
mod decompose;
mod matrix;
mod report;
mod witness;

pub use closed_form::{
    closed_form_edge_cover, closed_form_even_part, closed_form_odd_part, com_identity_sum, verify_com_identity,
};
pub use decompose::{decompose_with, is_2_decomposable, parity_split, reduce_odd_to_even, Parity, TwoDecomposition};
pub use matrix::{build_a, parity_relation_holds, solve_triangular, PartitionMatrix};
pub use report::{is_windable, PinningRecord, Verdict, WindabilityReport};
pub use witness::{enumerate_partitions, witness_b, PairPartition, Witness};
