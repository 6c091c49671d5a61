//! Error type shared by every module of the crate.

use alloc::string::String;

use crate::symfunc::SymmetricFunction;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A symmetric function was given no values at all.
    #[error("a symmetric function needs at least one value")]
    EmptyFunction,
    /// A function value (or an edge weight) was negative.
    #[error("negative value {value} at index {index}")]
    NegativeValue {
        /// Position of the offending value.
        index: usize,
        /// The value, formatted as a fraction.
        value: String,
    },
    /// Two arities that must agree do not.
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch {
        /// Required arity.
        expected: usize,
        /// Actual arity.
        found: usize,
    },
    /// The operation needs a function of positive arity.
    #[error("operation requires arity >= 1")]
    ZeroArity,
    /// Pinning more inputs than the function has.
    #[error("cannot pin {zeros} zeros and {ones} ones on a function of arity {arity}")]
    InvalidPinning {
        /// Inputs pinned to 0.
        zeros: usize,
        /// Inputs pinned to 1.
        ones: usize,
        /// Arity of the function being pinned.
        arity: usize,
    },
    /// `build_A` called with `m = 0`.
    #[error("matrix order m must be at least 1")]
    InvalidMatrixOrder,
    /// A vector length does not fit the system it is used with.
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch {
        /// Required length.
        expected: usize,
        /// Actual length.
        found: usize,
    },
    /// An operation that requires even (or odd) `m` got the other parity.
    #[error("m = {m} has the wrong parity for this operation")]
    WrongParity {
        /// The offending order.
        m: usize,
    },
    /// The odd-arity vector does not have the paired shape the reduction needs.
    #[error("vector does not have the paired shape required by the odd-to-even reduction")]
    NotReducible,
    /// The prefix vector does not come from a palindromic product.
    #[error("G * complement(G) is not palindromic")]
    NotPalindromic,
    /// Parameters outside the domain of a closed form or identity.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    /// Witness values were requested for a function that is not windable.
    #[error("function {0} is not windable")]
    NotWindable(SymmetricFunction),
    /// A graph edge joins a vertex to itself.
    #[error("edge {edge} is a self-loop")]
    SelfLoop {
        /// Index of the offending edge.
        edge: usize,
    },
    /// A vertex index is out of range.
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    /// An edge index is out of range.
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    /// A vertex function's arity differs from the vertex degree.
    #[error("vertex {vertex} has degree {degree} but its function has arity {arity}")]
    DegreeMismatch {
        /// The vertex.
        vertex: usize,
        /// Its degree.
        degree: usize,
        /// Arity of its function.
        arity: usize,
    },
    /// Exhaustive enumeration would exceed the configured guard.
    #[error("instance too large for enumeration: {half_edges} half-edges (limit {limit})")]
    TooLarge {
        /// Half-edge count of the instance.
        half_edges: usize,
        /// Maximum allowed.
        limit: usize,
    },
    /// The positive-weight state space exceeds the transition-matrix guard.
    #[error("state space has {states} states (limit {limit})")]
    StateSpaceTooLarge {
        /// Number of states found so far.
        states: usize,
        /// Maximum allowed.
        limit: usize,
    },
    /// A state given to the chain is not in the positive-weight part of Omega_0 + Omega_2.
    #[error("invalid chain state: {0}")]
    InvalidState(String),
    /// No positive-weight consistent assignment could be found to start a chain.
    #[error("no positive-weight start state found")]
    NoStartState,
    /// A per-vertex pairing is not a valid pairs-plus-singleton partition.
    #[error("invalid pairing at vertex {vertex}: {reason}")]
    InvalidPartition {
        /// The vertex whose partition is bad.
        vertex: usize,
        /// Why it was rejected.
        reason: String,
    },
    /// A job or counting parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The windability or feasibility pre-check failed.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    /// The requested problem is outside the windable range.
    #[error("unsupported problem: {0}")]
    Unsupported(String),
    /// Every sample drawn for a marginal fell outside Omega_0.
    #[error("all {samples} samples for edge step {step} were in Omega_2; increase burn-in or samples")]
    AllSamplesRejected {
        /// Index of the telescoping step.
        step: usize,
        /// Number of draws made.
        samples: usize,
    },
    /// A majority marginal below the stability floor.
    #[error("marginal estimate {estimate} at edge step {step} fell below the 1/4 floor")]
    UnstableMarginal {
        /// Index of the telescoping step.
        step: usize,
        /// The estimate, formatted as a fraction.
        estimate: String,
    },
}
