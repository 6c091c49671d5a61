//! The lazy Metropolis chain on `Omega_0 + Omega_2`, exact kernel
//! diagnostics for small instances, and canonical paths.
//!
//! With `n` half-edges, a non-lazy move proposes each unordered pair of
//! distinct half-edges with probability `2 / n^2`, flips both bits and
//! accepts with `min(1, w(pi) / w(sigma))` if the result is a
//! positive-weight state with 0 or 2 inconsistent edges. The chain holds
//! with probability 1/2 before every move. Its stationary law is
//! `mu(sigma) = w(sigma) / (Z_0 + Z_2)`.

mod chain;
mod matrix;
mod path;

pub use chain::{default_burn_in, omega0_lower_bound, sample, start_state, step, Chain, ChainState};
pub use matrix::{transition_matrix, TransitionMatrix, STATE_LIMIT};
pub use path::{canonical_path, CanonicalPath, PathBuilder};
