use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::matrix::{build_a, solve_triangular, PartitionMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Nonnegative class values `D_0..D_n` of a 2-decomposition.
///
/// `D_k` is the common value of `D(x, M)` over every pair `(x, M)` where
/// exactly `k` pairs of `M` are split by `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDecomposition {
    /// Arity of the decomposed function.
    pub m: usize,
    /// Class values, one per mixed-pair count.
    pub d_values: Vec<Rational>,
}

/// Which of the two odd/even reduction shapes a vector has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Only even positions of the even-arity vector are nonzero.
    Even,
    /// Only odd positions of the even-arity vector are nonzero.
    Odd,
}

/// Decides 2-decomposability of the palindromic function whose prefix is
/// `h`, using a prebuilt matrix.
pub fn decompose_with(a: &PartitionMatrix, h: &[Rational]) -> Result<Option<TwoDecomposition>> {
    let x = solve_triangular(a, h)?;
    if x.iter().any(Signed::is_negative) {
        Ok(None)
    } else {
        Ok(Some(TwoDecomposition { m: a.m(), d_values: x }))
    }
}

/// `Some` with the class values when `A_m x = h` has a nonnegative
/// solution. `None` is a proof that no 2-decomposition exists.
pub fn is_2_decomposable(h: &[Rational], m: usize) -> Result<Option<TwoDecomposition>> {
    let a = build_a(m)?;
    decompose_with(&a, h)
}

/// Splits `h` (even `m`) into its even-index and odd-index parts.
pub fn parity_split(h: &[Rational], m: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if m % 2 == 1 {
        return Err(Error::WrongParity { m });
    }
    if h.len() != m / 2 + 1 {
        return Err(Error::DimensionMismatch { expected: m / 2 + 1, found: h.len() });
    }
    let mask = |keep: usize| -> Vec<Rational> {
        h.iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == keep { v.clone() } else { Rational::zero() })
            .collect()
    };
    Ok((mask(0), mask(1)))
}

/// Maps an arity-`m` prefix vector (`m = 2n - 1`) to the arity-`2n` vector
/// whose system has a nonnegative solution exactly when the odd one does.
///
/// `Parity::Odd` expects `h'_{2i} = h'_{2i+1}` and yields `h_{2i+1} = h'_{2i}`;
/// `Parity::Even` expects `h'_{2i-1} = h'_{2i}` and yields `h_{2i} = h'_{2i}`
/// (with `h_n = h'_{n-1}` for the final even slot). Vectors without the
/// expected pairing are rejected.
pub fn reduce_odd_to_even(h_odd_m: &[Rational], m: usize, parity: Parity) -> Result<Vec<Rational>> {
    if m.is_multiple_of(2) {
        return Err(Error::WrongParity { m });
    }
    let n = m.div_ceil(2);
    if h_odd_m.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h_odd_m.len() });
    }
    let hp = h_odd_m;
    let mut h = alloc::vec![Rational::zero(); n + 1];
    match parity {
        Parity::Odd => {
            let mut k = 0;
            while k < n {
                if k + 1 < n && hp[k] != hp[k + 1] {
                    return Err(Error::NotReducible);
                }
                h[k + 1] = hp[k].clone();
                k += 2;
            }
        }
        Parity::Even => {
            h[0] = hp[0].clone();
            let mut k = 1;
            while k < n {
                if k + 1 < n && hp[k] != hp[k + 1] {
                    return Err(Error::NotReducible);
                }
                h[k + 1] = hp[k].clone();
                k += 2;
            }
        }
    }
    Ok(h)
}
