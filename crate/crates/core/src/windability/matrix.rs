use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{binomial, double_factorial, factorial, Rational};

/// The lower-triangular pairing-count matrix `A_m` of size
/// `(n+1) x (n+1)`, `n = floor(m/2)`.
///
/// Entry `(i, j)` counts the ways to split `m` labelled balls, `i` of them
/// red, into pairs plus (for odd `m`) one singleton so that exactly `j`
/// pairs are mixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatrix {
    m: usize,
    entries: Vec<Vec<BigInt>>,
}

impl PartitionMatrix {
    /// The order `m` the matrix was built for.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `floor(m/2)`; the matrix has `n + 1` rows.
    pub fn n(&self) -> usize {
        self.m / 2
    }

    /// Number of rows (and columns).
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    /// All rows.
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Multiplies `A * x`.
    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: x.len() });
        }
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, xi)| acc + xi * Rational::from_integer(a.clone()))
            })
            .collect())
    }
}

/// Builds `A_m` from the closed-form pairing counts.
///
/// Even `m = 2n`:
/// `a_ij = C(i,j) C(2n-i,j) j! (i-j-1)!! (2n-i-j-1)!!` when `i = j (mod 2)`, else 0.
///
/// Odd `m = 2n+1`:
/// `a_ij = C(i,j) C(2n+1-i,j) j! (i-j-1)!! (2n+1-i-j)!!` when `i = j (mod 2)`,
/// `a_ij = C(i,j) C(2n+1-i,j) j! (i-j)!! (2n-i-j)!!` otherwise (the singleton is red).
pub fn build_a(m: usize) -> Result<PartitionMatrix> {
    if m == 0 {
        return Err(Error::InvalidMatrixOrder);
    }
    let n = (m / 2) as i64;
    let mi = m as i64;
    let entries = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    if j > i {
                        return BigInt::zero();
                    }
                    let base = binomial(i, j) * binomial(mi - i, j) * factorial(j as u64);
                    let same_parity = (i - j) % 2 == 0;
                    match (m.is_multiple_of(2), same_parity) {
                        (true, true) => base * double_factorial(i - j - 1) * double_factorial(mi - i - j - 1),
                        (true, false) => BigInt::zero(),
                        (false, true) => base * double_factorial(i - j - 1) * double_factorial(mi - i - j),
                        (false, false) => base * double_factorial(i - j) * double_factorial(mi - 1 - i - j),
                    }
                })
                .collect()
        })
        .collect();
    Ok(PartitionMatrix { m, entries })
}

/// Unique solution of `A x = h` by forward substitution.
pub fn solve_triangular(a: &PartitionMatrix, h: &[Rational]) -> Result<Vec<Rational>> {
    if h.len() != a.size() {
        return Err(Error::DimensionMismatch { expected: a.size(), found: h.len() });
    }
    let mut x: Vec<Rational> = Vec::with_capacity(h.len());
    for (i, hi) in h.iter().enumerate() {
        let row = &a.entries[i];
        let mut rhs = hi.clone();
        for (j, xj) in x.iter().enumerate() {
            if !row[j].is_zero() && !xj.is_zero() {
                rhs -= xj * Rational::from_integer(row[j].clone());
            }
        }
        x.push(rhs / Rational::from_integer(row[i].clone()));
    }
    Ok(x)
}

/// Checks `a_ij = a'_{i,j-1} + a'_ij = a'_{i-1,j-1} + a'_{i-1,j}` between
/// `A_{2n}` and `A'= A_{2n-1}` for every `i = j (mod 2)`. Entries outside
/// `A'` read as zero; row 0 uses only the first form and row `n` only the
/// second.
pub fn parity_relation_holds(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidMatrixOrder);
    }
    let a = build_a(2 * n)?;
    let ap = build_a(2 * n - 1)?;
    let at = |i: isize, j: isize| -> BigInt {
        if i < 0 || j < 0 || j > i || i as usize >= ap.size() {
            BigInt::zero()
        } else {
            ap.entry(i as usize, j as usize).clone()
        }
    };
    for i in 0..=n {
        for j in (0..=i).filter(|j| (i + j) % 2 == 0) {
            let (ii, jj) = (i as isize, j as isize);
            let lhs = a.entry(i, j);
            if i < n && *lhs != at(ii, jj - 1) + at(ii, jj) {
                return Ok(false);
            }
            if i > 0 && *lhs != at(ii - 1, jj - 1) + at(ii - 1, jj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
