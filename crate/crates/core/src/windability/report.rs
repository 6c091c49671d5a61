use alloc::vec::Vec;

use num_traits::Signed;

use super::matrix::{build_a, solve_triangular, PartitionMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::symfunc::{h_vector, pin, SymmetricFunction};

/// Outcome of a windability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every pinning admits a 2-decomposition.
    Windable,
    /// Some pinning does not.
    NotWindable,
}

/// The linear system checked for one pinning `pin(f, zeros, ones)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinningRecord {
    /// Inputs pinned to 0.
    pub zeros: usize,
    /// Inputs pinned to 1.
    pub ones: usize,
    /// Prefix of `G * complement(G)` for the pinned `G`.
    pub h: Vec<Rational>,
    /// The unique solution of `A_m x = h`, `m` the residual arity.
    pub solution: Vec<Rational>,
    /// Whether `solution >= 0` entrywise.
    pub nonneg: bool,
}

impl PinningRecord {
    /// Residual arity of the pinned function.
    pub fn residual_arity(&self, arity: usize) -> usize {
        arity - self.zeros - self.ones
    }
}

/// Certificate (or refutation) of windability for a symmetric function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindabilityReport {
    /// The function that was checked.
    pub function: SymmetricFunction,
    /// Overall verdict.
    pub verdict: Verdict,
    /// One record per pinning with residual arity >= 1, ordered by
    /// ascending `zeros`, then ascending `ones`.
    pub per_pinning: Vec<PinningRecord>,
    /// `(zeros, ones)` of the first failing pinning in that order.
    pub counterexample: Option<(usize, usize)>,
}

impl WindabilityReport {
    /// True when the verdict is [`Verdict::Windable`].
    pub fn is_windable(&self) -> bool {
        self.verdict == Verdict::Windable
    }

    /// The record for a given pinning, if it was enumerated.
    pub fn record(&self, zeros: usize, ones: usize) -> Option<&PinningRecord> {
        let d = self.function.arity();
        if zeros + ones >= d {
            return None;
        }
        // records are laid out row by row: zeros = z contributes d - z entries
        let offset: usize = (0..zeros).map(|z| d - z).sum();
        self.per_pinning.get(offset + ones)
    }
}

/// Lazily built `A_1 .. A_d`.
pub(crate) struct MatrixCache {
    matrices: Vec<Option<PartitionMatrix>>,
}

impl MatrixCache {
    pub(crate) fn new() -> Self {
        Self { matrices: Vec::new() }
    }

    pub(crate) fn get(&mut self, m: usize) -> Result<&PartitionMatrix> {
        if self.matrices.len() <= m {
            self.matrices.resize(m + 1, None);
        }
        if self.matrices[m].is_none() {
            self.matrices[m] = Some(build_a(m)?);
        }
        Ok(self.matrices[m].as_ref().expect("just built"))
    }
}

/// Checks every pinning of `f` with residual arity `m >= 1`: `f` is
/// windable exactly when each `A_m x = h` has a nonnegative solution.
pub fn is_windable(f: &SymmetricFunction) -> Result<WindabilityReport> {
    let d = f.arity();
    if d == 0 {
        return Err(Error::ZeroArity);
    }
    let mut cache = MatrixCache::new();
    let mut per_pinning = Vec::with_capacity(d * (d + 1) / 2);
    let mut counterexample = None;
    for zeros in 0..d {
        for ones in 0..d - zeros {
            let g = pin(f, zeros, ones)?;
            let h = h_vector(&g)?;
            let solution = solve_triangular(cache.get(g.arity())?, &h)?;
            let nonneg = !solution.iter().any(Signed::is_negative);
            if !nonneg && counterexample.is_none() {
                counterexample = Some((zeros, ones));
            }
            per_pinning.push(PinningRecord { zeros, ones, h, solution, nonneg });
        }
    }
    let verdict = if counterexample.is_none() { Verdict::Windable } else { Verdict::NotWindable };
    Ok(WindabilityReport { function: f.clone(), verdict, per_pinning, counterexample })
}
