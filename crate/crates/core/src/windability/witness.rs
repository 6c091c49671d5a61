use alloc::format;
use alloc::vec::Vec;

use super::report::{is_windable, WindabilityReport};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::symfunc::SymmetricFunction;

/// A partition of a finite set of indices into pairs and at most one
/// singleton. Pairs are stored as `(low, high)` and sorted by `low`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    /// The two-element blocks.
    pub pairs: Vec<(usize, usize)>,
    /// The one-element block, present iff the set has odd size.
    pub singleton: Option<usize>,
}

impl PairPartition {
    /// Builds a partition, normalizing pair orientation and order.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>, singleton: Option<usize>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
        pairs.sort_unstable();
        Self { pairs, singleton }
    }

    /// Every element covered by the partition, ascending.
    pub fn elements(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).chain(self.singleton).collect();
        all.sort_unstable();
        all
    }

    /// Checks that the blocks are disjoint and cover exactly `set`.
    pub fn covers(&self, set: &[usize]) -> bool {
        let mut expected = set.to_vec();
        expected.sort_unstable();
        let elements = self.elements();
        let disjoint = elements.windows(2).all(|w| w[0] != w[1]);
        let singleton_ok = self.singleton.is_some() == (set.len() % 2 == 1);
        disjoint && singleton_ok && elements == expected && self.pairs.iter().all(|&(a, b)| a != b)
    }

    /// Number of pairs whose two ends take different values under `x`.
    pub fn mixed_pairs(&self, x: &[bool]) -> usize {
        self.pairs.iter().filter(|&&(a, b)| x[a] != x[b]).count()
    }
}

/// All partitions of `set` into pairs and at most one singleton, in a
/// fixed order: the smallest remaining element is first made the
/// singleton (when allowed), then paired with each later element.
pub fn enumerate_partitions(set: &[usize]) -> Vec<PairPartition> {
    fn rec(rest: &[usize], singleton_left: bool, pairs: &mut Vec<(usize, usize)>, singleton: Option<usize>, out: &mut Vec<PairPartition>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(PairPartition::new(pairs.iter().copied(), singleton));
            return;
        };
        if singleton_left && rest.len() % 2 == 1 {
            rec(tail, false, pairs, Some(first), out);
        }
        for k in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let partner = remaining.remove(k);
            pairs.push((first, partner));
            rec(&remaining, singleton_left, pairs, singleton, out);
            pairs.pop();
        }
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    rec(&sorted, true, &mut Vec::new(), None, &mut out);
    out
}

/// Witness values `B(x, y, M)` for a windable symmetric function, derived
/// from the 2-decompositions of every pinned `G * complement(G)`.
#[derive(Debug, Clone)]
pub struct Witness {
    function: SymmetricFunction,
    report: Option<WindabilityReport>,
}

impl Witness {
    /// Certifies `f` and keeps the per-pinning class values. Arity-0
    /// functions are trivially windable.
    pub fn new(f: &SymmetricFunction) -> Result<Self> {
        if f.arity() == 0 {
            return Ok(Self { function: f.clone(), report: None });
        }
        let report = is_windable(f)?;
        if !report.is_windable() {
            return Err(Error::NotWindable(f.clone()));
        }
        Ok(Self { function: f.clone(), report: Some(report) })
    }

    /// The certified function.
    pub fn function(&self) -> &SymmetricFunction {
        &self.function
    }

    fn check_lengths(&self, x: &[bool], y: &[bool]) -> Result<()> {
        let d = self.function.arity();
        for v in [x, y] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.len() });
            }
        }
        Ok(())
    }

    /// `B(x, y, M)` for one partition `M` of the positions where `x` and `y`
    /// differ.
    pub fn value(&self, x: &[bool], y: &[bool], partition: &PairPartition) -> Result<Rational> {
        self.check_lengths(x, y)?;
        let disagreement: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
        if !partition.covers(&disagreement) {
            return Err(Error::InvalidPartition {
                vertex: 0,
                reason: format!("{partition:?} does not partition {disagreement:?}"),
            });
        }
        Ok(self.value_unchecked(x, y, disagreement.len(), partition))
    }

    fn value_unchecked(&self, x: &[bool], y: &[bool], disagreements: usize, partition: &PairPartition) -> Rational {
        let ones = x.iter().zip(y).filter(|(a, b)| **a && **b).count();
        if disagreements == 0 {
            let v = self.function.value(ones);
            return v * v;
        }
        let zeros = x.len() - disagreements - ones;
        let record = self
            .report
            .as_ref()
            .and_then(|r| r.record(zeros, ones))
            .expect("pinning with positive residual arity is always recorded");
        record.solution[partition.mixed_pairs(x)].clone()
    }

    /// Every `(M, B(x, y, M))` for `M` over the partitions of the
    /// disagreement set, in [`enumerate_partitions`] order.
    pub fn values(&self, x: &[bool], y: &[bool]) -> Result<Vec<(PairPartition, Rational)>> {
        self.check_lengths(x, y)?;
        let disagreement: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
        Ok(enumerate_partitions(&disagreement)
            .into_iter()
            .map(|p| {
                let v = self.value_unchecked(x, y, disagreement.len(), &p);
                (p, v)
            })
            .collect())
    }
}

/// Convenience wrapper: certify `f` and return all `B(x, y, M)`.
pub fn witness_b(f: &SymmetricFunction, x: &[bool], y: &[bool]) -> Result<Vec<(PairPartition, Rational)>> {
    Witness::new(f)?.values(x, y)
}
