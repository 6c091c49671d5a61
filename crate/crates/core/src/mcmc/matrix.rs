use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::holant::{Assignment, HolantInstance, ENUMERATION_LIMIT};
use crate::rational::{to_f64, Rational};

/// Largest state space [`transition_matrix`] will build.
pub const STATE_LIMIT: usize = 4096;

/// The exact lazy kernel over the positive-weight states of
/// `Omega_0 + Omega_2`, stored as sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    half_edges: usize,
    states: Vec<Assignment>,
    weights: Vec<Rational>,
    disagreements: Vec<usize>,
    rows: Vec<Vec<(usize, Rational)>>,
    index: BTreeMap<u64, usize>,
}

impl TransitionMatrix {
    /// Number of states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when there are no positive-weight states.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Enumerated states, in increasing mask order.
    pub fn states(&self) -> &[Assignment] {
        &self.states
    }

    /// `w(sigma)` per state.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Inconsistent-edge count per state.
    pub fn disagreements(&self) -> &[usize] {
        &self.disagreements
    }

    /// Nonzero entries of row `i`, including the diagonal, by column.
    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    /// `P(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Index of a state, if it is in the state space.
    pub fn index_of(&self, a: &Assignment) -> Option<usize> {
        if a.len() != self.half_edges {
            return None;
        }
        self.index.get(&a.to_mask()).copied()
    }

    /// `Z_0 + Z_2`.
    pub fn normalizer(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    /// `mu(sigma) = w(sigma) / (Z_0 + Z_2)`.
    pub fn stationary(&self) -> Vec<Rational> {
        let z = self.normalizer();
        self.weights.iter().map(|w| w / &z).collect()
    }

    /// `mu(Omega_0)`.
    pub fn omega0_mass(&self) -> Rational {
        let z = self.normalizer();
        let z0 = self
            .weights
            .iter()
            .zip(&self.disagreements)
            .filter(|(_, &d)| d == 0)
            .fold(Rational::zero(), |acc, (w, _)| acc + w);
        z0 / z
    }

    /// True when every row sums to exactly 1.
    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().all(|r| r.iter().fold(Rational::zero(), |acc, (_, p)| acc + p).is_one())
    }

    /// Smallest diagonal entry.
    pub fn min_diagonal(&self) -> Option<Rational> {
        (0..self.len()).map(|i| self.entry(i, i)).min()
    }

    /// `mu^T P`.
    pub fn left_multiply(&self, mu: &[Rational]) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            if mu[i].is_zero() {
                continue;
            }
            for (j, p) in row {
                out[*j] += &mu[i] * p;
            }
        }
        out
    }

    /// `mu^T P == mu^T` exactly.
    pub fn is_stationary(&self, mu: &[Rational]) -> bool {
        mu.len() == self.len() && self.left_multiply(mu) == mu
    }

    /// First pair violating `mu(i) P(i, j) == mu(j) P(j, i)`, if any.
    pub fn detailed_balance_violation(&self, mu: &[Rational]) -> Option<(usize, usize)> {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row {
                if &mu[i] * p != &mu[*j] * self.entry(*j, i) {
                    return Some((i, *j));
                }
            }
        }
        None
    }

    /// True when the transition graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        // reversible kernel: the support is symmetric, so one traversal suffices
        let mut seen = alloc::vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for (j, _) in &self.rows[i] {
                if !seen[*j] {
                    seen[*j] = true;
                    queue.push_back(*j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `||P^t(start, .) - mu||_TV` for `t = 0..=t_max`, exactly.
    pub fn tv_curve(&self, start: usize, t_max: usize) -> Vec<Rational> {
        // P = Q / d with Q integral, so P^t(start, .) = u_t / d^t
        let d = self
            .rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
        let q: Vec<Vec<(usize, BigInt)>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, p)| (*j, p.numer() * (&d / p.denom()))).collect())
            .collect();
        let mu = self.stationary();
        let c = mu.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
        let a: Vec<BigInt> = mu.iter().map(|m| m.numer() * (&c / m.denom())).collect();
        let mut u = alloc::vec![BigInt::zero(); self.len()];
        u[start] = BigInt::one();
        let mut scale = BigInt::one();
        let mut curve = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            if t > 0 {
                let mut next = alloc::vec![BigInt::zero(); self.len()];
                for (i, ui) in u.iter().enumerate() {
                    if ui.is_zero() {
                        continue;
                    }
                    for (j, qij) in &q[i] {
                        next[*j] += ui * qij;
                    }
                }
                u = next;
                scale *= &d;
            }
            let diff: BigInt = u.iter().zip(&a).map(|(ui, ai)| (ui * &c - ai * &scale).abs()).sum();
            curve.push(Rational::new(diff, BigInt::from(2) * &c * &scale));
        }
        curve
    }

    /// `(1/2) mu(start)^(-1/2) exp(-t mu(Omega_0)^2 / n^4)`, `n` the
    /// half-edge count.
    pub fn mixing_bound(&self, start: usize, t: usize) -> f64 {
        let mu = to_f64(&(&self.weights[start] / self.normalizer()));
        let mass = to_f64(&self.omega0_mass());
        let n = self.half_edges as f64;
        0.5 / libm::sqrt(mu) * libm::exp(-(t as f64) * mass * mass / (n * n * n * n))
    }
}

/// Builds the exact kernel: each unordered pair of distinct half-edges is
/// proposed with probability `2 / n^2`, accepted with
/// `min(1, w(pi) / w(sigma))` when `pi` is a state, and the result is
/// lazified.
pub fn transition_matrix(inst: &HolantInstance) -> Result<TransitionMatrix> {
    let n = inst.num_half_edges();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { half_edges: n, limit: ENUMERATION_LIMIT });
    }
    let vertex_masks: Vec<u64> =
        (0..inst.num_vertices()).map(|v| inst.incident(v).iter().fold(0u64, |m, &h| m | 1 << h)).collect();
    let even_bits = (0..inst.num_edges()).fold(0u64, |m, e| m | 1 << (2 * e));
    let mut masks = Vec::new();
    let mut weights = Vec::new();
    let mut disagreements = Vec::new();
    'outer: for mask in 0..1u64 << n {
        let d = ((mask ^ (mask >> 1)) & even_bits).count_ones() as usize;
        if d != 0 && d != 2 {
            continue;
        }
        let mut w = Rational::one();
        for (v, &vm) in vertex_masks.iter().enumerate() {
            let value = inst.function(v).value((mask & vm).count_ones() as usize);
            if value.is_zero() {
                continue 'outer;
            }
            w *= value;
        }
        if masks.len() == STATE_LIMIT {
            return Err(Error::StateSpaceTooLarge { states: masks.len() + 1, limit: STATE_LIMIT });
        }
        masks.push(mask);
        weights.push(w);
        disagreements.push(d);
    }
    let index: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let proposal = Rational::new(BigInt::one(), BigInt::from(n * n));
    let mut rows = Vec::with_capacity(masks.len());
    for (i, &mask) in masks.iter().enumerate() {
        let mut row: Vec<(usize, Rational)> = Vec::new();
        let mut off = Rational::zero();
        for a in 0..n {
            for b in a + 1..n {
                let Some(&j) = index.get(&(mask ^ (1 << a) ^ (1 << b))) else { continue };
                let ratio = &weights[j] / &weights[i];
                let accept = if ratio > Rational::one() { Rational::one() } else { ratio };
                // half of 2/n^2 * min(1, ratio), after lazification
                let p = &proposal * accept;
                off += &p;
                row.push((j, p));
            }
        }
        row.push((i, Rational::one() - off));
        row.sort_by_key(|(j, _)| *j);
        rows.push(row);
    }
    let states = masks.iter().map(|&m| Assignment::from_mask(m, n)).collect();
    Ok(TransitionMatrix { half_edges: n, states, weights, disagreements, rows, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holant::brute_strata;
    use crate::rational::frac;
    use crate::symfunc::NamedFunction;

    fn triangle(kind: NamedFunction) -> HolantInstance {
        HolantInstance::with_named(3, alloc::vec![(0, 1), (1, 2), (2, 0)], &kind).unwrap()
    }

    #[test]
    fn triangle_matching_kernel() {
        let inst = triangle(NamedFunction::AtMost(1));
        let p = transition_matrix(&inst).unwrap();
        let strata = brute_strata(&inst).unwrap();
        assert_eq!(p.normalizer(), &strata[0] + &strata[2]);
        assert!(p.is_stochastic());
        assert!(p.min_diagonal().unwrap() >= frac(1, 2));
        let mu = p.stationary();
        assert!(p.is_stationary(&mu));
        assert_eq!(p.detailed_balance_violation(&mu), None);
        assert!(p.is_irreducible());
    }

    #[test]
    fn tv_curve_is_monotone_and_bounded() {
        let inst = triangle(NamedFunction::AtLeast(1));
        let p = transition_matrix(&inst).unwrap();
        let start = p.index_of(&Assignment::ones(6)).unwrap();
        let curve = p.tv_curve(start, 40);
        assert_eq!(curve[0], Rational::one() - &p.stationary()[start]);
        for w in curve.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for (t, tv) in curve.iter().enumerate() {
            assert!(to_f64(tv) <= p.mixing_bound(start, t));
        }
    }

    #[test]
    fn limits() {
        let big = HolantInstance::with_named(2, alloc::vec![(0, 1); 14], &NamedFunction::AtMost(1)).unwrap();
        assert!(matches!(transition_matrix(&big), Err(Error::TooLarge { .. })));
    }
}
