use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::holant::{disagreement, weight, Assignment, HolantInstance};
use crate::rational::{to_f64, Rational};

/// A state of the chain together with its cached weight and disagreement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainState {
    assignment: Assignment,
    cached_weight: Rational,
    cached_disagreement: usize,
}

impl ChainState {
    /// Validates that `assignment` lies in the positive-weight part of
    /// `Omega_0 + Omega_2`.
    pub fn new(inst: &HolantInstance, assignment: Assignment) -> Result<Self> {
        let d = disagreement(inst, &assignment)?;
        if d != 0 && d != 2 {
            return Err(Error::InvalidState(alloc::format!("{d} inconsistent edges")));
        }
        let w = weight(inst, &assignment)?;
        if !w.is_positive() {
            return Err(Error::InvalidState("zero weight".into()));
        }
        Ok(Self { assignment, cached_weight: w, cached_disagreement: d })
    }

    /// The assignment.
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// `w(sigma)`, always positive.
    pub fn weight(&self) -> &Rational {
        &self.cached_weight
    }

    /// Number of inconsistent edges, 0 or 2.
    pub fn disagreement(&self) -> usize {
        self.cached_disagreement
    }

    /// Consumes the state.
    pub fn into_assignment(self) -> Assignment {
        self.assignment
    }
}

/// The lazy Metropolis chain, specialised for fast stepping.
///
/// Keeps per-vertex Hamming weights and a float copy of every function
/// table so a step costs O(1); the exact weight is recomputed only on
/// export.
#[derive(Debug, Clone)]
pub struct Chain<'a> {
    inst: &'a HolantInstance,
    bits: Vec<bool>,
    counts: Vec<usize>,
    bad_edges: usize,
    tables: Vec<Vec<f64>>,
    zero: Vec<Vec<bool>>,
    steps: u64,
}

impl<'a> Chain<'a> {
    /// Starts from a validated state.
    pub fn new(inst: &'a HolantInstance, start: &ChainState) -> Self {
        let bits = start.assignment().bits().to_vec();
        let counts = (0..inst.num_vertices()).map(|v| inst.local_weight(start.assignment(), v)).collect();
        let tables = inst.functions().iter().map(|f| f.values().iter().map(to_f64).collect()).collect();
        let zero = inst.functions().iter().map(|f| f.values().iter().map(Zero::is_zero).collect()).collect();
        Self { inst, bits, counts, bad_edges: start.disagreement(), tables, zero, steps: 0 }
    }

    /// The instance being sampled.
    pub fn instance(&self) -> &'a HolantInstance {
        self.inst
    }

    /// Current bits.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Current number of inconsistent edges.
    pub fn bad_edges(&self) -> usize {
        self.bad_edges
    }

    /// True when the current state is in `Omega_0`.
    pub fn is_consistent(&self) -> bool {
        self.bad_edges == 0
    }

    /// Steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Current assignment.
    pub fn assignment(&self) -> Assignment {
        Assignment::new(self.bits.clone())
    }

    /// Current state with its exact weight.
    pub fn state(&self) -> ChainState {
        let assignment = self.assignment();
        let cached_weight = weight(self.inst, &assignment).expect("chain length matches instance");
        ChainState { assignment, cached_weight, cached_disagreement: self.bad_edges }
    }

    fn edge_bad(&self, e: usize) -> bool {
        self.bits[2 * e] != self.bits[2 * e + 1]
    }

    /// One lazy Metropolis step; returns whether the state moved.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        self.steps += 1;
        let n = self.bits.len();
        if n == 0 || rng.random::<bool>() {
            return false;
        }
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            return false;
        }
        let (ei, ej) = (i / 2, j / 2);
        let mut bad = self.bad_edges as isize;
        if ei != ej {
            for e in [ei, ej] {
                bad += if self.edge_bad(e) { -1 } else { 1 };
            }
        }
        if bad > 2 {
            return false;
        }
        let delta = |b: bool| if b { -1isize } else { 1 };
        let (u, v) = (self.inst.owner(i), self.inst.owner(j));
        let mut ratio = 1.0;
        if u == v {
            let c = self.counts[u] as isize;
            let c2 = (c + delta(self.bits[i]) + delta(self.bits[j])) as usize;
            if self.zero[u][c2] {
                return false;
            }
            ratio *= self.tables[u][c2] / self.tables[u][c as usize];
        } else {
            for (w, h) in [(u, i), (v, j)] {
                let c = self.counts[w];
                let c2 = (c as isize + delta(self.bits[h])) as usize;
                if self.zero[w][c2] {
                    return false;
                }
                ratio *= self.tables[w][c2] / self.tables[w][c];
            }
        }
        if ratio < 1.0 && rng.random::<f64>() >= ratio {
            return false;
        }
        for (w, h) in [(u, i), (v, j)] {
            self.counts[w] = (self.counts[w] as isize + delta(self.bits[h])) as usize;
            self.bits[h] = !self.bits[h];
        }
        self.bad_edges = bad as usize;
        true
    }

    /// Runs `steps` steps.
    pub fn run<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }
}

/// One step of the chain from `state`.
pub fn step<R: Rng + ?Sized>(inst: &HolantInstance, state: &ChainState, rng: &mut R) -> ChainState {
    let mut chain = Chain::new(inst, state);
    if chain.step(rng) {
        chain.state()
    } else {
        state.clone()
    }
}

/// Picks the start state: `start` if given, else all-zeros, else all-ones,
/// whichever first has positive weight.
pub fn start_state(inst: &HolantInstance, start: Option<&Assignment>) -> Result<ChainState> {
    if let Some(a) = start {
        return ChainState::new(inst, a.clone());
    }
    let n = inst.num_half_edges();
    [Assignment::zeros(n), Assignment::ones(n)]
        .into_iter()
        .find_map(|a| ChainState::new(inst, a).ok())
        .ok_or(Error::NoStartState)
}

/// Runs `burn_in` steps from the start state and returns the final
/// assignment.
pub fn sample<R: Rng + ?Sized>(
    inst: &HolantInstance,
    burn_in: u64,
    start: Option<&Assignment>,
    rng: &mut R,
) -> Result<Assignment> {
    let state = start_state(inst, start)?;
    let mut chain = Chain::new(inst, &state);
    chain.run(burn_in, rng);
    Ok(chain.assignment())
}

/// Lower bound `1 / (1 + 4 m^2)` on `mu(Omega_0)`, `m` the edge count,
/// from `Z_2 / Z_0 <= 4 m^2`.
pub fn omega0_lower_bound(edges: usize) -> f64 {
    let m = edges as f64;
    1.0 / (1.0 + 4.0 * m * m)
}

/// Burn-in `ceil(n^4 / mu0^2 * ln(2 / eps_tv))`, `n` the half-edge count
/// and `mu0` a lower bound on `mu(Omega_0)`.
pub fn default_burn_in(half_edges: usize, mu_omega0: f64, eps_tv: f64) -> u64 {
    let n = half_edges as f64;
    let t = n * n * n * n / (mu_omega0 * mu_omega0) * libm::log(2.0 / eps_tv);
    if t.is_finite() && t > 0.0 {
        libm::ceil(t) as u64
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holant::brute_strata;
    use crate::symfunc::NamedFunction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> HolantInstance {
        HolantInstance::with_named(2, alloc::vec![(0, 1)], &NamedFunction::AtMost(1)).unwrap()
    }

    #[test]
    fn zero_burn_in_returns_start() {
        let inst = single_edge();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample(&inst, 0, None, &mut rng).unwrap(), Assignment::zeros(2));
        let ones = Assignment::ones(2);
        assert_eq!(sample(&inst, 0, Some(&ones), &mut rng).unwrap(), ones);
    }

    #[test]
    fn start_falls_back_to_ones() {
        let inst = HolantInstance::with_named(2, alloc::vec![(0, 1)], &NamedFunction::AtLeast(1)).unwrap();
        assert_eq!(start_state(&inst, None).unwrap().assignment(), &Assignment::ones(2));
        let dead = HolantInstance::with_named(2, alloc::vec![(0, 1)], &NamedFunction::Exact(7)).unwrap();
        assert_eq!(start_state(&dead, None), Err(Error::NoStartState));
    }

    #[test]
    fn invalid_states_rejected() {
        let path = HolantInstance::with_named(3, alloc::vec![(0, 1), (1, 2)], &NamedFunction::AtMost(2)).unwrap();
        let odd = Assignment::new(alloc::vec![true, false, false, false]);
        assert!(matches!(ChainState::new(&path, odd), Err(Error::InvalidState(_))));
    }

    #[test]
    fn chain_stays_in_state_space() {
        let inst = HolantInstance::with_named(4, alloc::vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], &NamedFunction::AtMost(1))
            .unwrap();
        let mut chain = Chain::new(&inst, &start_state(&inst, None).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20_000 {
            chain.step(&mut rng);
            let s = chain.state();
            assert!(s.disagreement() == 0 || s.disagreement() == 2);
            assert!(s.weight().is_positive());
            assert_eq!(disagreement(&inst, s.assignment()).unwrap(), chain.bad_edges());
        }
    }

    #[test]
    fn single_edge_frequencies() {
        // Omega_0 = {00, 11}; 01 and 10 have one bad edge and are never visited
        let inst = single_edge();
        let z0 = brute_strata(&inst).unwrap()[0].clone();
        assert_eq!(z0, crate::rational::int(2));
        let mut chain = Chain::new(&inst, &start_state(&inst, None).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0u64; 4];
        let steps = 1_000_000u64;
        for _ in 0..steps {
            chain.step(&mut rng);
            let idx = usize::from(chain.bits()[0]) | usize::from(chain.bits()[1]) << 1;
            counts[idx] += 1;
        }
        assert_eq!(counts[1] + counts[2], 0);
        // two-state chain with switch probability 1/4: lag-1 correlation 1/2
        let se = libm::sqrt(0.25 / steps as f64 * 3.0);
        let freq = counts[0] as f64 / steps as f64;
        assert!((freq - 0.5).abs() < 3.0 * se, "freq {freq}, se {se}");
    }

    #[test]
    fn burn_in_formula() {
        assert_eq!(default_burn_in(2, 1.0, 2.0), 0);
        let t = default_burn_in(4, 0.5, 0.01);
        assert_eq!(t, libm::ceil(256.0 / 0.25 * libm::log(200.0)) as u64);
        assert!((omega0_lower_bound(1) - 0.2).abs() < 1e-12);
    }
}
