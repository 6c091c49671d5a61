use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::holant::{brute_strata, disagreement, weight, Assignment, HolantInstance};
use crate::rational::Rational;
use crate::symfunc::SymmetricFunction;
use crate::windability::{enumerate_partitions, PairPartition, Witness};

/// A weighted path of chain moves from `sigma` to `pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPath {
    /// `sigma = states[0], ..., states[t] = pi`.
    pub states: Vec<Assignment>,
    /// `flip_pairs[k]` is the pair of half-edges flipped between
    /// `states[k]` and `states[k + 1]`.
    pub flip_pairs: Vec<(usize, usize)>,
    /// `prod_v B_v / (Z_0 + Z_2)^2`.
    pub weight: Rational,
}

/// Builds canonical paths for one instance, caching witnesses per distinct
/// vertex function and the normalizer `Z_0 + Z_2`.
#[derive(Debug, Clone)]
pub struct PathBuilder<'a> {
    inst: &'a HolantInstance,
    witness_of: Vec<usize>,
    witnesses: Vec<Witness>,
    normalizer: Rational,
}

impl<'a> PathBuilder<'a> {
    /// Certifies every vertex function and computes `Z_0 + Z_2` by
    /// enumeration.
    pub fn new(inst: &'a HolantInstance) -> Result<Self> {
        let strata = brute_strata(inst)?;
        let z = strata.iter().step_by(2).take(2).fold(Rational::zero(), |acc, s| acc + s);
        Self::with_normalizer(inst, z)
    }

    /// As [`PathBuilder::new`] with a known `Z_0 + Z_2`.
    pub fn with_normalizer(inst: &'a HolantInstance, normalizer: Rational) -> Result<Self> {
        let mut distinct: Vec<&SymmetricFunction> = Vec::new();
        let mut witnesses = Vec::new();
        let mut witness_of = Vec::with_capacity(inst.num_vertices());
        for f in inst.functions() {
            let k = match distinct.iter().position(|g| *g == f) {
                Some(k) => k,
                None => {
                    witnesses.push(Witness::new(f)?);
                    distinct.push(f);
                    distinct.len() - 1
                }
            };
            witness_of.push(k);
        }
        Ok(Self { inst, witness_of, witnesses, normalizer })
    }

    /// `Z_0 + Z_2`.
    pub fn normalizer(&self) -> &Rational {
        &self.normalizer
    }

    /// `mu(sigma)`.
    pub fn mu(&self, a: &Assignment) -> Result<Rational> {
        Ok(weight(self.inst, a)? / &self.normalizer)
    }

    fn check_endpoints(&self, sigma: &Assignment, pi: &Assignment) -> Result<()> {
        if disagreement(self.inst, sigma)? != 0 {
            return Err(Error::InvalidState("sigma must be consistent".into()));
        }
        let d = disagreement(self.inst, pi)?;
        if d != 0 && d != 2 {
            return Err(Error::InvalidState(format!("pi has {d} inconsistent edges")));
        }
        Ok(())
    }

    fn disagreeing_at(&self, sigma: &Assignment, pi: &Assignment, v: usize) -> Vec<usize> {
        self.inst.incident(v).iter().copied().filter(|&h| sigma.get(h) != pi.get(h)).collect()
    }

    /// Every valid per-vertex partition of the half-edges where `sigma` and
    /// `pi` differ, one list per vertex.
    pub fn pairing_choices(&self, sigma: &Assignment, pi: &Assignment) -> Result<Vec<Vec<PairPartition>>> {
        self.check_endpoints(sigma, pi)?;
        Ok((0..self.inst.num_vertices()).map(|v| enumerate_partitions(&self.disagreeing_at(sigma, pi, v))).collect())
    }

    /// The canonical path for one choice of per-vertex partitions, given in
    /// global half-edge indices.
    pub fn path(&self, sigma: &Assignment, pi: &Assignment, pairings: &[PairPartition]) -> Result<CanonicalPath> {
        self.check_endpoints(sigma, pi)?;
        let inst = self.inst;
        if pairings.len() != inst.num_vertices() {
            return Err(Error::DimensionMismatch { expected: inst.num_vertices(), found: pairings.len() });
        }
        let n = inst.num_half_edges();
        let mut weight = Rational::one();
        let mut partner = alloc::vec![usize::MAX; n];
        let mut singletons = Vec::new();
        for (v, m) in pairings.iter().enumerate() {
            let z_v = self.disagreeing_at(sigma, pi, v);
            if !m.covers(&z_v) {
                return Err(Error::InvalidPartition { vertex: v, reason: format!("{m:?} does not partition {z_v:?}") });
            }
            for &(a, b) in &m.pairs {
                partner[a] = b;
                partner[b] = a;
            }
            singletons.extend(m.singleton);
            let local = |h: usize| inst.incident(v).iter().position(|&g| g == h).expect("incident half-edge");
            let x = inst.local_bits(sigma, v);
            let y = inst.local_bits(pi, v);
            let local_m = PairPartition::new(m.pairs.iter().map(|&(a, b)| (local(a), local(b))), m.singleton.map(local));
            weight *= self.witnesses[self.witness_of[v]].value(&x, &y, &local_m)?;
        }
        weight /= &self.normalizer;
        weight /= &self.normalizer;
        singletons.sort_unstable();
        for pair in singletons.chunks(2) {
            let [a, b] = pair else {
                return Err(Error::InvalidPartition { vertex: 0, reason: "odd number of singletons".into() });
            };
            partner[*a] = *b;
            partner[*b] = *a;
        }

        let in_z = |h: usize| sigma.get(h) != pi.get(h);
        let link = |h: usize| if in_z(h ^ 1) { Some(h ^ 1) } else { None };
        let mut visited = alloc::vec![false; n];
        let mut flip_pairs = Vec::new();
        let walk = |start: usize, visited: &mut Vec<bool>, flip_pairs: &mut Vec<(usize, usize)>| {
            let mut cur = start;
            loop {
                let p = partner[cur];
                visited[cur] = true;
                visited[p] = true;
                flip_pairs.push((cur, p));
                match link(p) {
                    Some(next) if next != start => cur = next,
                    _ => break,
                }
            }
        };
        if let Some(start) = (0..n).find(|&h| in_z(h) && link(h).is_none()) {
            walk(start, &mut visited, &mut flip_pairs);
        }
        while let Some(start) = (0..n).find(|&h| in_z(h) && !visited[h]) {
            walk(start, &mut visited, &mut flip_pairs);
        }

        let mut states = Vec::with_capacity(flip_pairs.len() + 1);
        let mut cur = sigma.clone();
        states.push(cur.clone());
        for &(a, b) in &flip_pairs {
            cur.flip(a);
            cur.flip(b);
            states.push(cur.clone());
        }
        debug_assert_eq!(&cur, pi);
        Ok(CanonicalPath { states, flip_pairs, weight })
    }

    /// Paths for every tuple of per-vertex partitions.
    pub fn all_paths(&self, sigma: &Assignment, pi: &Assignment) -> Result<Vec<CanonicalPath>> {
        let choices = self.pairing_choices(sigma, pi)?;
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; choices.len()];
        loop {
            let tuple: Vec<PairPartition> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            out.push(self.path(sigma, pi, &tuple)?);
            // odometer over the cartesian product
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Sum of path weights over all partition tuples.
    pub fn total_flow(&self, sigma: &Assignment, pi: &Assignment) -> Result<Rational> {
        Ok(self.all_paths(sigma, pi)?.into_iter().fold(Rational::zero(), |acc, p| acc + p.weight))
    }
}

/// One canonical path; see [`PathBuilder::path`].
pub fn canonical_path(
    inst: &HolantInstance,
    sigma: &Assignment,
    pi: &Assignment,
    per_vertex_pairings: &[PairPartition],
) -> Result<CanonicalPath> {
    PathBuilder::new(inst)?.path(sigma, pi, per_vertex_pairings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::NamedFunction;

    fn triangle(kind: NamedFunction) -> HolantInstance {
        HolantInstance::with_named(3, alloc::vec![(0, 1), (1, 2), (2, 0)], &kind).unwrap()
    }

    fn bits(v: &[u8]) -> Assignment {
        Assignment::new(v.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn trivial_path() {
        let inst = triangle(NamedFunction::AtMost(1));
        let builder = PathBuilder::new(&inst).unwrap();
        let sigma = Assignment::zeros(6);
        let empty = alloc::vec![PairPartition::new([], None); 3];
        let path = builder.path(&sigma, &sigma, &empty).unwrap();
        assert!(path.flip_pairs.is_empty());
        assert_eq!(path.states, core::slice::from_ref(&sigma));
        let mu = builder.mu(&sigma).unwrap();
        assert_eq!(path.weight, &mu * &mu);
    }

    #[test]
    fn cycle_through_triangle() {
        // sigma = empty matching, pi = edge 0 taken; vertex 0 sees only half-edge 0
        let inst = triangle(NamedFunction::AtMost(2));
        let builder = PathBuilder::new(&inst).unwrap();
        let sigma = Assignment::zeros(6);
        let pi = bits(&[1, 1, 1, 1, 1, 1]);
        for path in builder.all_paths(&sigma, &pi).unwrap() {
            assert_eq!(path.states.first(), Some(&sigma));
            assert_eq!(path.states.last(), Some(&pi));
            for w in path.states.windows(2) {
                assert_eq!(w[0].hamming(&w[1]), 2);
            }
        }
        let flow = builder.total_flow(&sigma, &pi).unwrap();
        assert_eq!(flow, builder.mu(&sigma).unwrap() * builder.mu(&pi).unwrap());
    }

    #[test]
    fn path_into_omega2() {
        let inst = HolantInstance::with_named(3, alloc::vec![(0, 1), (1, 2)], &NamedFunction::AtMost(1)).unwrap();
        let builder = PathBuilder::new(&inst).unwrap();
        let sigma = Assignment::zeros(4);
        let pi = bits(&[1, 0, 0, 1]);
        let paths = builder.all_paths(&sigma, &pi).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].flip_pairs, [(0, 3)]);
        assert_eq!(builder.total_flow(&sigma, &pi).unwrap(), builder.mu(&sigma).unwrap() * builder.mu(&pi).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let inst = triangle(NamedFunction::AtMost(1));
        let builder = PathBuilder::new(&inst).unwrap();
        let sigma = Assignment::zeros(6);
        let pi = bits(&[1, 1, 0, 0, 0, 0]);
        let wrong = alloc::vec![PairPartition::new([], None); 3];
        assert!(matches!(builder.path(&sigma, &pi, &wrong), Err(Error::InvalidPartition { .. })));
        assert!(matches!(builder.path(&bits(&[1, 0, 0, 0, 0, 0]), &sigma, &wrong), Err(Error::InvalidState(_))));
        let unwindable = HolantInstance::with_named(
            2,
            alloc::vec![(0, 1); 11],
            &NamedFunction::AtLeast(3),
        )
        .unwrap();
        assert!(PathBuilder::with_normalizer(&unwindable, Rational::one()).is_err());
    }
}
