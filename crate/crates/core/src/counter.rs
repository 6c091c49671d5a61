//! Approximate counting by self-reducibility.
//!
//! `Z_0` telescopes over the edges: pin edge 0 of the current instance to
//! its majority value `s`, multiply in `p = Pr[edge 0 = s | Omega_0]`, and
//! repeat on the pinned instance until no edges are left. Then
//! `Z_0 = w(final) / prod p`. Marginals come from a [`MarginalOracle`]:
//! the Metropolis chain with rejection of `Omega_2` samples, or exact
//! enumeration.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::holant::{brute_strata, brute_z, pin_edge, weight, weighted_transform, Assignment, HolantInstance};
use crate::mcmc::{default_burn_in, omega0_lower_bound, start_state, Chain};
use crate::rational::{frac, int, Rational};
use crate::symfunc::{NamedFunction, SymmetricFunction};
use crate::windability::{is_windable, Verdict};

/// Largest `b` accepted by [`count_b_matching`].
pub const MAX_MATCHING_B: usize = 7;
/// Largest `b` accepted by [`count_b_edge_cover`].
pub const MAX_EDGE_COVER_B: usize = 2;
/// Instances up to this many half-edges get an exact `Z_2 / Z_0` check.
pub const RATIO_CHECK_LIMIT: usize = 20;

/// Parameters of one counting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountJob {
    /// The instance whose `Z_0` is estimated.
    pub instance: HolantInstance,
    /// Relative error target, positive.
    pub epsilon: Rational,
    /// Failure probability, in `(0, 1)`.
    pub delta: Rational,
    /// Seed; step `k` uses stream `k` of this seed.
    pub seed: u64,
    /// Chain samples drawn per marginal.
    pub samples_per_ratio: usize,
    /// Steps before the first sample of each marginal.
    pub burn_in: u64,
    /// Steps between consecutive samples.
    pub thinning: u64,
}

impl CountJob {
    /// A job with the default sample count and burn-in.
    pub fn new(instance: HolantInstance, epsilon: Rational, delta: Rational, seed: u64) -> Result<Self> {
        check_accuracy(&epsilon, &delta)?;
        let m = instance.num_edges();
        let eps = crate::rational::to_f64(&epsilon);
        let del = crate::rational::to_f64(&delta);
        let samples_per_ratio = default_samples(m, eps, del);
        let mu0 = omega0_lower_bound(m);
        let burn_in = default_burn_in(instance.num_half_edges(), mu0, eps / (4.0 * m.max(1) as f64));
        Ok(Self { instance, epsilon, delta, seed, samples_per_ratio, burn_in, thinning: 1 })
    }

    /// Overrides the sample count.
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples_per_ratio = samples;
        self
    }

    /// Overrides the burn-in.
    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    /// Overrides the thinning interval (at least 1).
    pub fn with_thinning(mut self, thinning: u64) -> Self {
        self.thinning = thinning.max(1);
        self
    }
}

fn check_accuracy(epsilon: &Rational, delta: &Rational) -> Result<()> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `ceil(64 m^2 / eps^2 * ln(4 m / delta))`, at least 1.
pub fn default_samples(edges: usize, epsilon: f64, delta: f64) -> usize {
    let m = edges.max(1) as f64;
    let n = 64.0 * m * m / (epsilon * epsilon) * libm::log(4.0 * m / delta);
    if n.is_finite() && n >= 1.0 {
        libm::ceil(n) as usize
    } else {
        1
    }
}

/// One telescoping factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalRecord {
    /// Index of the pinned edge in the original instance.
    pub edge: usize,
    /// Value the edge was pinned to.
    pub pinned_value: bool,
    /// Estimated `Pr[edge = pinned_value | Omega_0]`.
    pub estimated_p: Rational,
    /// Samples drawn (0 for exact marginals).
    pub samples: usize,
    /// Samples that landed in `Omega_0`.
    pub accepted: usize,
}

/// Result of [`estimate_z0`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountEstimate {
    /// `w(final) / prod p`.
    pub estimate: Rational,
    /// Natural log of the estimate, or `-inf` when it is zero.
    pub log_estimate: f64,
    /// One record per pinned edge, in pinning order.
    pub per_edge_marginals: Vec<MarginalRecord>,
    /// Job seed.
    pub seed: u64,
    /// Chain steps over all marginals.
    pub total_steps: u64,
    /// Fraction of samples discarded for lying in `Omega_2`.
    pub rejected_omega2_fraction: f64,
    /// Relative error target.
    pub epsilon: Rational,
    /// Failure probability.
    pub delta: Rational,
}

/// `ln r` for a positive rational, without overflow.
pub fn ln_rational(r: &Rational) -> f64 {
    if !r.is_positive() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return libm::log(n.to_f64().expect("fits in f64"));
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64 bits");
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// A marginal of edge 0 of the current instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginal {
    /// The majority value.
    pub value: bool,
    /// `Pr[edge 0 = value | Omega_0]`, estimated or exact.
    pub p: Rational,
    /// Samples drawn.
    pub samples: usize,
    /// Samples in `Omega_0`.
    pub accepted: usize,
    /// Chain steps spent.
    pub steps: u64,
    /// A positive-weight consistent assignment of the pinned instance, used
    /// to start the next chain.
    pub carry: Option<Assignment>,
}

/// Source of edge marginals for the telescoping product.
pub trait MarginalOracle {
    /// Marginal of edge 0 of `inst` at telescoping step `step`. `start` is a
    /// consistent positive-weight state of `inst`, when one is known.
    fn marginal(&mut self, inst: &HolantInstance, step: usize, start: Option<&Assignment>) -> Result<Marginal>;
}

/// Exact marginals from `Z_0` of the two pinned instances.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMarginals;

impl MarginalOracle for ExactMarginals {
    fn marginal(&mut self, inst: &HolantInstance, step: usize, _start: Option<&Assignment>) -> Result<Marginal> {
        let z1 = brute_z(&pin_edge(inst, 0, true)?, 0)?;
        let z0 = brute_z(&pin_edge(inst, 0, false)?, 0)?;
        let total = &z0 + &z1;
        if total.is_zero() {
            return Err(Error::PreconditionFailed(format!("Z_0 = 0 at step {step}")));
        }
        let (value, hits) = if z1 > z0 { (true, z1) } else { (false, z0) };
        Ok(Marginal { value, p: hits / total, samples: 0, accepted: 0, steps: 0, carry: None })
    }
}

/// Marginals from the Metropolis chain, discarding `Omega_2` samples.
#[derive(Debug, Clone)]
pub struct McmcMarginals {
    /// Seed; step `k` draws from stream `k`.
    pub seed: u64,
    /// Samples per marginal.
    pub samples: usize,
    /// Steps before the first sample.
    pub burn_in: u64,
    /// Steps between samples.
    pub thinning: u64,
}

impl McmcMarginals {
    /// Oracle matching a job's chain parameters.
    pub fn from_job(job: &CountJob) -> Self {
        Self { seed: job.seed, samples: job.samples_per_ratio, burn_in: job.burn_in, thinning: job.thinning.max(1) }
    }
}

impl MarginalOracle for McmcMarginals {
    fn marginal(&mut self, inst: &HolantInstance, step: usize, start: Option<&Assignment>) -> Result<Marginal> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(step as u64);
        let state = start_state(inst, start)?;
        let mut chain = Chain::new(inst, &state);
        chain.run(self.burn_in, &mut rng);
        let mut hits = [0usize; 2];
        let mut last: [Option<Vec<bool>>; 2] = [None, None];
        for _ in 0..self.samples {
            chain.run(self.thinning, &mut rng);
            if chain.is_consistent() {
                let b = chain.bits()[0];
                hits[usize::from(b)] += 1;
                last[usize::from(b)] = Some(chain.bits().to_vec());
            }
        }
        let accepted = hits[0] + hits[1];
        if accepted == 0 {
            return Err(Error::AllSamplesRejected { step, samples: self.samples });
        }
        let value = hits[1] > hits[0];
        let p = frac(hits[usize::from(value)] as i64, accepted as i64);
        if p < frac(1, 4) {
            return Err(Error::UnstableMarginal { step, estimate: format!("{p}") });
        }
        let carry = last[usize::from(value)].take().map(|bits| Assignment::new(bits).without_edge(0));
        Ok(Marginal { value, p, samples: self.samples, accepted, steps: chain.steps(), carry })
    }
}

/// Outcome of [`check_preconditions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreconditionReport {
    /// Each distinct vertex function, the first vertex carrying it, and its
    /// verdict.
    pub functions: Vec<(SymmetricFunction, usize, Verdict)>,
    /// The default chain start, if one has positive weight.
    pub start: Option<Assignment>,
    /// `(Z_0, Z_2)` for instances small enough to enumerate.
    pub strata: Option<(Rational, Rational)>,
}

impl PreconditionReport {
    /// The first vertex whose function is not windable.
    pub fn offending(&self) -> Option<(usize, &SymmetricFunction)> {
        self.functions.iter().find(|(_, _, v)| *v == Verdict::NotWindable).map(|(f, v, _)| (*v, f))
    }

    /// True when every function is windable and a start state exists.
    pub fn passed(&self) -> bool {
        self.offending().is_none() && self.start.is_some()
    }

    /// Turns a failed report into an error naming the problem.
    pub fn ensure(&self) -> Result<()> {
        if let Some((v, f)) = self.offending() {
            return Err(Error::PreconditionFailed(format!("vertex {v} carries {f}, which is not windable")));
        }
        if self.start.is_none() {
            return Err(Error::NoStartState);
        }
        Ok(())
    }

    /// `Z_2 / Z_0`, when the strata were computed and `Z_0 > 0`.
    pub fn ratio(&self) -> Option<Rational> {
        self.strata.as_ref().filter(|(z0, _)| !z0.is_zero()).map(|(z0, z2)| z2 / z0)
    }
}

/// Certifies every distinct vertex function, looks for a start state and,
/// on small instances, computes `Z_0` and `Z_2`.
pub fn check_preconditions(inst: &HolantInstance) -> Result<PreconditionReport> {
    let mut functions: Vec<(SymmetricFunction, usize, Verdict)> = Vec::new();
    for (v, f) in inst.functions().iter().enumerate() {
        if functions.iter().any(|(g, _, _)| g == f) {
            continue;
        }
        let verdict = if f.arity() == 0 { Verdict::Windable } else { is_windable(f)?.verdict };
        functions.push((f.clone(), v, verdict));
    }
    let start = start_state(inst, None).ok().map(|s| s.into_assignment());
    let strata = if inst.num_half_edges() <= RATIO_CHECK_LIMIT {
        let s = brute_strata(inst)?;
        Some((s[0].clone(), s.get(2).cloned().unwrap_or_else(Rational::zero)))
    } else {
        None
    };
    Ok(PreconditionReport { functions, start, strata })
}

/// Runs the telescoping product with the given marginal oracle.
pub fn estimate_z0_with<O: MarginalOracle + ?Sized>(job: &CountJob, oracle: &mut O) -> Result<CountEstimate> {
    check_accuracy(&job.epsilon, &job.delta)?;
    let mut inst = job.instance.clone();
    let mut product = Rational::one();
    let mut records = Vec::with_capacity(inst.num_edges());
    let mut carry: Option<Assignment> = None;
    let (mut total_steps, mut samples, mut accepted) = (0u64, 0usize, 0usize);
    for step in 0..job.instance.num_edges() {
        let m = oracle.marginal(&inst, step, carry.as_ref())?;
        inst = pin_edge(&inst, 0, m.value)?;
        product *= &m.p;
        total_steps += m.steps;
        samples += m.samples;
        accepted += m.accepted;
        records.push(MarginalRecord {
            edge: step,
            pinned_value: m.value,
            estimated_p: m.p,
            samples: m.samples,
            accepted: m.accepted,
        });
        carry = m.carry;
    }
    let final_weight = weight(&inst, &Assignment::zeros(0))?;
    let estimate = final_weight / product;
    let rejected = if samples == 0 { 0.0 } else { (samples - accepted) as f64 / samples as f64 };
    Ok(CountEstimate {
        log_estimate: ln_rational(&estimate),
        estimate,
        per_edge_marginals: records,
        seed: job.seed,
        total_steps,
        rejected_omega2_fraction: rejected,
        epsilon: job.epsilon.clone(),
        delta: job.delta.clone(),
    })
}

/// Checks preconditions and runs the telescoping product with MCMC
/// marginals.
pub fn estimate_z0(job: &CountJob) -> Result<CountEstimate> {
    check_preconditions(&job.instance)?.ensure()?;
    estimate_z0_with(job, &mut McmcMarginals::from_job(job))
}

/// Accuracy and chain settings shared by the named counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountParams {
    /// Relative error target.
    pub epsilon: Rational,
    /// Failure probability.
    pub delta: Rational,
    /// Seed.
    pub seed: u64,
    /// Sample count override.
    pub samples: Option<usize>,
    /// Burn-in override.
    pub burn_in: Option<u64>,
    /// Steps between samples.
    pub thinning: u64,
}

impl CountParams {
    /// Default chain settings for the given accuracy and seed.
    pub fn new(epsilon: Rational, delta: Rational, seed: u64) -> Self {
        Self { epsilon, delta, seed, samples: None, burn_in: None, thinning: 1 }
    }

    /// The job for `inst` under these settings.
    pub fn job(&self, inst: HolantInstance) -> Result<CountJob> {
        let mut job = CountJob::new(inst, self.epsilon.clone(), self.delta.clone(), self.seed)?;
        if let Some(s) = self.samples {
            job = job.with_samples(s);
        }
        if let Some(b) = self.burn_in {
            job = job.with_burn_in(b);
        }
        Ok(job.with_thinning(self.thinning))
    }
}

/// Counting problems with a named vertex family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// At most `b` chosen edges per vertex.
    BMatching(usize),
    /// At least `b` chosen edges per vertex.
    BEdgeCover(usize),
}

impl Problem {
    /// The vertex family.
    pub fn kind(self) -> NamedFunction {
        match self {
            Problem::BMatching(b) => NamedFunction::AtMost(b),
            Problem::BEdgeCover(b) => NamedFunction::AtLeast(b),
        }
    }

    /// Rejects the values of `b` for which the vertex family is not
    /// windable at large degree.
    pub fn check_supported(self) -> Result<()> {
        match self {
            Problem::BMatching(b) if b > MAX_MATCHING_B => Err(Error::Unsupported(format!(
                "b-matching with b = {b}: AtMost(b) is not windable once the degree reaches b + 3, so only b <= 7 is supported"
            ))),
            Problem::BEdgeCover(b) if b > MAX_EDGE_COVER_B => Err(Error::Unsupported(format!(
                "b-edge-cover with b = {b}: AtLeast(b) is not windable once the degree reaches b + 8, so only b <= 2 is supported"
            ))),
            _ => Ok(()),
        }
    }

    /// Builds the Holant instance on a graph, subdividing edges with weight
    /// gadgets when weights are given.
    pub fn instance(
        self,
        num_vertices: usize,
        edges: &[(usize, usize)],
        weights: Option<&[Rational]>,
    ) -> Result<HolantInstance> {
        let base = HolantInstance::with_named(num_vertices, edges.to_vec(), &self.kind())?;
        match weights {
            Some(w) => weighted_transform(&base, w),
            None => Ok(base),
        }
    }

    /// The applicable `Z_2 / Z_0` bound: `4 m^2` unweighted,
    /// `16 m^2 max w^2` for weighted matchings and `16 m^2 / min w^2` for
    /// weighted edge covers, `m` the edge count of the original graph.
    pub fn ratio_bound(self, edges: usize, weights: Option<&[Rational]>) -> Option<Rational> {
        let m2 = int((edges * edges) as i64);
        match weights {
            None => Some(int(4) * m2),
            Some(w) => match self {
                Problem::BMatching(_) => {
                    let max = w.iter().max().cloned().unwrap_or_else(Rational::one);
                    Some(int(16) * m2 * &max * &max)
                }
                Problem::BEdgeCover(_) => {
                    let min = w.iter().min().cloned().unwrap_or_else(Rational::one);
                    if min.is_zero() {
                        None
                    } else {
                        Some(int(16) * m2 / (&min * &min))
                    }
                }
            },
        }
    }
}

fn count_named(
    problem: Problem,
    num_vertices: usize,
    edges: &[(usize, usize)],
    weights: Option<&[Rational]>,
    params: &CountParams,
) -> Result<CountEstimate> {
    problem.check_supported()?;
    check_accuracy(&params.epsilon, &params.delta)?;
    if let Problem::BEdgeCover(b) = problem {
        let mut degree = alloc::vec![0usize; num_vertices];
        for &(u, v) in edges {
            for w in [u, v] {
                *degree.get_mut(w).ok_or(Error::UnknownVertex(w))? += 1;
            }
        }
        if degree.iter().any(|&d| d < b) {
            return Ok(CountEstimate {
                estimate: Rational::zero(),
                log_estimate: f64::NEG_INFINITY,
                per_edge_marginals: Vec::new(),
                seed: params.seed,
                total_steps: 0,
                rejected_omega2_fraction: 0.0,
                epsilon: params.epsilon.clone(),
                delta: params.delta.clone(),
            });
        }
    }
    let inst = problem.instance(num_vertices, edges, weights)?;
    let report = check_preconditions(&inst)?;
    report.ensure()?;
    if let (Some(ratio), Some(bound)) = (report.ratio(), problem.ratio_bound(edges.len(), weights)) {
        if ratio > bound {
            return Err(Error::PreconditionFailed(format!("Z_2/Z_0 = {ratio} exceeds the bound {bound}")));
        }
    }
    let job = params.job(inst)?;
    estimate_z0_with(&job, &mut McmcMarginals::from_job(&job))
}

/// Estimates the (weighted) number of b-matchings, `b <= 7`.
pub fn count_b_matching(
    num_vertices: usize,
    edges: &[(usize, usize)],
    b: usize,
    weights: Option<&[Rational]>,
    params: &CountParams,
) -> Result<CountEstimate> {
    count_named(Problem::BMatching(b), num_vertices, edges, weights, params)
}

/// Estimates the (weighted) number of b-edge-covers, `b <= 2`. Returns an
/// exact zero when some vertex has degree below `b`.
pub fn count_b_edge_cover(
    num_vertices: usize,
    edges: &[(usize, usize)],
    b: usize,
    weights: Option<&[Rational]>,
    params: &CountParams,
) -> Result<CountEstimate> {
    count_named(Problem::BEdgeCover(b), num_vertices, edges, weights, params)
}
