//! Holant instances over graphs with half-edges.
//!
//! Edge `i = {u, v}` owns half-edges `2i` (at its first endpoint) and
//! `2i + 1` (at its second). An assignment gives each half-edge a bit; an
//! edge is consistent when its two half-edges agree, and `d(sigma)` counts
//! the inconsistent ones. `Z_k` sums the weight of every assignment with
//! exactly `k` inconsistent edges; `Z_0` is the partition function.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Rational};
use crate::symfunc::{make_named, pin, NamedFunction, SymmetricFunction};

/// Exhaustive enumeration is refused above this many half-edges.
pub const ENUMERATION_LIMIT: usize = 26;

/// A bit per half-edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    /// Wraps a bit vector.
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// All-zero assignment of the given length.
    pub fn zeros(len: usize) -> Self {
        Self(alloc::vec![false; len])
    }

    /// All-one assignment of the given length.
    pub fn ones(len: usize) -> Self {
        Self(alloc::vec![true; len])
    }

    /// Low `len` bits of `mask`, bit `i` giving half-edge `i`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self((0..len).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Packs into an integer (only meaningful for `len <= 64`).
    pub fn to_mask(&self) -> u64 {
        self.0.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    /// The bits.
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Number of half-edges covered.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty assignment.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit of one half-edge.
    pub fn get(&self, half_edge: usize) -> bool {
        self.0[half_edge]
    }

    /// Flips one half-edge in place.
    pub fn flip(&mut self, half_edge: usize) {
        self.0[half_edge] = !self.0[half_edge];
    }

    /// Positions where `self` and `other` differ.
    pub fn difference(&self, other: &Self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] != other.0[i]).collect()
    }

    /// Hamming distance.
    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Drops the two half-edges of `edge`, as [`pin_edge`] does.
    pub fn without_edge(&self, edge: usize) -> Self {
        let mut bits = self.0.clone();
        bits.drain(2 * edge..2 * edge + 2);
        Self(bits)
    }

    /// Lowercase hex, half-edge 0 in the least significant bit of the last digit.
    pub fn to_hex(&self) -> alloc::string::String {
        if self.0.is_empty() {
            return "0".into();
        }
        let digits = self.0.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|b| self.0.get(4 * d + b).copied().unwrap_or(false))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(nibble, 16).expect("nibble < 16")
            })
            .collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A graph with a symmetric constraint function at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolantInstance {
    functions: Vec<SymmetricFunction>,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    owner: Vec<usize>,
}

impl HolantInstance {
    /// Builds an instance. Self-loops are rejected; parallel edges are
    /// fine. Each function's arity must equal its vertex degree.
    pub fn new(functions: Vec<SymmetricFunction>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = functions.len();
        let mut incident = alloc::vec![Vec::new(); n];
        let mut owner = Vec::with_capacity(2 * edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop { edge: i });
            }
            incident[u].push(2 * i);
            incident[v].push(2 * i + 1);
            owner.push(u);
            owner.push(v);
        }
        for (vertex, f) in functions.iter().enumerate() {
            let degree = incident[vertex].len();
            if f.arity() != degree {
                return Err(Error::DegreeMismatch { vertex, degree, arity: f.arity() });
            }
        }
        Ok(Self { functions, edges, incident, owner })
    }

    /// Builds an instance whose vertex functions come from a named family,
    /// each at its vertex degree.
    pub fn with_named(num_vertices: usize, edges: Vec<(usize, usize)>, kind: &NamedFunction) -> Result<Self> {
        let mut degree = alloc::vec![0usize; num_vertices];
        for &(u, v) in &edges {
            for w in [u, v] {
                *degree.get_mut(w).ok_or(Error::UnknownVertex(w))? += 1;
            }
        }
        let functions = degree.iter().map(|&d| make_named(kind, d)).collect::<Result<Vec<_>>>()?;
        Self::new(functions, edges)
    }

    /// Number of vertices.
    pub fn num_vertices(&self) -> usize {
        self.functions.len()
    }

    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of half-edges, `2 |E|`.
    pub fn num_half_edges(&self) -> usize {
        2 * self.edges.len()
    }

    /// Edge endpoints.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex functions.
    pub fn functions(&self) -> &[SymmetricFunction] {
        &self.functions
    }

    /// Function at one vertex.
    pub fn function(&self, vertex: usize) -> &SymmetricFunction {
        &self.functions[vertex]
    }

    /// Half-edges at a vertex, ascending.
    pub fn incident(&self, vertex: usize) -> &[usize] {
        &self.incident[vertex]
    }

    /// Vertex owning a half-edge.
    pub fn owner(&self, half_edge: usize) -> usize {
        self.owner[half_edge]
    }

    /// Degree of a vertex.
    pub fn degree(&self, vertex: usize) -> usize {
        self.incident[vertex].len()
    }

    fn check(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.num_half_edges() {
            return Err(Error::DimensionMismatch { expected: self.num_half_edges(), found: a.len() });
        }
        Ok(())
    }

    /// Hamming weight of the bits at one vertex.
    pub fn local_weight(&self, a: &Assignment, vertex: usize) -> usize {
        self.incident[vertex].iter().filter(|&&h| a.get(h)).count()
    }

    /// Restriction of an assignment to one vertex, in incidence order.
    pub fn local_bits(&self, a: &Assignment, vertex: usize) -> Vec<bool> {
        self.incident[vertex].iter().map(|&h| a.get(h)).collect()
    }
}

/// `w(sigma) = prod_v f_v(sigma restricted to v)`.
pub fn weight(inst: &HolantInstance, a: &Assignment) -> Result<Rational> {
    inst.check(a)?;
    let mut w = Rational::one();
    for v in 0..inst.num_vertices() {
        let value = inst.function(v).value(inst.local_weight(a, v));
        if value.is_zero() {
            return Ok(Rational::zero());
        }
        if !value.is_one() {
            w *= value;
        }
    }
    Ok(w)
}

/// Number of edges whose two half-edges disagree.
pub fn disagreement(inst: &HolantInstance, a: &Assignment) -> Result<usize> {
    inst.check(a)?;
    Ok((0..inst.num_edges()).filter(|&e| a.get(2 * e) != a.get(2 * e + 1)).count())
}

fn enumeration_guard(inst: &HolantInstance) -> Result<()> {
    if inst.num_half_edges() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { half_edges: inst.num_half_edges(), limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Partial strata sums over the assignment masks in `range`; summing the
/// results of a partition of `0..2^(2|E|)` gives [`brute_strata`].
pub fn brute_strata_range(inst: &HolantInstance, range: core::ops::Range<u64>) -> Result<Vec<Rational>> {
    enumeration_guard(inst)?;
    let vertex_masks: Vec<u64> =
        (0..inst.num_vertices()).map(|v| inst.incident(v).iter().fold(0u64, |m, &h| m | 1 << h)).collect();
    let mut edge_mask_even = 0u64;
    for e in 0..inst.num_edges() {
        edge_mask_even |= 1 << (2 * e);
    }
    let mut sums = alloc::vec![Rational::zero(); inst.num_edges() + 1];
    'outer: for mask in range {
        let mut w = Rational::one();
        for (v, &vm) in vertex_masks.iter().enumerate() {
            let value = inst.function(v).value((mask & vm).count_ones() as usize);
            if value.is_zero() {
                continue 'outer;
            }
            if !value.is_one() {
                w *= value;
            }
        }
        // bit 2e of (mask ^ mask >> 1) is set iff edge e disagrees
        let k = ((mask ^ (mask >> 1)) & edge_mask_even).count_ones() as usize;
        sums[k] += w;
    }
    Ok(sums)
}

/// Every `Z_k`, `k = 0..=|E|`, by direct enumeration of all `2^(2|E|)`
/// assignments.
pub fn brute_strata(inst: &HolantInstance) -> Result<Vec<Rational>> {
    enumeration_guard(inst)?;
    brute_strata_range(inst, 0..1u64 << inst.num_half_edges())
}

/// `Z_k` by direct enumeration.
pub fn brute_z(inst: &HolantInstance, k: usize) -> Result<Rational> {
    Ok(brute_strata(inst)?.get(k).cloned().unwrap_or_else(Rational::zero))
}

/// Removes edge `edge`, pinning its value into both endpoint functions.
/// Later edges shift down by one index.
pub fn pin_edge(inst: &HolantInstance, edge: usize, value: bool) -> Result<HolantInstance> {
    if edge >= inst.num_edges() {
        return Err(Error::UnknownEdge(edge));
    }
    let (u, v) = inst.edges[edge];
    let (zeros, ones) = if value { (0, 1) } else { (1, 0) };
    let mut functions = inst.functions.clone();
    for w in [u, v] {
        functions[w] = pin(&functions[w], zeros, ones)?;
    }
    let mut edges = inst.edges.clone();
    edges.remove(edge);
    HolantInstance::new(functions, edges)
}

/// Subdivides every edge `e = {u, v}` with a degree-2 vertex carrying
/// `[1, 0, w_e]`. Edge `i` becomes edges `2i = {u, g_i}` and
/// `2i + 1 = {g_i, v}`; gadget `g_i` is vertex `|V| + i`.
pub fn weighted_transform(inst: &HolantInstance, edge_weights: &[Rational]) -> Result<HolantInstance> {
    if edge_weights.len() != inst.num_edges() {
        return Err(Error::DimensionMismatch { expected: inst.num_edges(), found: edge_weights.len() });
    }
    if let Some((index, w)) = edge_weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
        return Err(Error::NegativeValue { index, value: to_fraction_string(w) });
    }
    let base = inst.num_vertices();
    let mut functions = inst.functions.clone();
    let mut edges = Vec::with_capacity(2 * inst.num_edges());
    for (i, (&(u, v), w)) in inst.edges.iter().zip(edge_weights).enumerate() {
        functions.push(make_named(&NamedFunction::EdgeGadget(w.clone()), 2)?);
        edges.push((u, base + i));
        edges.push((base + i, v));
    }
    HolantInstance::new(functions, edges)
}
