//! Symmetric functions on `{0,1}^d`, written `[f_0, ..., f_d]` where `f_i`
//! is the value on inputs of Hamming weight `i`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Rational};

/// A nonnegative symmetric function `[f_0, ..., f_d]` with exact values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricFunction {
    values: Vec<Rational>,
}

/// Named families of symmetric functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedFunction {
    /// Constant 0.
    Zeros,
    /// Constant 1.
    Ones,
    /// 1 on even Hamming weight.
    Even,
    /// 1 on odd Hamming weight.
    Odd,
    /// `=k`: 1 exactly at weight `k`.
    Exact(usize),
    /// `>=k`.
    AtLeast(usize),
    /// `<=k`.
    AtMost(usize),
    /// `[a,b]`: 1 for weights in the closed range.
    Range(usize, usize),
    /// The binary edge-weight gadget `[1, 0, w]`.
    EdgeGadget(Rational),
}

impl SymmetricFunction {
    /// Builds a function from its `d + 1` values. Every value must be `>= 0`.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyFunction);
        }
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::NegativeValue { index, value: to_fraction_string(v) });
        }
        Ok(Self { values })
    }

    /// Builds a function from integer values.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| crate::rational::int(v)).collect())
    }

    /// The arity `d`.
    pub fn arity(&self) -> usize {
        self.values.len() - 1
    }

    /// All `d + 1` values.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value on inputs of Hamming weight `weight`.
    pub fn value(&self, weight: usize) -> &Rational {
        &self.values[weight]
    }

    /// True when every value is zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Consumes the function, returning its values.
    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }
}

impl fmt::Display for SymmetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&to_fraction_string(v))?;
        }
        f.write_str("]")
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Materializes a named function at the given arity.
///
/// Out-of-range parameters clamp instead of failing: `Exact(k)` and
/// `AtLeast(k)` with `k > arity` give the zero function, `AtMost(k)` gives
/// all ones. `EdgeGadget` always has arity 2 and ignores `arity`.
pub fn make_named(kind: &NamedFunction, arity: usize) -> Result<SymmetricFunction> {
    let values = match kind {
        NamedFunction::EdgeGadget(w) => {
            if w.is_negative() {
                return Err(Error::NegativeValue { index: 2, value: to_fraction_string(w) });
            }
            alloc::vec![Rational::one(), Rational::zero(), w.clone()]
        }
        _ => (0..=arity)
            .map(|i| {
                indicator(match kind {
                    NamedFunction::Zeros => false,
                    NamedFunction::Ones => true,
                    NamedFunction::Even => i % 2 == 0,
                    NamedFunction::Odd => i % 2 == 1,
                    NamedFunction::Exact(k) => i == *k,
                    NamedFunction::AtLeast(k) => i >= *k,
                    NamedFunction::AtMost(k) => i <= *k,
                    NamedFunction::Range(a, b) => *a <= i && i <= *b,
                    NamedFunction::EdgeGadget(_) => unreachable!(),
                })
            })
            .collect(),
    };
    SymmetricFunction::new(values)
}

/// Fixes `zeros` inputs to 0 and `ones` inputs to 1, leaving
/// `[f_ones, ..., f_{d - zeros}]`.
pub fn pin(f: &SymmetricFunction, zeros: usize, ones: usize) -> Result<SymmetricFunction> {
    let arity = f.arity();
    if zeros + ones > arity {
        return Err(Error::InvalidPinning { zeros, ones, arity });
    }
    Ok(SymmetricFunction { values: f.values[ones..=arity - zeros].to_vec() })
}

/// `x -> f(complement(x))`, i.e. the reversed value list.
pub fn complement(f: &SymmetricFunction) -> SymmetricFunction {
    SymmetricFunction { values: f.values.iter().rev().cloned().collect() }
}

/// Entrywise product of two functions of equal arity.
pub fn pointwise_product(f: &SymmetricFunction, g: &SymmetricFunction) -> Result<SymmetricFunction> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: g.arity() });
    }
    Ok(SymmetricFunction { values: f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect() })
}

/// `H = G * complement(G)` as a full function of arity `m`.
pub fn self_complement_product(g: &SymmetricFunction) -> SymmetricFunction {
    let values = (0..=g.arity()).map(|i| g.value(i) * g.value(g.arity() - i)).collect();
    SymmetricFunction { values }
}

/// Prefix `[h_0, ..., h_{floor(m/2)}]` of `H = G * complement(G)`.
pub fn h_vector(g: &SymmetricFunction) -> Result<Vec<Rational>> {
    let m = g.arity();
    if m == 0 {
        return Err(Error::ZeroArity);
    }
    let h = self_complement_product(g);
    if (0..=m).any(|i| h.value(i) != h.value(m - i)) {
        return Err(Error::NotPalindromic);
    }
    let mut values = h.into_values();
    values.truncate(m / 2 + 1);
    Ok(values)
}
