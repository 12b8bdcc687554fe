//! Exact multimode creation-operator algebra.
//!
//! States are built as complex-weighted sums of creation-operator
//! monomials acting on the vacuum. Creation operators on distinct
//! modes commute, so a monomial is fully described by its exponent
//! map and the algebra reduces to polynomial arithmetic with
//! canonical (sorted) keys.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::ModeId;

/// Coefficients with modulus below this are dropped after arithmetic
/// so floating dust does not inflate term counts.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Exponent map of a creation-operator monomial. Absent modes have
/// exponent zero; zero exponents are never stored.
pub type Powers = BTreeMap<ModeId, u32>;

/// Occupation-number pattern over modes, same canonical representation
/// as monomial exponents.
pub type OccupationMap = BTreeMap<ModeId, u32>;

/// A single creation-operator product with a complex weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub powers: Powers,
    pub coefficient: Complex64,
}

impl Monomial {
    pub fn new(powers: impl IntoIterator<Item = (ModeId, u32)>, coefficient: Complex64) -> Self {
        let powers: Powers = powers.into_iter().filter(|&(_, p)| p > 0).collect();
        Monomial { powers, coefficient }
    }

    /// Total operator degree (photon number once applied to vacuum).
    pub fn degree(&self) -> u32 {
        self.powers.values().sum()
    }

    /// Sum of signed OAM over all operators in the product.
    pub fn total_oam(&self) -> i64 {
        self.powers.iter().map(|(m, &p)| m.oam() * p as i64).sum()
    }
}

/// Complex-weighted sum of commuting creation-operator monomials.
///
/// Addition merges like monomials; multiplication distributes exactly
/// and adds exponents. Both prune terms whose coefficient modulus
/// falls below [`PRUNE_THRESHOLD`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<Powers, Complex64>,
}

impl OperatorPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut poly = Self::new();
        for m in monomials {
            poly.accumulate(m.powers, m.coefficient);
        }
        poly.prune();
        poly
    }

    /// Single-operator polynomial `c · (m†)^1`.
    pub fn single(mode: ModeId, coefficient: Complex64) -> Self {
        Self::from_monomials([Monomial::new([(mode, 1)], coefficient)])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Powers, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, powers: &Powers) -> Complex64 {
        self.terms.get(powers).copied().unwrap_or(Complex64::ZERO)
    }

    fn accumulate(&mut self, powers: Powers, coefficient: Complex64) {
        let entry = self.terms.entry(powers).or_insert(Complex64::ZERO);
        *entry += coefficient;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    /// Coefficient-wise sum; like monomials merge, zero terms vanish.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (powers, &c) in other.terms.iter() {
            out.accumulate(powers.clone(), c);
        }
        out.prune();
        out
    }

    /// Full distributive product. Commuting modes make the monomial
    /// product a plain exponent sum, so the term count is bounded by
    /// `|self| * |other|`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (p, &cp) in self.terms.iter() {
            for (q, &cq) in other.terms.iter() {
                let mut powers = p.clone();
                for (&mode, &exp) in q.iter() {
                    *powers.entry(mode).or_insert(0) += exp;
                }
                out.accumulate(powers, cp * cq);
            }
        }
        out.prune();
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::new();
        for (p, &c) in self.terms.iter() {
            out.accumulate(p.clone(), c * factor);
        }
        out.prune();
        out
    }

    /// True when every operator in every term belongs to an input arm
    /// (or every one to an output arm).
    pub fn has_pure_basis(&self) -> bool {
        let mut saw_input = false;
        let mut saw_output = false;
        for powers in self.terms.keys() {
            for mode in powers.keys() {
                if mode.is_input() {
                    saw_input = true;
                } else {
                    saw_output = true;
                }
            }
        }
        !(saw_input && saw_output)
    }

    /// Apply the polynomial to the vacuum state.
    ///
    /// Each monomial `c · ∏ (m†)^{n_m}` maps to the occupation pattern
    /// `{n_m}` with amplitude `c · ∏ √(n_m!)`. Raw amplitudes are kept
    /// as-is; no normalization is applied, so post-selection
    /// probabilities of unnormalized states stay faithful to how the
    /// state was written down.
    pub fn apply_to_vacuum(&self) -> Result<FockStateVector> {
        if !self.has_pure_basis() {
            return Err(Error::MixedBasis);
        }
        let mut amplitudes = BTreeMap::new();
        for (powers, &c) in self.terms.iter() {
            let boost: f64 = powers.values().map(|&n| factorial(n)).product::<f64>().sqrt();
            amplitudes.insert(powers.clone(), c * boost);
        }
        Ok(FockStateVector { amplitudes })
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Superposition of occupation-number patterns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockStateVector {
    amplitudes: BTreeMap<OccupationMap, Complex64>,
}

impl FockStateVector {
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&OccupationMap, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, pattern: &OccupationMap) -> Complex64 {
        self.amplitudes.get(pattern).copied().unwrap_or(Complex64::ZERO)
    }

    /// Σ |amplitude|². Zero for the empty vector.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    /// Rescale to unit norm. Returns the norm that was divided out.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm_squared().sqrt();
        if norm > 0.0 {
            for c in self.amplitudes.values_mut() {
                *c /= norm;
            }
        }
        norm
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Photon number if all patterns share one, `None` otherwise or if empty.
    pub fn photon_number(&self) -> Option<u32> {
        let mut total = None;
        for pattern in self.amplitudes.keys() {
            let n: u32 = pattern.values().sum();
            match total {
                None => total = Some(n),
                Some(t) if t != n => return None,
                _ => {}
            }
        }
        total
    }
}
