//! Input states produced by parametric down-conversion, written as
//! creation-operator polynomials over the signal/idler modes.
//!
//! The fixed-`l` two-photon state is normalized as written. The
//! four-photon state reproduces the printed ket amplitudes
//! (1/2, 1/2, 1) on (|2,2⟩, |2,2⟩-swapped, |1,1,1,1⟩), whose norm² is
//! 3/2; callers decide whether to renormalize, since the published
//! post-selection intensities are quoted against the state as written.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::modes::{Arm, ModeId, OamSign};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn signal(sign: OamSign, l: u32) -> ModeId {
    ModeId::new(Arm::Signal, sign, l)
}

fn idler(sign: OamSign, l: u32) -> ModeId {
    ModeId::new(Arm::Idler, sign, l)
}

/// (1/√2)(s†₊ i†₋ + s†₋ i†₊): one photon pair entangled in the sign of
/// its OAM. Applying to vacuum gives a unit-norm state.
pub fn two_photon_state(l: u32) -> Result<OperatorPolynomial> {
    if l == 0 {
        return Err(Error::DegenerateOam(l));
    }
    Ok(two_photon_terms(l))
}

pub(crate) fn two_photon_terms(l: u32) -> OperatorPolynomial {
    let c = re(1.0 / 2.0_f64.sqrt());
    OperatorPolynomial::from_monomials([
        Monomial::new([(signal(OamSign::PlusL, l), 1), (idler(OamSign::MinusL, l), 1)], c),
        Monomial::new([(signal(OamSign::MinusL, l), 1), (idler(OamSign::PlusL, l), 1)], c),
    ])
}

/// Four-photon entangled state with ket amplitudes
/// (1/2)|2⟩|2⟩ + (1/2)|2⟩|2⟩ + |1,1,1,1⟩, i.e. operator coefficients
/// (1/4)s†₊²i†₋² + (1/4)s†₋²i†₊² + s†₊s†₋i†₋i†₊.
///
/// Norm² of the resulting Fock vector is 3/2. The post-selected
/// coincidence (3/32)sin²4lθ is quoted against these raw amplitudes.
pub fn four_photon_state(l: u32) -> Result<OperatorPolynomial> {
    if l == 0 {
        return Err(Error::DegenerateOam(l));
    }
    Ok(four_photon_terms(l))
}

pub(crate) fn four_photon_terms(l: u32) -> OperatorPolynomial {
    OperatorPolynomial::from_monomials([
        Monomial::new(
            [(signal(OamSign::PlusL, l), 2), (idler(OamSign::MinusL, l), 2)],
            re(0.25),
        ),
        Monomial::new(
            [(signal(OamSign::MinusL, l), 2), (idler(OamSign::PlusL, l), 2)],
            re(0.25),
        ),
        Monomial::new(
            [
                (signal(OamSign::PlusL, l), 1),
                (signal(OamSign::MinusL, l), 1),
                (idler(OamSign::PlusL, l), 1),
                (idler(OamSign::MinusL, l), 1),
            ],
            re(1.0),
        ),
    ])
}

/// Probability weights over OAM magnitudes for the down-converted pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OamDistribution {
    /// P_l keyed by the OAM magnitude l ≥ 1.
    pub weights: BTreeMap<u32, f64>,
}

impl OamDistribution {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(weights: BTreeMap<u32, f64>) -> Result<Self> {
        let dist = OamDistribution { weights };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.weights.values().sum();
        if self.weights.values().any(|&w| w < 0.0) || (total - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::UnnormalizedDistribution(total));
        }
        Ok(())
    }
}

/// Σ_l √P_l · s†₊ₗ i†₋ₗ over the mode universe extended by l: the
/// two-photon state before OAM filtering. Post-selecting a single l
/// sector reduces the coincidence contrast by the factor P_l.
pub fn mixed_l_two_photon(dist: &OamDistribution) -> Result<OperatorPolynomial> {
    dist.validate()?;
    Ok(OperatorPolynomial::from_monomials(dist.weights.iter().map(|(&l, &p)| {
        Monomial::new(
            [(signal(OamSign::PlusL, l), 1), (idler(OamSign::MinusL, l), 1)],
            re(p.sqrt()),
        )
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_photon_shape_and_norm() {
        let p = two_photon_state(1).unwrap();
        assert_eq!(p.term_count(), 2);
        let c = 1.0 / 2.0_f64.sqrt();
        for (_, coeff) in p.terms() {
            assert_relative_eq!(coeff.re, c, max_relative = 1e-15);
        }
        let v = p.apply_to_vacuum().unwrap();
        assert_relative_eq!(v.norm_squared(), 1.0, max_relative = 1e-15);
        assert_eq!(v.photon_number(), Some(2));
    }

    #[test]
    fn two_photon_total_oam_zero() {
        for l in 1..=5 {
            let p = two_photon_state(l).unwrap();
            for (powers, _) in p.terms() {
                let m = Monomial::new(powers.clone(), Complex64::new(1.0, 0.0));
                assert_eq!(m.total_oam(), 0);
            }
        }
    }

    #[test]
    fn l_zero_rejected() {
        assert!(two_photon_state(0).is_err());
        assert!(four_photon_state(0).is_err());
    }

    #[test]
    fn four_photon_amplitudes_and_norm() {
        let p = four_photon_state(1).unwrap();
        assert_eq!(p.term_count(), 3);
        let v = p.apply_to_vacuum().unwrap();
        // ket amplitudes: 1/2 on each |2,2⟩ pattern (√2!·√2! = 2 boost on
        // the 1/4 coefficients) and 1 on |1,1,1,1⟩; norm² = 3/2.
        assert_relative_eq!(v.norm_squared(), 1.5, max_relative = 1e-14);
        assert_eq!(v.photon_number(), Some(4));
        let doubly: crate::algebra::OccupationMap = [
            (signal(OamSign::PlusL, 1), 2),
            (idler(OamSign::MinusL, 1), 2),
        ]
        .into_iter()
        .collect();
        assert_relative_eq!(v.amplitude(&doubly).re, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn mixed_point_mass_and_split() {
        let point = OamDistribution::new([(1, 1.0)].into_iter().collect()).unwrap();
        let p = mixed_l_two_photon(&point).unwrap();
        assert_eq!(p.term_count(), 1);

        let split = OamDistribution::new([(1, 0.5), (2, 0.5)].into_iter().collect()).unwrap();
        let p = mixed_l_two_photon(&split).unwrap();
        assert_eq!(p.term_count(), 2);
        for (_, coeff) in p.terms() {
            assert_relative_eq!(coeff.re, 1.0 / 2.0_f64.sqrt(), max_relative = 1e-15);
        }
    }

    #[test]
    fn unnormalized_distribution_rejected() {
        let bad = OamDistribution { weights: [(1, 0.4), (2, 0.4)].into_iter().collect() };
        assert!(bad.validate().is_err());
        assert!(mixed_l_two_photon(&bad).is_err());
    }
}
