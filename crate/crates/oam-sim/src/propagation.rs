//! Pushes input-mode operator polynomials through the interferometer
//! by operator substitution and evaluates post-selection projectors.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{FockStateVector, Monomial, OccupationMap, OperatorPolynomial};
use crate::elements::{operator_relations, DoveAngle};
use crate::error::{Error, Result};
use crate::modes::ModeId;

/// Photon counts a detector arrangement requires in each output mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionPattern {
    required: OccupationMap,
}

impl DetectionPattern {
    pub fn new(required: impl IntoIterator<Item = (ModeId, u32)>) -> Result<Self> {
        let required: OccupationMap =
            required.into_iter().filter(|&(_, n)| n > 0).collect();
        if required.is_empty() {
            return Err(Error::InvalidPattern("at least one nonzero count required".into()));
        }
        if required.keys().any(|m| m.is_input()) {
            return Err(Error::InvalidPattern("detection happens on output modes".into()));
        }
        Ok(DetectionPattern { required })
    }

    pub fn counts(&self) -> &OccupationMap {
        &self.required
    }

    pub fn photon_number(&self) -> u32 {
        self.required.values().sum()
    }
}

/// One point of a fringe scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FringeSample {
    /// Dove prism rotation in radians.
    pub theta: f64,
    /// |amplitude|² on the detection pattern, as propagated.
    pub raw: f64,
    /// Raw divided by the scan maximum; `None` when the whole scan is
    /// zero and no normalization exists.
    pub normalized: Option<f64>,
}

/// Replace every input-mode creation operator by its output-mode
/// expansion, expand the product, and apply the result to the vacuum.
///
/// Substitution preserves the degree of every monomial, so photon
/// number is conserved; a unitary transform also preserves the norm.
pub fn propagate(state: &OperatorPolynomial, angle: DoveAngle) -> Result<FockStateVector> {
    if !state.has_pure_basis() {
        return Err(Error::MixedBasis);
    }
    // Substitution tables per OAM sector present in the state: the Dove
    // phase 2lθ differs between sectors.
    let mut tables: BTreeMap<u32, BTreeMap<ModeId, OperatorPolynomial>> = BTreeMap::new();
    for (powers, _) in state.terms() {
        for mode in powers.keys() {
            tables.entry(mode.l).or_insert_with(|| {
                operator_relations(DoveAngle::new(angle.theta, mode.l))
                    .into_iter()
                    .collect()
            });
        }
    }

    let mut output = OperatorPolynomial::new();
    for (powers, &coeff) in state.terms() {
        let mut term = OperatorPolynomial::from_monomials([Monomial::new([], coeff)]);
        for (mode, &power) in powers.iter() {
            let substitution = &tables[&mode.l][mode];
            for _ in 0..power {
                term = term.mul(substitution);
            }
        }
        output = output.add(&term);
    }
    output.apply_to_vacuum()
}

/// Raw coincidence probability of seeing exactly the required photon
/// counts. A pattern whose photon number differs from the state's is
/// simply never populated and yields 0.
pub fn postselect_probability(state: &FockStateVector, pattern: &DetectionPattern) -> f64 {
    state.amplitude(pattern.counts()).norm_sqr()
}

fn scan_point(
    state: &OperatorPolynomial,
    pattern: &DetectionPattern,
    l: u32,
    theta: f64,
) -> Result<f64> {
    let propagated = propagate(state, DoveAngle::new(theta, l))?;
    Ok(postselect_probability(&propagated, pattern))
}

fn finish_scan(thetas: &[f64], raws: Vec<f64>) -> Vec<FringeSample> {
    let max = raws.iter().cloned().fold(0.0_f64, f64::max);
    thetas
        .iter()
        .zip(raws)
        .map(|(&theta, raw)| FringeSample {
            theta,
            raw,
            normalized: if max > 0.0 { Some(raw / max) } else { None },
        })
        .collect()
}

fn check_grid(thetas: &[f64]) -> Result<()> {
    if thetas.len() < 2 {
        return Err(Error::InvalidGrid("need at least 2 grid points".into()));
    }
    if thetas.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::InvalidGrid("grid points must be distinct".into()));
    }
    Ok(())
}

/// Scan the coincidence probability over a θ grid, sequentially.
pub fn fringe_scan_serial(
    state: &OperatorPolynomial,
    pattern: &DetectionPattern,
    l: u32,
    thetas: &[f64],
) -> Result<Vec<FringeSample>> {
    check_grid(thetas)?;
    let raws = thetas
        .iter()
        .map(|&theta| scan_point(state, pattern, l, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_scan(thetas, raws))
}

/// Scan the coincidence probability over a θ grid. Each sample is an
/// independent pure computation; with the `parallel` feature the grid
/// is fanned out across threads and results keep grid order.
#[cfg(feature = "parallel")]
pub fn fringe_scan(
    state: &OperatorPolynomial,
    pattern: &DetectionPattern,
    l: u32,
    thetas: &[f64],
) -> Result<Vec<FringeSample>> {
    check_grid(thetas)?;
    let raws = thetas
        .par_iter()
        .map(|&theta| scan_point(state, pattern, l, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_scan(thetas, raws))
}

#[cfg(not(feature = "parallel"))]
pub fn fringe_scan(
    state: &OperatorPolynomial,
    pattern: &DetectionPattern,
    l: u32,
    thetas: &[f64],
) -> Result<Vec<FringeSample>> {
    fringe_scan_serial(state, pattern, l, thetas)
}

/// Evenly spaced grid of `steps` points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || end <= start {
        return Err(Error::InvalidGrid(format!(
            "need steps >= 2 and end > start (got {start}:{end}:{steps})"
        )));
    }
    let h = (end - start) / (steps - 1) as f64;
    Ok((0..steps).map(|j| start + j as f64 * h).collect())
}

/// The coincidence pattern of the two-photon scheme: one photon in
/// a₊ and one in b₋.
pub fn two_photon_pattern(l: u32) -> DetectionPattern {
    use crate::modes::{Arm, OamSign};
    DetectionPattern::new([
        (ModeId::new(Arm::OutA, OamSign::PlusL, l), 1),
        (ModeId::new(Arm::OutB, OamSign::MinusL, l), 1),
    ])
    .expect("nonzero counts")
}

/// The coincidence pattern of the four-photon scheme: three photons in
/// a₊ and one in b₋.
pub fn four_photon_pattern(l: u32) -> DetectionPattern {
    use crate::modes::{Arm, OamSign};
    DetectionPattern::new([
        (ModeId::new(Arm::OutA, OamSign::PlusL, l), 3),
        (ModeId::new(Arm::OutB, OamSign::MinusL, l), 1),
    ])
    .expect("nonzero counts")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{Arm, OamSign};
    use crate::source::{four_photon_state, two_photon_state};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn propagation_preserves_norm_and_photon_number() {
        let state = two_photon_state(1).unwrap();
        for &theta in &[0.0, 0.3, 1.1, 2.7] {
            let out = propagate(&state, DoveAngle::new(theta, 1)).unwrap();
            assert_relative_eq!(out.norm_squared(), 1.0, max_relative = 1e-12);
            assert_eq!(out.photon_number(), Some(2));
        }
    }

    #[test]
    fn two_photon_coincidence_is_half_cos_squared() {
        for l in 1..=3u32 {
            let state = two_photon_state(l).unwrap();
            let pattern = two_photon_pattern(l);
            for &theta in &[0.0, 0.2, 0.9, 1.7] {
                let out = propagate(&state, DoveAngle::new(theta, l)).unwrap();
                let p = postselect_probability(&out, &pattern);
                let expect = 0.5 * (2.0 * l as f64 * theta).cos().powi(2);
                assert_relative_eq!(p, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_photon_other_half_at_theta_zero() {
        // the other half of the state ends up in a₋ and b₊
        let state = two_photon_state(1).unwrap();
        let out = propagate(&state, DoveAngle::new(0.0, 1)).unwrap();
        let mirror = DetectionPattern::new([
            (ModeId::new(Arm::OutA, OamSign::MinusL, 1), 1),
            (ModeId::new(Arm::OutB, OamSign::PlusL, 1), 1),
        ])
        .unwrap();
        assert_relative_eq!(postselect_probability(&out, &mirror), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn four_photon_coincidence_is_three_thirtyseconds_sin_squared() {
        for l in 1..=2u32 {
            let state = four_photon_state(l).unwrap();
            let pattern = four_photon_pattern(l);
            for &theta in &[0.05, 0.4, 1.3] {
                let out = propagate(&state, DoveAngle::new(theta, l)).unwrap();
                let p = postselect_probability(&out, &pattern);
                let expect = 3.0 / 32.0 * (4.0 * l as f64 * theta).sin().powi(2);
                assert_relative_eq!(p, expect, epsilon = 1e-12);
            }
            // best case 4lθ = π/2: 3/32 of the input intensity
            let peak = PI / (8.0 * l as f64);
            let out = propagate(&state, DoveAngle::new(peak, l)).unwrap();
            assert_relative_eq!(postselect_probability(&out, &pattern), 0.09375, epsilon = 1e-12);
        }
    }

    #[test]
    fn mismatched_photon_number_gives_zero() {
        let state = two_photon_state(1).unwrap();
        let out = propagate(&state, DoveAngle::new(0.3, 1)).unwrap();
        let four = four_photon_pattern(1);
        assert_eq!(postselect_probability(&out, &four), 0.0);
    }

    #[test]
    fn degenerate_l_zero_fringe_is_flat() {
        // formal ±0 labels stay distinct; the Dove phase vanishes
        let state = crate::source::two_photon_terms(0);
        let pattern = two_photon_pattern(0);
        let grid = linspace(0.0, PI, 25).unwrap();
        let samples = fringe_scan_serial(&state, &pattern, 0, &grid).unwrap();
        let first = samples[0].raw;
        for s in &samples {
            assert_relative_eq!(s.raw, first, epsilon = 1e-12);
        }
    }

    #[test]
    fn fringe_periodicity() {
        // two-photon raw(θ) = raw(θ + π/(2l)); four-photon period π/(4l)
        let l = 2u32;
        let two = two_photon_state(l).unwrap();
        let four = four_photon_state(l).unwrap();
        let p2 = two_photon_pattern(l);
        let p4 = four_photon_pattern(l);
        for &theta in &[0.13, 0.61, 1.02] {
            let raw = |state, pat: &DetectionPattern, th| {
                postselect_probability(&propagate(state, DoveAngle::new(th, l)).unwrap(), pat)
            };
            assert_relative_eq!(
                raw(&two, &p2, theta),
                raw(&two, &p2, theta + PI / (2.0 * l as f64)),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                raw(&four, &p4, theta),
                raw(&four, &p4, theta + PI / (4.0 * l as f64)),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn scan_normalizes_against_maximum() {
        let state = two_photon_state(1).unwrap();
        let pattern = two_photon_pattern(1);
        let grid = linspace(0.0, PI, 181).unwrap();
        let samples = fringe_scan(&state, &pattern, 1, &grid).unwrap();
        let max_norm = samples.iter().filter_map(|s| s.normalized).fold(0.0, f64::max);
        assert_relative_eq!(max_norm, 1.0, epsilon = 1e-15);
        for s in &samples {
            let expect = (2.0 * s.theta).cos().powi(2);
            assert_relative_eq!(s.normalized.unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn invalid_grids_rejected() {
        let state = two_photon_state(1).unwrap();
        let pattern = two_photon_pattern(1);
        assert!(fringe_scan(&state, &pattern, 1, &[]).is_err());
        assert!(fringe_scan(&state, &pattern, 1, &[0.5]).is_err());
        assert!(linspace(0.0, 0.0, 1).is_err());
    }

    #[test]
    fn mixed_l_contrast_reduced_by_weight() {
        use crate::source::{mixed_l_two_photon, OamDistribution};
        let dist = OamDistribution::new([(1, 0.5), (2, 0.5)].into_iter().collect()).unwrap();
        let mixed = mixed_l_two_photon(&dist).unwrap();
        let pattern = two_photon_pattern(1);
        // pure single-branch reference: √P=1 point mass at l=1
        let pure = mixed_l_two_photon(
            &OamDistribution::new([(1, 1.0)].into_iter().collect()).unwrap(),
        )
        .unwrap();
        for &theta in &[0.1, 0.4, 0.8] {
            let p_mixed = postselect_probability(
                &propagate(&mixed, DoveAngle::new(theta, 1)).unwrap(),
                &pattern,
            );
            let p_pure = postselect_probability(
                &propagate(&pure, DoveAngle::new(theta, 1)).unwrap(),
                &pattern,
            );
            assert_relative_eq!(p_mixed, 0.5 * p_pure, epsilon = 1e-12);
        }
    }
}
