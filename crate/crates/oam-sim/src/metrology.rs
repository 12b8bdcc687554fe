//! Angular-uncertainty estimation from fringe data.
//!
//! The estimator is Δθ = ⟨ΔÂ⟩ / |∂⟨Â⟩/∂θ| with ⟨ΔÂ⟩ = √(A − A²)
//! (Â is a projector, so ⟨Â²⟩ = ⟨Â⟩). The derivative comes from
//! central finite differences on the scan grid, keeping this layer
//! agnostic to whether the fringe was simulated or read from a file;
//! the closed forms 1/(4l), 1/(8l) and 1/(2Nl) act as oracles in the
//! tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::FringeSample;

/// Points with |dA/dθ| below this (per radian) sit at fringe extrema
/// where numerator and denominator both vanish; they are flagged and
/// excluded from the minimum.
pub const SLOPE_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    /// Usable estimate.
    Ok,
    /// Slope below [`SLOPE_EPSILON`]; excluded from the minimum.
    Singular,
    /// Grid endpoint without a central difference; excluded.
    Endpoint,
}

/// Per-θ entry of the sensitivity curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensitivityPoint {
    pub theta: f64,
    /// Normalized fringe value A(θ).
    pub fringe: f64,
    /// Central-difference estimate of dA/dθ (0 at endpoints).
    pub dfringe_dtheta: f64,
    /// Δθ estimate; absent at flagged points.
    pub delta_theta: Option<f64>,
    pub flag: PointFlag,
}

/// Full angular-sensitivity analysis of one fringe scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// Photon number of the scheme.
    pub n: u32,
    /// OAM mode index magnitude.
    pub l: u32,
    /// Grid spacing h used for the O(h²) central differences.
    pub grid_spacing: f64,
    pub samples: Vec<SensitivityPoint>,
    /// Minimum Δθ over non-singular points, radians.
    pub min_delta_theta: f64,
    /// 1/(2Nl): entangled-photon limit.
    pub heisenberg_limit: f64,
    /// 1/(2√N l): N independent one-photon Fock states.
    pub fock_limit: f64,
    /// Raw coincidence probability at the fringe peak: the fraction of
    /// the ensemble the post-selection keeps in the best case.
    pub success_probability_at_peak: f64,
}

/// Closed-form sensitivity baselines (heisenberg, fock) = (1/(2Nl), 1/(2√N·l)).
pub fn baselines(n: u32, l: u32) -> (f64, f64) {
    let nf = n as f64;
    let lf = l as f64;
    (1.0 / (2.0 * nf * lf), 1.0 / (2.0 * nf.sqrt() * lf))
}

/// Idealized normalized fringe cos²(Nlθ + φ₀) of the N-photon scheme.
///
/// φ₀ is π/2 when N is a multiple of 4 and 0 otherwise, so that N = 2
/// reproduces the propagated two-photon fringe cos²(2lθ) and N = 4 the
/// four-photon fringe sin²(4lθ).
pub fn ideal_noon_fringe(n: u32, l: u32, thetas: &[f64]) -> Result<Vec<FringeSample>> {
    if n < 1 {
        return Err(Error::MissingPhotonNumber);
    }
    if l < 1 {
        return Err(Error::DegenerateOam(l));
    }
    if thetas.len() < 2 {
        return Err(Error::InvalidGrid("need at least 2 grid points".into()));
    }
    let phase0 = if n % 4 == 0 { std::f64::consts::FRAC_PI_2 } else { 0.0 };
    Ok(thetas
        .iter()
        .map(|&theta| {
            let a = (n as f64 * l as f64 * theta + phase0).cos().powi(2);
            FringeSample { theta, raw: a, normalized: Some(a) }
        })
        .collect())
}

/// Estimate Δθ(θ) from a normalized fringe scan.
///
/// Requires a valid normalized column and an (approximately) uniform
/// grid. Endpoints and extrema are flagged rather than dropped.
pub fn uncertainty_curve(fringe: &[FringeSample], n: u32, l: u32) -> Result<SensitivityReport> {
    if fringe.len() < 3 {
        return Err(Error::InvalidGrid("need at least 3 points for central differences".into()));
    }
    let values: Vec<f64> = fringe
        .iter()
        .map(|s| s.normalized.ok_or(Error::InsensitiveConfiguration))
        .collect::<Result<_>>()?;
    let h = fringe[1].theta - fringe[0].theta;
    if h <= 0.0 {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }

    let mut samples = Vec::with_capacity(fringe.len());
    let mut min_delta: Option<f64> = None;
    for (i, sample) in fringe.iter().enumerate() {
        let a = values[i];
        let (slope, flag) = if i == 0 || i + 1 == fringe.len() {
            (0.0, PointFlag::Endpoint)
        } else {
            let d = (values[i + 1] - values[i - 1]) / (2.0 * h);
            if d.abs() < SLOPE_EPSILON {
                (d, PointFlag::Singular)
            } else {
                (d, PointFlag::Ok)
            }
        };
        let delta_theta = if flag == PointFlag::Ok {
            let variance = (a - a * a).max(0.0);
            let dt = variance.sqrt() / slope.abs();
            min_delta = Some(min_delta.map_or(dt, |m: f64| m.min(dt)));
            Some(dt)
        } else {
            None
        };
        samples.push(SensitivityPoint {
            theta: sample.theta,
            fringe: a,
            dfringe_dtheta: slope,
            delta_theta,
            flag,
        });
    }

    let min_delta_theta = min_delta.ok_or(Error::InsensitiveConfiguration)?;
    let (heisenberg_limit, fock_limit) = baselines(n, l);
    let success_probability_at_peak =
        fringe.iter().map(|s| s.raw).fold(0.0_f64, f64::max);
    Ok(SensitivityReport {
        n,
        l,
        grid_spacing: h,
        samples,
        min_delta_theta,
        heisenberg_limit,
        fock_limit,
        success_probability_at_peak,
    })
}

/// Number of strict local maxima of a cyclic sample sequence, treating
/// the grid as one period of the fringe.
pub fn count_periodic_maxima(values: &[f64]) -> usize {
    let n = values.len();
    if n < 3 {
        return 0;
    }
    (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] > prev && values[i] > next
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::linspace;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn baseline_values() {
        assert_eq!(baselines(4, 1), (0.125, 0.25));
        assert_eq!(baselines(1, 1), (0.5, 0.5));
        let (h, f) = baselines(2, 2);
        assert_relative_eq!(h, 0.125, max_relative = 1e-15);
        assert_relative_eq!(f, 1.0 / (2.0 * 2.0_f64.sqrt() * 2.0), max_relative = 1e-15);
        // fock >= heisenberg, equality iff N = 1
        for n in 1..=8u32 {
            let (h, f) = baselines(n, 3);
            if n == 1 {
                assert_eq!(h, f);
            } else {
                assert!(f > h);
            }
        }
    }

    #[test]
    fn noon_uncertainty_matches_heisenberg() {
        // N = 8, l = 3 → 1/48; grid chosen so peaks land on grid points
        let grid = linspace(0.0, PI, 2881).unwrap();
        let fringe = ideal_noon_fringe(8, 3, &grid).unwrap();
        let report = uncertainty_curve(&fringe, 8, 3).unwrap();
        assert_relative_eq!(report.min_delta_theta, 1.0 / 48.0, epsilon = 1e-4);
        // Δθ is constant across non-singular points for a pure cos² fringe
        for p in &report.samples {
            if let Some(dt) = p.delta_theta {
                assert_relative_eq!(dt, 1.0 / 48.0, epsilon = 1e-4);
            }
        }
        assert!(report.min_delta_theta >= report.heisenberg_limit - 1e-9);
    }

    #[test]
    fn grid_refinement_halves_error() {
        let exact = 1.0 / 8.0; // N = 4, l = 1
        let mut errors = Vec::new();
        for steps in [241usize, 481, 961] {
            let grid = linspace(0.0, PI, steps).unwrap();
            let fringe = ideal_noon_fringe(4, 1, &grid).unwrap();
            let report = uncertainty_curve(&fringe, 4, 1).unwrap();
            errors.push((report.min_delta_theta - exact).abs());
        }
        assert!(errors[0] >= 2.0 * errors[1]);
        assert!(errors[1] >= 2.0 * errors[2]);
    }

    #[test]
    fn flat_fringe_is_insensitive() {
        let grid = linspace(0.0, 1.0, 11).unwrap();
        let fringe: Vec<FringeSample> = grid
            .iter()
            .map(|&theta| FringeSample { theta, raw: 0.5, normalized: Some(1.0) })
            .collect();
        assert!(matches!(
            uncertainty_curve(&fringe, 2, 1),
            Err(Error::InsensitiveConfiguration)
        ));
    }

    #[test]
    fn maxima_counting() {
        let grid = linspace(0.0, PI * (719.0 / 720.0), 720).unwrap();
        let two = ideal_noon_fringe(2, 3, &grid).unwrap();
        let values: Vec<f64> = two.iter().map(|s| s.raw).collect();
        assert_eq!(count_periodic_maxima(&values), 6); // 2l for N = 2

        let four = ideal_noon_fringe(4, 2, &grid).unwrap();
        let values: Vec<f64> = four.iter().map(|s| s.raw).collect();
        assert_eq!(count_periodic_maxima(&values), 8); // 4l for N = 4
    }
}
