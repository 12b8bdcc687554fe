//! Simulator for supersensitive angular-displacement measurement with
//! entangled orbital-angular-momentum (OAM) photon pairs.
//!
//! Entangled two- and four-photon states enter a beam-splitter /
//! Dove-prism interferometer; the propagation is carried out exactly in
//! the creation-operator algebra, post-selected coincidence fringes are
//! scanned over the Dove-prism angle θ, and the angular uncertainty
//! Δθ(θ) is estimated from the fringe. A permanent-based oracle
//! recomputes every amplitude through an independent route.
//!
//! Quick tour:
//! - [`modes`]/[`algebra`]: mode labels and the operator polynomial ring
//! - [`elements`]: the 4×4 element matrices and the composed transform
//! - [`source`]: the entangled input states
//! - [`propagation`]: substitution, post-selection, fringe scans
//! - [`metrology`]: Δθ estimation and the 1/(2Nl), 1/(2√N·l) baselines
//! - [`oracle`]: permanent-based cross-check
//! - [`cli`]: the `oam-sim` command-line front end

pub mod algebra;
pub mod cli;
pub mod elements;
pub mod error;
pub mod metrology;
pub mod modes;
pub mod oracle;
pub mod propagation;
pub mod source;

pub use algebra::{FockStateVector, Monomial, OccupationMap, OperatorPolynomial, Powers};
pub use elements::{
    beam_splitter, compose_interferometer, dove_prism, element_chain, mirror_pair,
    operator_relations, path_coefficients, DoveAngle, Matrix4, ModeTransform,
};
pub use error::{Error, Result};
pub use metrology::{
    baselines, count_periodic_maxima, ideal_noon_fringe, uncertainty_curve, PointFlag,
    SensitivityPoint, SensitivityReport,
};
pub use modes::{input_basis, output_basis, Arm, ModeId, OamSign};
pub use propagation::{
    four_photon_pattern, fringe_scan, fringe_scan_serial, linspace, postselect_probability,
    propagate, two_photon_pattern, DetectionPattern, FringeSample,
};
pub use source::{four_photon_state, mixed_l_two_photon, two_photon_state, OamDistribution};
