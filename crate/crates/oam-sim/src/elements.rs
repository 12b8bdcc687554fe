//! 4×4 mode transformations for the optical elements and the composed
//! interferometer.
//!
//! Every element acts on an ordered basis of four modes, grouped as
//! (arm₁₊, arm₁₋, arm₂₊, arm₂₋). Reflection flips the OAM sign: a
//! beam-splitter reflection adds phase i, a mirror adds phase −1, and
//! a Dove prism rotated by θ adds phase −e^{±2ilθ}.

use num_complex::Complex64;

use crate::algebra::{Monomial, OperatorPolynomial};
use crate::modes::{input_basis, output_basis, ModeId};

/// Dove prism rotation angle together with the OAM magnitude it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoveAngle {
    /// Rotation angle in radians.
    pub theta: f64,
    /// OAM mode index magnitude. `l = 0` is permitted but degenerate:
    /// the imprinted phase no longer depends on θ.
    pub l: u32,
}

impl DoveAngle {
    pub fn new(theta: f64, l: u32) -> Self {
        DoveAngle { theta, l }
    }

    /// With `l = 0` every fringe is flat and no angle information exists.
    pub fn is_degenerate(&self) -> bool {
        self.l == 0
    }

    fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * self.l as f64 * self.theta)
    }
}

pub type Matrix4 = [[Complex64; 4]; 4];

/// A 4×4 complex transform between two ordered mode bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    pub entries: Matrix4,
    pub input_basis: [ModeId; 4],
    pub output_basis: [ModeId; 4],
}

const ZERO: Complex64 = Complex64::ZERO;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

impl ModeTransform {
    pub fn new(entries: Matrix4, input_basis: [ModeId; 4], output_basis: [ModeId; 4]) -> Self {
        ModeTransform { entries, input_basis, output_basis }
    }

    pub fn identity(basis: [ModeId; 4]) -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = re(1.0);
        }
        ModeTransform::new(entries, basis, basis)
    }

    /// Matrix product `self · rhs`, i.e. `rhs` acts first.
    pub fn after(&self, rhs: &ModeTransform) -> ModeTransform {
        let mut entries = [[ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        ModeTransform::new(entries, rhs.input_basis, self.output_basis)
    }

    /// Conjugate transpose; for a unitary transform this is the inverse.
    pub fn adjoint(&self) -> ModeTransform {
        let mut entries = [[ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[j][i].conj();
            }
        }
        ModeTransform::new(entries, self.output_basis, self.input_basis)
    }

    /// Max elementwise deviation of `M·M†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.after(&self.adjoint());
        let mut worst: f64 = 0.0;
        for (i, row) in prod.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expect = if i == j { re(1.0) } else { ZERO };
                worst = worst.max((e - expect).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> Complex64 {
        let m = &self.entries;
        let minor = |r: [usize; 3], c: [usize; 3]| -> Complex64 {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        m[0][0] * minor([1, 2, 3], [1, 2, 3]) - m[0][1] * minor([1, 2, 3], [0, 2, 3])
            + m[0][2] * minor([1, 2, 3], [0, 1, 3])
            - m[0][3] * minor([1, 2, 3], [0, 1, 2])
    }

    /// Column `j` as a vector over the output basis.
    pub fn column(&self, j: usize) -> [Complex64; 4] {
        [self.entries[0][j], self.entries[1][j], self.entries[2][j], self.entries[3][j]]
    }
}

/// Symmetric beam splitter acting on two OAM mode pairs.
///
/// Reflection flips the OAM sign and adds phase i; transmission keeps
/// both. On basis (a₊, a₋, b₊, b₋) → (c₊, c₋, d₊, d₋):
///
/// ```text
///        1   ⎛ 0  i  1  0 ⎞
///  M_bs = —  ⎜ i  0  0  1 ⎟
///        √2  ⎜ 1  0  0  i ⎟
///            ⎝ 0  1  i  0 ⎠
/// ```
pub fn beam_splitter(l: u32) -> ModeTransform {
    let s = 1.0 / 2.0_f64.sqrt();
    let entries = [
        [ZERO, im(s), re(s), ZERO],
        [im(s), ZERO, ZERO, re(s)],
        [re(s), ZERO, ZERO, im(s)],
        [ZERO, re(s), im(s), ZERO],
    ];
    ModeTransform::new(entries, input_basis(l), output_basis(l))
}

/// One mirror in each of the two arms: each reflection flips the OAM
/// sign and multiplies by −1 (phase π).
pub fn mirror_pair(l: u32) -> ModeTransform {
    let entries = [
        [ZERO, re(-1.0), ZERO, ZERO],
        [re(-1.0), ZERO, ZERO, ZERO],
        [ZERO, ZERO, ZERO, re(-1.0)],
        [ZERO, ZERO, re(-1.0), ZERO],
    ];
    ModeTransform::new(entries, input_basis(l), output_basis(l))
}

/// Dove prism rotated by θ in the first arm; the second arm is untouched.
///
/// Passage flips the OAM sign and imprints the phase π − 2lθ, i.e. the
/// matrix elements are −e^{±2ilθ}.
pub fn dove_prism(angle: DoveAngle) -> ModeTransform {
    let e = angle.phase();
    let entries = [
        [ZERO, -e, ZERO, ZERO],
        [-e.conj(), ZERO, ZERO, ZERO],
        [ZERO, ZERO, re(1.0), ZERO],
        [ZERO, ZERO, ZERO, re(1.0)],
    ];
    ModeTransform::new(entries, input_basis(angle.l), output_basis(angle.l))
}

/// The path-amplitude coefficients of the interferometer:
/// `k₁ = −(1 + e^{2ilθ})/2` and `k₂ = (−1 + e^{2ilθ})/2`, with
/// `k₃ = k₁*` and `k₄ = k₂*`.
pub fn path_coefficients(angle: DoveAngle) -> (Complex64, Complex64) {
    let e = angle.phase();
    let k1 = -(re(1.0) + e) / 2.0;
    let k2 = (re(-1.0) + e) / 2.0;
    (k1, k2)
}

/// Full interferometer transform `O = M·I` relating output-mode to
/// input-mode annihilation operators, for a Dove prism rotated by θ.
///
/// Each input mode interferes along exactly two paths: one that
/// preserves the OAM sign into arm a and one that flips it into arm b
/// (or vice versa for the idler). The resulting columns over
/// (a₊, a₋, b₊, b₋) are
///
/// ```text
///   s₊ → (k₁, 0, 0, ik₂)     i₊ → (0, ik₂*, k₁*, 0)
///   s₋ → (0, k₁, ik₂, 0)     i₋ → (ik₂*, 0, 0, k₁*)
/// ```
pub fn compose_interferometer(angle: DoveAngle) -> ModeTransform {
    let (k1, k2) = path_coefficients(angle);
    let ik2 = im(1.0) * k2;
    let ik4 = im(1.0) * k2.conj();
    let k3 = k1.conj();
    let entries = [
        [k1, ZERO, ZERO, ik4],
        [ZERO, k1, ik4, ZERO],
        [ZERO, ik2, k3, ZERO],
        [ik2, ZERO, ZERO, k3],
    ];
    ModeTransform::new(entries, input_basis(angle.l), output_basis(angle.l))
}

/// The literal chain M_bs·M_dp(θ)·M_mir·M_bs·M_mir of element matrices.
///
/// This product is unitary and reproduces the coincidence fringes of
/// the entangled input states, but its single-photon amplitudes differ
/// from [`compose_interferometer`] by arm-internal phase conventions;
/// see the tests for the cross-check.
pub fn element_chain(angle: DoveAngle) -> ModeTransform {
    let l = angle.l;
    beam_splitter(l)
        .after(&dove_prism(angle))
        .after(&mirror_pair(l))
        .after(&beam_splitter(l))
        .after(&mirror_pair(l))
}

/// Substitution table mapping each input-mode creation operator to its
/// expansion over output-mode creation operators.
///
/// Solving I† = O†M for the composed transform M gives input operator
/// j as Σ_k M[k][j] · (output operator k); the table is read straight
/// off the matrix columns.
pub fn operator_relations(angle: DoveAngle) -> Vec<(ModeId, OperatorPolynomial)> {
    let m = compose_interferometer(angle);
    let mut table = Vec::with_capacity(4);
    for (j, &input_mode) in m.input_basis.iter().enumerate() {
        let col = m.column(j);
        let poly = OperatorPolynomial::from_monomials(
            m.output_basis
                .iter()
                .zip(col.iter())
                .map(|(&mode, &coeff)| Monomial::new([(mode, 1)], coeff)),
        );
        table.push((input_mode, poly));
    }
    table
}
