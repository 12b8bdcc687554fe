//! Independent cross-check for post-selection probabilities.
//!
//! Linear-optical transition amplitudes between Fock states are matrix
//! permanents: ⟨m|Û|n⟩ = per(U[m,n]) / √(∏nⱼ! ∏mᵢ!) where U[m,n]
//! repeats column j of the mode matrix nⱼ times and row i mᵢ times.
//! Nothing here touches the operator-substitution algebra — the two
//! pipelines share only the 4×4 mode matrix, so agreement between them
//! checks the expansion bookkeeping end to end.

use num_complex::Complex64;

use crate::elements::Matrix4;
use crate::error::{Error, Result};

/// Largest total photon number accepted per transition. The permanent
/// grows as 2^N·N and the simulator never needs more than four photons;
/// six leaves headroom for tests.
pub const PHOTON_CAP: u32 = 6;

const MAX_PERMANENT_DIM: usize = 12;

/// Permanent of a square matrix by Ryser's inclusion–exclusion formula,
/// O(2ⁿ·n²). The empty matrix has permanent 1 by convention.
pub fn permanent(m: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidPattern("permanent requires a square matrix".into()));
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::PhotonCapExceeded(n, MAX_PERMANENT_DIM));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut total = Complex64::ZERO;
    for subset in 1u32..(1 << n) {
        let mut product = Complex64::new(1.0, 0.0);
        for row in m {
            let mut row_sum = Complex64::ZERO;
            for (j, &entry) in row.iter().enumerate() {
                if subset & (1 << j) != 0 {
                    row_sum += entry;
                }
            }
            product *= row_sum;
        }
        if (n as u32 - subset.count_ones()) % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    Ok(total)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ⟨output|Û|input⟩ for occupation 4-vectors over the matrix bases.
/// Zero when photon numbers disagree.
pub fn transition_amplitude(u: &Matrix4, input: [u32; 4], output: [u32; 4]) -> Result<Complex64> {
    let n_in: u32 = input.iter().sum();
    let n_out: u32 = output.iter().sum();
    if n_in > PHOTON_CAP || n_out > PHOTON_CAP {
        return Err(Error::PhotonCapExceeded(n_in.max(n_out) as usize, PHOTON_CAP as usize));
    }
    if n_in != n_out {
        return Ok(Complex64::ZERO);
    }

    // Submatrix with row i repeated output[i] times, column j repeated
    // input[j] times.
    let mut sub = Vec::with_capacity(n_in as usize);
    for (i, &mi) in output.iter().enumerate() {
        for _ in 0..mi {
            let mut row = Vec::with_capacity(n_in as usize);
            for (j, &nj) in input.iter().enumerate() {
                for _ in 0..nj {
                    row.push(u[i][j]);
                }
            }
            sub.push(row);
        }
    }
    let norm: f64 = input
        .iter()
        .chain(output.iter())
        .map(|&k| factorial(k))
        .product::<f64>()
        .sqrt();
    Ok(permanent(&sub)? / norm)
}

/// Output amplitude of a superposition input Σ αₖ|nₖ⟩ (ket amplitudes,
/// not operator coefficients).
pub fn state_amplitude(
    u: &Matrix4,
    input: &[([u32; 4], Complex64)],
    output: [u32; 4],
) -> Result<Complex64> {
    let mut total = Complex64::ZERO;
    for &(pattern, alpha) in input {
        total += alpha * transition_amplitude(u, pattern, output)?;
    }
    Ok(total)
}

/// All N-photon output patterns over 4 modes (compositions of N).
pub fn output_patterns(n: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            for c in 0..=(n - a - b) {
                out.push([a, b, c, n - a - b - c]);
            }
        }
    }
    out
}

/// Full output distribution of a pure Fock input; sums to 1 for a
/// unitary mode matrix.
pub fn full_distribution(u: &Matrix4, input: [u32; 4]) -> Result<Vec<([u32; 4], f64)>> {
    let n: u32 = input.iter().sum();
    output_patterns(n)
        .into_iter()
        .map(|pattern| Ok((pattern, transition_amplitude(u, input, pattern)?.norm_sqr())))
        .collect()
}
