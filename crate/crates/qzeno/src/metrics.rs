//! Entanglement and excitation metrics.
//!
//! Concurrence of a two-qubit density matrix ρ uses the spectrum of
//! √ρ ρ̃ √ρ with ρ̃ = (σy⊗σy) ρ* (σy⊗σy): with λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄ the
//! square roots of its eigenvalues,
//!
//! ```text
//! C(ρ) = max(0, λ₁ - λ₂ - λ₃ - λ₄)
//! ```
//!
//! Numerically the λᵢ are obtained as the singular values of
//! M = √ρ (σy⊗σy) (√ρ)*, whose Gram matrix M M† is exactly √ρ ρ̃ √ρ
//! (because (√ρ)* (√ρ)* = ρ* for Hermitian √ρ). Singular values carry an
//! absolute error proportional to ‖M‖, whereas taking square roots of the
//! eigenvalues of M M† amplifies ~1e-16 rounding noise on genuinely zero
//! eigenvalues to ~1e-8 — far too coarse when the true concurrence is
//! itself ~1e-6. For the same reason [`hermitian_sqrt`] treats density
//! eigenvalues below a small fraction of the largest one as exact zeros
//! instead of square-rooting their rounding noise.

use nalgebra::{Matrix4, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::register::{QubitId, QubitRegister};

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-12;
/// Lowest admissible eigenvalue of a density matrix.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Eigenvalues below this fraction of the largest one count as the null
/// space when taking a matrix square root.
pub const NULL_SPACE_THRESHOLD: f64 = 1e-12;

type CMat4 = Matrix4<Complex64>;

/// Two-qubit density matrix in the basis (|00⟩, |01⟩, |10⟩, |11⟩), first
/// slot = first qubit handed to [`reduce_to_pair`].
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitDensity {
    matrix: CMat4,
}

impl TwoQubitDensity {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn from_matrix(matrix: CMat4) -> Result<Self> {
        let hermiticity = (matrix - matrix.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if hermiticity > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity("matrix is not Hermitian"));
        }
        let trace: Complex64 = matrix.diagonal().iter().sum();
        if (trace - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity("trace differs from 1"));
        }
        let eigen = SymmetricEigen::new(matrix);
        if eigen.eigenvalues.iter().any(|&v| v < EIGENVALUE_FLOOR) {
            return Err(Error::InvalidDensity("matrix has a negative eigenvalue"));
        }
        Ok(TwoQubitDensity { matrix })
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.matrix
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: Vec<f64> =
            SymmetricEigen::new(self.matrix).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        [ev[0], ev[1], ev[2], ev[3]]
    }

    /// Uhlmann fidelity (tr √(√ρ σ √ρ))², matching the |⟨x|y⟩|² convention
    /// for pure states.
    pub fn fidelity(&self, other: &TwoQubitDensity) -> f64 {
        let sr = hermitian_sqrt(&self.matrix);
        let inner = sr * other.matrix * sr;
        let eigen = SymmetricEigen::new(inner);
        let total: f64 = eigen.eigenvalues.iter().map(|&v| v.max(0.0).sqrt()).sum();
        total * total
    }
}

/// √m for a Hermitian positive semidefinite matrix. Singular values below
/// `NULL_SPACE_THRESHOLD` times the largest one are treated as exact
/// zeros: square-rooting their rounding noise would otherwise plant ~1e-8
/// entries in the result.
///
/// Built from the SVD rather than an eigendecomposition: for PSD input
/// the left singular vectors span the eigenspaces of m (m² shares them),
/// so U √Σ U† is the principal square root, and the SVD resolves the
/// small entries of strongly graded matrices to machine precision where
/// the symmetric eigensolver loses ~1e-11.
fn hermitian_sqrt(m: &CMat4) -> CMat4 {
    let svd = SVD::new(*m, true, false);
    let u = svd.u.as_ref().expect("left singular vectors were requested");
    let top = svd.singular_values.iter().fold(0.0, |acc: f64, &v| acc.max(v));
    let cutoff = top * NULL_SPACE_THRESHOLD;
    let mut diag = CMat4::zeros();
    for (i, &v) in svd.singular_values.iter().enumerate() {
        if v > cutoff {
            diag[(i, i)] = Complex64::new(v.sqrt(), 0.0);
        }
    }
    u * diag * u.adjoint()
}

/// Traces the register down to the (q1, q2) subsystem. The result's basis
/// puts q1's occupation in the first slot.
pub fn reduce_to_pair(
    register: &QubitRegister,
    q1: QubitId,
    q2: QubitId,
) -> Result<TwoQubitDensity> {
    if q1 == q2 {
        return Err(Error::IdenticalQubits(q1.to_string()));
    }
    let b1 = register.bit_position(q1)?;
    let b2 = register.bit_position(q2)?;
    let m1 = 1usize << b1;
    let m2 = 1usize << b2;
    let amps = register.amplitudes();

    // Enumerate indices with both target bits clear, then expand each into
    // the four occupations m = 2·occ(q1) + occ(q2).
    let (p, q) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
    let low_mask = (1usize << p) - 1;
    let mid_mask = (1usize << (q - 1 - p)) - 1;
    let mut rho = CMat4::zeros();
    for i in 0..amps.len() >> 2 {
        let low = i & low_mask;
        let mid = (i >> p) & mid_mask;
        let high = i >> (q - 1);
        let base = low | (mid << (p + 1)) | (high << (q + 1));
        let idx = [base, base | m2, base | m1, base | m1 | m2];
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                rho[(r, c)] += amps[ir] * amps[ic].conj();
            }
        }
    }
    TwoQubitDensity::from_matrix(rho)
}

/// Wootters concurrence of a two-qubit density matrix, in [0, 1].
pub fn concurrence(density: &TwoQubitDensity) -> Result<f64> {
    // Revalidate: the struct can only be built through `from_matrix`, but
    // the check is cheap and keeps this entry point self-contained.
    let rho = TwoQubitDensity::from_matrix(density.matrix)?.matrix;

    let z = Complex64::new(0.0, 0.0);
    let pos = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    // σy⊗σy is real in this basis: antidiagonal (-1, 1, 1, -1).
    let syy = CMat4::from_row_slice(&[
        z, z, z, neg, //
        z, z, pos, z, //
        z, pos, z, z, //
        neg, z, z, z,
    ]);
    // The λᵢ are the singular values of m = √ρ (σy⊗σy) (√ρ)*, since
    // m m† = √ρ ρ̃ √ρ. This sidesteps the square root of an eigenvalue
    // spectrum whose rounding noise would swamp concurrences near zero.
    let sr = hermitian_sqrt(&rho);
    let m = sr * syy * sr.conjugate();
    let mut lambdas: Vec<f64> = m.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Concurrence between two qubits of a register.
pub fn concurrence_between(register: &QubitRegister, q1: QubitId, q2: QubitId) -> Result<f64> {
    concurrence(&reduce_to_pair(register, q1, q2)?)
}

/// Expected total excitation number ⟨Σ_q n_q⟩ over all 2M qubits.
pub fn excitation_expectation(register: &QubitRegister) -> f64 {
    register
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, amp)| amp.norm_sqr() * index.count_ones() as f64)
        .sum()
}

/// Expected excitation number restricted to a subset of qubits. The subset
/// must not repeat a qubit.
pub fn excitation_of(register: &QubitRegister, qubits: &[QubitId]) -> Result<f64> {
    let mut mask = 0usize;
    for &qubit in qubits {
        let bit = 1usize << register.bit_position(qubit)?;
        if mask & bit != 0 {
            return Err(Error::IdenticalQubits(qubit.to_string()));
        }
        mask |= bit;
    }
    Ok(register
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, amp)| amp.norm_sqr() * (index & mask).count_ones() as f64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::BasisStateSpec;
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// α |1_{a1}⟩ + β |1_{a2}⟩ over M = 2 pairs.
    fn shared_excitation(alpha: Complex64, beta: Complex64) -> QubitRegister {
        let s10 = BasisStateSpec::with_excited(2, &[QubitId::lower(1)]).unwrap();
        let s01 = BasisStateSpec::with_excited(2, &[QubitId::lower(2)]).unwrap();
        QubitRegister::from_superposition(2, &[(alpha, s10), (beta, s01)]).unwrap()
    }

    #[test]
    fn reduction_of_a_product_state_is_pure() {
        let s = BasisStateSpec::with_excited(2, &[QubitId::lower(1), QubitId::upper(2)]).unwrap();
        let reg = QubitRegister::from_basis_state(&s).unwrap();
        let rho = reduce_to_pair(&reg, QubitId::lower(1), QubitId::upper(2)).unwrap();
        // |11⟩⟨11| in the (q1, q2) basis.
        assert!((rho.matrix()[(3, 3)] - c(1.0, 0.0)).norm() < TOL);
        let ev = rho.eigenvalues();
        assert!((ev[3] - 1.0).abs() < TOL && ev[2].abs() < TOL);
    }

    #[test]
    fn reduction_matches_the_rank_two_construction() {
        // State of the form u ⊗ |00⟩_A + v ⊗ |1_{A1} 0_{A2}⟩ reduces on
        // (a1, a2) to |u⟩⟨u| + |v⟩⟨v|.
        let (mu1, mu2) = (c(0.48, 0.12), c(-0.31, 0.57));
        let nu = c(0.2, -0.54);
        let s10 = BasisStateSpec::with_excited(2, &[QubitId::lower(1)]).unwrap();
        let s01 = BasisStateSpec::with_excited(2, &[QubitId::lower(2)]).unwrap();
        let s_up = BasisStateSpec::with_excited(2, &[QubitId::upper(1)]).unwrap();
        let reg =
            QubitRegister::from_superposition(2, &[(mu1, s10), (mu2, s01), (nu, s_up)]).unwrap();
        let norm = (mu1.norm_sqr() + mu2.norm_sqr() + nu.norm_sqr()).sqrt();
        let (mu1, mu2, nu) = (mu1 / norm, mu2 / norm, nu / norm);

        let rho = reduce_to_pair(&reg, QubitId::lower(1), QubitId::lower(2)).unwrap();
        let mut expected = CMat4::zeros();
        // |u⟩ lives on (|10⟩, |01⟩) of (a1, a2); |v⟩ on |00⟩.
        expected[(2, 2)] = mu1 * mu1.conj();
        expected[(2, 1)] = mu1 * mu2.conj();
        expected[(1, 2)] = mu2 * mu1.conj();
        expected[(1, 1)] = mu2 * mu2.conj();
        expected[(0, 0)] = nu * nu.conj();
        let defect = (rho.matrix() - expected).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(defect < 1e-10, "defect {defect}");
    }

    #[test]
    fn concurrence_of_separable_and_maximally_entangled_states() {
        let vacuum = QubitRegister::new(2).unwrap();
        let c0 = concurrence_between(&vacuum, QubitId::lower(1), QubitId::lower(2)).unwrap();
        assert!(c0.abs() < TOL);

        let bell = shared_excitation(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0));
        let c1 = concurrence_between(&bell, QubitId::lower(1), QubitId::lower(2)).unwrap();
        assert!((c1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shared_excitation_concurrence_is_twice_the_amplitude_product() {
        let alpha = c(0.6, 0.0);
        let beta = c(0.0, 0.8);
        let reg = shared_excitation(alpha, beta);
        let expected = 2.0 * alpha.norm() * beta.norm();
        let got = concurrence_between(&reg, QubitId::lower(1), QubitId::lower(2)).unwrap();
        assert!((got - expected).abs() < 1e-10);
        // Swapping the qubit order leaves concurrence unchanged.
        let swapped = concurrence_between(&reg, QubitId::lower(2), QubitId::lower(1)).unwrap();
        assert!((got - swapped).abs() < 1e-12);
    }

    #[test]
    fn concurrence_keeps_relative_accuracy_near_zero() {
        // ρ = p|φ⟩⟨φ| + (1-p)|00⟩⟨00| with φ = A|01⟩ + B|10⟩ has the
        // closed form C = 2p|A||B|, which stays exact as A shrinks. A
        // spectrum-based evaluation loses these digits to rounding noise.
        let p = 0.5;
        let a = 1e-6f64;
        let b = (1.0 - a * a).sqrt();
        let mut m = CMat4::zeros();
        m[(0, 0)] = c(1.0 - p, 0.0);
        m[(1, 1)] = c(p * a * a, 0.0);
        m[(2, 2)] = c(p * b * b, 0.0);
        m[(1, 2)] = c(p * a * b, 0.0);
        m[(2, 1)] = c(p * a * b, 0.0);
        let rho = TwoQubitDensity::from_matrix(m).unwrap();
        let expected = 2.0 * p * a * b;
        let got = concurrence(&rho).unwrap();
        assert!(
            (got - expected).abs() < 1e-13,
            "expected {expected:.17e}, got {got:.17e}, diff {:.3e}",
            (got - expected).abs()
        );
    }

    #[test]
    fn invalid_density_matrices_are_rejected() {
        let mut m = CMat4::zeros();
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.5, 0.0); // not Hermitian
        assert!(matches!(
            TwoQubitDensity::from_matrix(m),
            Err(Error::InvalidDensity("matrix is not Hermitian"))
        ));

        let mut m = CMat4::zeros();
        m[(0, 0)] = c(0.7, 0.0); // trace 0.7
        assert!(matches!(
            TwoQubitDensity::from_matrix(m),
            Err(Error::InvalidDensity("trace differs from 1"))
        ));

        let mut m = CMat4::zeros();
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0); // negative eigenvalue
        assert!(matches!(
            TwoQubitDensity::from_matrix(m),
            Err(Error::InvalidDensity("matrix has a negative eigenvalue"))
        ));
    }

    #[test]
    fn reduction_needs_two_distinct_qubits() {
        let reg = QubitRegister::new(2).unwrap();
        assert!(matches!(
            reduce_to_pair(&reg, QubitId::lower(1), QubitId::lower(1)),
            Err(Error::IdenticalQubits(_))
        ));
        assert!(reduce_to_pair(&reg, QubitId::lower(1), QubitId::upper(3)).is_err());
    }

    #[test]
    fn uhlmann_fidelity_reduces_to_overlaps() {
        // Diagonal case: F = (Σ √(p_i q_i))².
        let mut d1 = CMat4::zeros();
        d1[(0, 0)] = c(0.25, 0.0);
        d1[(2, 2)] = c(0.75, 0.0);
        let mut d2 = CMat4::zeros();
        d2[(0, 0)] = c(0.5, 0.0);
        d2[(2, 2)] = c(0.5, 0.0);
        let r1 = TwoQubitDensity::from_matrix(d1).unwrap();
        let r2 = TwoQubitDensity::from_matrix(d2).unwrap();
        let expected = ((0.25f64 * 0.5).sqrt() + (0.75f64 * 0.5).sqrt()).powi(2);
        assert!((r1.fidelity(&r2) - expected).abs() < 1e-12);
        assert!((r1.fidelity(&r1) - 1.0).abs() < 1e-12);
        // Symmetric in its arguments.
        assert!((r1.fidelity(&r2) - r2.fidelity(&r1)).abs() < 1e-12);
    }

    #[test]
    fn excitation_counts_weight_each_basis_state() {
        // W-like state over 3 pairs: one excitation shared across the
        // lower partition.
        let amp = c(1.0 / 3.0f64.sqrt(), 0.0);
        let terms: Vec<_> = (1..=3)
            .map(|k| (amp, BasisStateSpec::with_excited(3, &[QubitId::lower(k)]).unwrap()))
            .collect();
        let reg = QubitRegister::from_superposition(3, &terms).unwrap();
        assert!((excitation_expectation(&reg) - 1.0).abs() < TOL);
        let lower: Vec<QubitId> = (1..=3).map(QubitId::lower).collect();
        let upper: Vec<QubitId> = (1..=3).map(QubitId::upper).collect();
        assert!((excitation_of(&reg, &lower).unwrap() - 1.0).abs() < TOL);
        assert!(excitation_of(&reg, &upper).unwrap().abs() < TOL);
        assert!((excitation_of(&reg, &[QubitId::lower(2)]).unwrap() - 1.0 / 3.0).abs() < TOL);

        assert!(matches!(
            excitation_of(&reg, &[QubitId::lower(1), QubitId::lower(1)]),
            Err(Error::IdenticalQubits(_))
        ));
    }
}
