//! State-vector register over M qubit pairs.
//!
//! The register holds 2M qubits: a *lower* qubit a_k and an *upper* qubit
//! A_k for every pair index k in 1..=M. Basis states are indexed by the
//! bijection
//!
//! ```text
//! bit(a_k) = k - 1          (low half of the index)
//! bit(A_k) = M + k - 1      (high half of the index)
//! ```
//!
//! so a register of M pairs has 4^M complex amplitudes, and a basis index
//! has qubit q excited exactly when the corresponding bit is 1.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported pair count. 4^13 amplitudes are roughly 1 GiB, which
/// keeps the largest register comfortably under 2 GiB of state.
pub const MAX_PAIRS: usize = 13;

/// Tolerance used when checking that an externally supplied state is
/// normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Which half of a pair a qubit belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The a_k qubit (low bits of the basis index).
    Lower,
    /// The A_k qubit (high bits of the basis index).
    Upper,
}

/// A single qubit, addressed by role and 1-based pair index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId {
    role: Role,
    pair: usize,
}

impl QubitId {
    /// The lower qubit a_k of pair `k` (1-based).
    pub fn lower(k: usize) -> Self {
        QubitId { role: Role::Lower, pair: k }
    }

    /// The upper qubit A_k of pair `k` (1-based).
    pub fn upper(k: usize) -> Self {
        QubitId { role: Role::Upper, pair: k }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// 1-based pair index.
    pub fn pair(&self) -> usize {
        self.pair
    }

    /// Bit position of this qubit inside a basis index of a register with
    /// `num_pairs` pairs. Errors when the pair index is out of range.
    pub fn bit_position(&self, num_pairs: usize) -> Result<usize> {
        if self.pair == 0 || self.pair > num_pairs {
            return Err(Error::PairIndexOutOfRange { index: self.pair, num_pairs });
        }
        Ok(match self.role {
            Role::Lower => self.pair - 1,
            Role::Upper => num_pairs + self.pair - 1,
        })
    }
}

impl std::fmt::Display for QubitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.role {
            Role::Lower => write!(f, "a{}", self.pair),
            Role::Upper => write!(f, "A{}", self.pair),
        }
    }
}

/// A computational basis state given as an occupation (0 or 1) for every
/// qubit of the register. Construction checks that each qubit is mentioned
/// exactly once, so a spec always denotes a well-defined basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisStateSpec {
    num_pairs: usize,
    index: usize,
}

impl BasisStateSpec {
    /// Builds a spec from explicit occupations. Every qubit of the register
    /// must appear exactly once.
    pub fn new(num_pairs: usize, occupations: &[(QubitId, bool)]) -> Result<Self> {
        check_num_pairs(num_pairs)?;
        let mut seen = vec![false; 2 * num_pairs];
        let mut index = 0usize;
        for &(qubit, excited) in occupations {
            let bit = qubit.bit_position(num_pairs)?;
            if seen[bit] {
                return Err(Error::BasisSpecCoverage("mentions", qubit.to_string()));
            }
            seen[bit] = true;
            if excited {
                index |= 1 << bit;
            }
        }
        if let Some(bit) = seen.iter().position(|&s| !s) {
            let qubit = if bit < num_pairs {
                QubitId::lower(bit + 1)
            } else {
                QubitId::upper(bit - num_pairs + 1)
            };
            return Err(Error::BasisSpecCoverage("omits", qubit.to_string()));
        }
        Ok(BasisStateSpec { num_pairs, index })
    }

    /// The all-ground state |0...0⟩.
    pub fn vacuum(num_pairs: usize) -> Result<Self> {
        check_num_pairs(num_pairs)?;
        Ok(BasisStateSpec { num_pairs, index: 0 })
    }

    /// Spec with the listed qubits excited and every other qubit in the
    /// ground state. Rejects duplicates.
    pub fn with_excited(num_pairs: usize, excited: &[QubitId]) -> Result<Self> {
        check_num_pairs(num_pairs)?;
        let mut index = 0usize;
        for &qubit in excited {
            let bit = qubit.bit_position(num_pairs)?;
            if index & (1 << bit) != 0 {
                return Err(Error::BasisSpecCoverage("mentions", qubit.to_string()));
            }
            index |= 1 << bit;
        }
        Ok(BasisStateSpec { num_pairs, index })
    }

    pub fn num_pairs(&self) -> usize {
        self.num_pairs
    }

    /// Basis index under the register's bit bijection.
    pub fn basis_index(&self) -> usize {
        self.index
    }

    /// Occupation of one qubit.
    pub fn occupation(&self, qubit: QubitId) -> Result<bool> {
        let bit = qubit.bit_position(self.num_pairs)?;
        Ok(self.index & (1 << bit) != 0)
    }
}

fn check_num_pairs(num_pairs: usize) -> Result<()> {
    if num_pairs == 0 || num_pairs > MAX_PAIRS {
        return Err(Error::PairCountOutOfRange { requested: num_pairs, max: MAX_PAIRS });
    }
    Ok(())
}

/// Dense state vector over M pairs (4^M complex amplitudes).
#[derive(Clone, Debug, PartialEq)]
pub struct QubitRegister {
    num_pairs: usize,
    amplitudes: Vec<Complex64>,
}

impl QubitRegister {
    /// Fresh register in the vacuum state |0...0⟩.
    pub fn new(num_pairs: usize) -> Result<Self> {
        check_num_pairs(num_pairs)?;
        let dim = 1usize << (2 * num_pairs);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(QubitRegister { num_pairs, amplitudes })
    }

    /// Normalized superposition of basis states. Terms addressing the same
    /// basis state are summed before normalization, so cancellations are
    /// honoured; a zero-norm result is an error.
    pub fn from_superposition(
        num_pairs: usize,
        terms: &[(Complex64, BasisStateSpec)],
    ) -> Result<Self> {
        check_num_pairs(num_pairs)?;
        let dim = 1usize << (2 * num_pairs);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        for (coeff, spec) in terms {
            if spec.num_pairs() != num_pairs {
                return Err(Error::RegisterSizeMismatch {
                    left: num_pairs,
                    right: spec.num_pairs(),
                });
            }
            amplitudes[spec.basis_index()] += coeff;
        }
        let mut register = QubitRegister { num_pairs, amplitudes };
        register.normalize()?;
        Ok(register)
    }

    /// Register holding a single basis state.
    pub fn from_basis_state(spec: &BasisStateSpec) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        QubitRegister::from_superposition(spec.num_pairs(), &[(one, spec.clone())])
    }

    pub fn num_pairs(&self) -> usize {
        self.num_pairs
    }

    /// Number of amplitudes, 4^M.
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Amplitude of one basis state.
    pub fn amplitude(&self, spec: &BasisStateSpec) -> Result<Complex64> {
        if spec.num_pairs() != self.num_pairs {
            return Err(Error::RegisterSizeMismatch {
                left: self.num_pairs,
                right: spec.num_pairs(),
            });
        }
        Ok(self.amplitudes[spec.basis_index()])
    }

    /// Bit position of `qubit` inside this register's basis indices.
    pub fn bit_position(&self, qubit: QubitId) -> Result<usize> {
        qubit.bit_position(self.num_pairs)
    }

    /// Sum of |amplitude|². 1 for a normalized state.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Scales the state to unit norm and returns the norm² it had before
    /// scaling. A zero-norm state (for example after a projection that
    /// annihilated everything) is an error.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm_sq = self.norm_squared();
        if norm_sq <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm_sq.sqrt();
        for a in &mut self.amplitudes {
            *a *= inv;
        }
        Ok(norm_sq)
    }

    /// Complex inner product ⟨self|other⟩.
    pub fn inner_product(&self, other: &QubitRegister) -> Result<Complex64> {
        if self.num_pairs != other.num_pairs {
            return Err(Error::RegisterSizeMismatch {
                left: self.num_pairs,
                right: other.num_pairs,
            });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Fidelity |⟨self|other⟩|² between two normalized states. Symmetric,
    /// in [0, 1], and insensitive to global phases.
    pub fn fidelity(&self, other: &QubitRegister) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_register_is_vacuum() {
        let reg = QubitRegister::new(2).unwrap();
        assert_eq!(reg.dimension(), 16);
        assert_eq!(reg.amplitudes()[0], c(1.0, 0.0));
        assert!((reg.norm_squared() - 1.0).abs() < TOL);
        assert_eq!(reg.amplitudes()[1..].iter().map(|a| a.norm_sqr()).sum::<f64>(), 0.0);
    }

    #[test]
    fn register_size_is_bounded() {
        assert!(matches!(
            QubitRegister::new(0),
            Err(Error::PairCountOutOfRange { requested: 0, .. })
        ));
        assert!(matches!(
            QubitRegister::new(14),
            Err(Error::PairCountOutOfRange { requested: 14, .. })
        ));
        assert!(QubitRegister::new(MAX_PAIRS - 5).is_ok());
    }

    #[test]
    fn bit_positions_follow_the_pair_layout() {
        // bit(a_k) = k-1, bit(A_k) = M+k-1 for M = 3.
        assert_eq!(QubitId::lower(1).bit_position(3).unwrap(), 0);
        assert_eq!(QubitId::lower(3).bit_position(3).unwrap(), 2);
        assert_eq!(QubitId::upper(1).bit_position(3).unwrap(), 3);
        assert_eq!(QubitId::upper(3).bit_position(3).unwrap(), 5);
        assert!(QubitId::lower(4).bit_position(3).is_err());
        assert!(QubitId::upper(0).bit_position(3).is_err());
    }

    #[test]
    fn basis_spec_round_trips_occupations() {
        let spec =
            BasisStateSpec::with_excited(2, &[QubitId::lower(1), QubitId::upper(2)]).unwrap();
        assert_eq!(spec.basis_index(), 0b1001);
        assert!(spec.occupation(QubitId::lower(1)).unwrap());
        assert!(!spec.occupation(QubitId::lower(2)).unwrap());
        assert!(!spec.occupation(QubitId::upper(1)).unwrap());
        assert!(spec.occupation(QubitId::upper(2)).unwrap());
    }

    #[test]
    fn basis_spec_requires_full_coverage() {
        let partial = [(QubitId::lower(1), true), (QubitId::lower(2), false)];
        assert!(matches!(
            BasisStateSpec::new(2, &partial),
            Err(Error::BasisSpecCoverage("omits", _))
        ));
        let doubled = [
            (QubitId::lower(1), true),
            (QubitId::lower(1), false),
            (QubitId::lower(2), false),
            (QubitId::upper(1), false),
            (QubitId::upper(2), false),
        ];
        assert!(matches!(
            BasisStateSpec::new(2, &doubled),
            Err(Error::BasisSpecCoverage("mentions", _))
        ));
        assert!(BasisStateSpec::with_excited(2, &[QubitId::lower(1), QubitId::lower(1)]).is_err());
    }

    #[test]
    fn superposition_is_normalized_and_sums_duplicates() {
        let alpha = c(3.0, 0.0);
        let beta = c(4.0, 0.0);
        let s10 = BasisStateSpec::with_excited(2, &[QubitId::lower(1)]).unwrap();
        let s01 = BasisStateSpec::with_excited(2, &[QubitId::lower(2)]).unwrap();
        let reg =
            QubitRegister::from_superposition(2, &[(alpha, s10.clone()), (beta, s01.clone())])
                .unwrap();
        assert!((reg.norm_squared() - 1.0).abs() < TOL);
        assert!((reg.amplitude(&s10).unwrap().re - 0.6).abs() < TOL);
        assert!((reg.amplitude(&s01).unwrap().re - 0.8).abs() < TOL);

        // Terms addressing the same basis state are summed before normalizing.
        let reg = QubitRegister::from_superposition(
            2,
            &[(c(1.0, 0.0), s10.clone()), (c(1.0, 0.0), s10.clone()), (c(2.0, 0.0), s01.clone())],
        )
        .unwrap();
        assert!((reg.amplitude(&s10).unwrap().re - reg.amplitude(&s01).unwrap().re).abs() < TOL);
    }

    #[test]
    fn cancelling_superposition_is_rejected() {
        let s = BasisStateSpec::vacuum(1).unwrap();
        let result =
            QubitRegister::from_superposition(1, &[(c(1.0, 0.0), s.clone()), (c(-1.0, 0.0), s)]);
        assert!(matches!(result, Err(Error::ZeroNorm)));
    }

    #[test]
    fn fidelity_of_shared_single_excitation_with_one_component() {
        // |ψ⟩ = (|1_{a1} 0_{a2}⟩ + |0_{a1} 1_{a2}⟩)/√2 against |1_{a1} 0_{a2}⟩;
        // the overlap keeps a single coefficient, so the fidelity is 1/2.
        let inv = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s10 = BasisStateSpec::with_excited(2, &[QubitId::lower(1)]).unwrap();
        let s01 = BasisStateSpec::with_excited(2, &[QubitId::lower(2)]).unwrap();
        let psi = QubitRegister::from_superposition(2, &[(inv, s10.clone()), (inv, s01)]).unwrap();
        let basis = QubitRegister::from_basis_state(&s10).unwrap();
        // Brute-force dot product as the reference.
        let dot: Complex64 =
            basis.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        assert!((psi.fidelity(&basis).unwrap() - dot.norm_sqr()).abs() < TOL);
        assert!((psi.fidelity(&basis).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn fidelity_requires_matching_sizes() {
        let small = QubitRegister::new(1).unwrap();
        let big = QubitRegister::new(2).unwrap();
        assert!(matches!(
            small.fidelity(&big),
            Err(Error::RegisterSizeMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn normalize_reports_prior_norm() {
        let mut reg = QubitRegister::new(1).unwrap();
        reg.amplitudes_mut()[0] = c(0.5, 0.0);
        reg.amplitudes_mut()[1] = c(0.5, 0.0);
        let prior = reg.normalize().unwrap();
        assert!((prior - 0.5).abs() < TOL);
        assert!((reg.norm_squared() - 1.0).abs() < TOL);

        for a in reg.amplitudes_mut() {
            *a = c(0.0, 0.0);
        }
        assert!(matches!(reg.normalize(), Err(Error::ZeroNorm)));
    }
}
