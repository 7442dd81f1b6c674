//! Analytic pair dynamics.
//!
//! Every pair k evolves under H_k = ω σz(a_k) + ω σz(A_k) + g_k X_k where
//! X_k = σ−(a_k) σ+(A_k) + σ+(a_k) σ−(A_k) exchanges the excitation inside
//! the pair. In the pair basis (|00⟩, |01⟩, |10⟩, |11⟩) — first slot a_k,
//! second slot A_k, with σz|1⟩ = +|1⟩ — the Hamiltonian is
//!
//! ```text
//!        ⎡ -2ω   0    0    0  ⎤
//! H_k =  ⎢  0    0    g    0  ⎥
//!        ⎢  0    g    0    0  ⎥
//!        ⎣  0    0    0   2ω  ⎦
//! ```
//!
//! so exp(-i H_k t) is known in closed form: |00⟩ and |11⟩ pick up the
//! phases e^{+2iωt} and e^{-2iωt}, and the one-excitation block rotates as
//! [[cos gt, -i sin gt], [-i sin gt, cos gt]]. A "π pulse" is a free
//! evolution with gt = π/2; it exchanges the excitation completely,
//! |1_a 0_A⟩ → -i |0_a 1_A⟩.
//!
//! Different pairs act on disjoint qubits, so their Hamiltonians commute
//! and the register propagator factorizes into these 4×4 gates. That is
//! what makes registers of up to 13 pairs tractable as plain state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::register::QubitRegister;

/// Tolerance for the unitarity check on externally supplied propagators.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

/// Coupling data for one pair: 1-based index k, exchange coupling g ≥ 0 and
/// level splitting ω (both finite).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSpec {
    pair: usize,
    g: f64,
    omega: f64,
}

impl PairSpec {
    pub fn new(pair: usize, g: f64, omega: f64) -> Result<Self> {
        if pair == 0 {
            return Err(Error::PairIndexOutOfRange { index: 0, num_pairs: 0 });
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter { name: "g", value: g });
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter { name: "omega", value: omega });
        }
        Ok(PairSpec { pair, g, omega })
    }

    /// 1-based pair index k.
    pub fn pair(&self) -> usize {
        self.pair
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// A 4×4 unitary acting on one pair, in the basis (|00⟩, |01⟩, |10⟩, |11⟩)
/// with the a_k occupation in the first slot.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPropagator {
    matrix: [[Complex64; 4]; 4],
    duration: f64,
}

impl PairPropagator {
    /// Wraps an explicit matrix, rejecting anything that is not unitary
    /// within `UNITARITY_TOLERANCE`.
    pub fn new(matrix: [[Complex64; 4]; 4], duration: f64) -> Result<Self> {
        if !duration.is_finite() {
            return Err(Error::InvalidParameter { name: "duration", value: duration });
        }
        for i in 0..4 {
            for j in 0..4 {
                // (U† U)_{ij} = Σ_m conj(U_{mi}) U_{mj}
                let mut entry = Complex64::new(0.0, 0.0);
                for row in &matrix {
                    entry += row[i].conj() * row[j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                if (entry - expected).norm() > UNITARITY_TOLERANCE {
                    return Err(Error::InvalidParameter {
                        name: "propagator unitarity defect",
                        value: (entry - expected).norm(),
                    });
                }
            }
        }
        Ok(PairPropagator { matrix, duration })
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Closed-form propagator exp(-i H_k t) for one pair.
pub fn pair_propagator(spec: &PairSpec, t: f64) -> Result<PairPropagator> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter { name: "t", value: t });
    }
    let zero = Complex64::new(0.0, 0.0);
    let angle = spec.g * t;
    let c = Complex64::new(angle.cos(), 0.0);
    let ms = Complex64::new(0.0, -angle.sin());
    // σz sums to -2 on |00⟩ and +2 on |11⟩, hence the opposite phases.
    let phase00 = Complex64::from_polar(1.0, 2.0 * spec.omega * t);
    let phase11 = Complex64::from_polar(1.0, -2.0 * spec.omega * t);
    let matrix = [
        [phase00, zero, zero, zero],
        [zero, c, ms, zero],
        [zero, ms, c, zero],
        [zero, zero, zero, phase11],
    ];
    PairPropagator::new(matrix, t)
}

/// Applies a pair gate to (a_k, A_k) of `register`, in place.
pub fn apply_pair_gate(
    register: &mut QubitRegister,
    pair: usize,
    propagator: &PairPropagator,
) -> Result<()> {
    let num_pairs = register.num_pairs();
    if pair == 0 || pair > num_pairs {
        return Err(Error::PairIndexOutOfRange { index: pair, num_pairs });
    }
    let p = pair - 1; //            bit of a_k
    let q = num_pairs + pair - 1; // bit of A_k, always above p
    let ba = 1usize << p;
    let b_a = 1usize << q;
    let low_mask = ba - 1;
    let mid_mask = (1usize << (q - 1 - p)) - 1;
    let u = &propagator.matrix;
    let amps = register.amplitudes_mut();
    let groups = amps.len() >> 2;
    for i in 0..groups {
        // Spread the group counter around the two pair bits.
        let low = i & low_mask;
        let mid = (i >> p) & mid_mask;
        let high = i >> (q - 1);
        let base = low | (mid << (p + 1)) | (high << (q + 1));
        let idx = [base, base | b_a, base | ba, base | ba | b_a];
        let input = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (row, &target) in u.iter().zip(&idx) {
            amps[target] =
                row[0] * input[0] + row[1] * input[1] + row[2] * input[2] + row[3] * input[3];
        }
    }
    Ok(())
}

/// Evolves the listed pairs freely for time `t`; pairs not listed are left
/// untouched (this is how an ideally frozen pair is represented). Listing a
/// pair twice is an error.
pub fn evolve_free(register: &mut QubitRegister, pairs: &[PairSpec], t: f64) -> Result<()> {
    let num_pairs = register.num_pairs();
    let mut seen = 0u16;
    for spec in pairs {
        if spec.pair() > num_pairs {
            return Err(Error::PairIndexOutOfRange { index: spec.pair(), num_pairs });
        }
        let bit = 1u16 << (spec.pair() - 1);
        if seen & bit != 0 {
            return Err(Error::DuplicatePairIndex(spec.pair()));
        }
        seen |= bit;
    }
    for spec in pairs {
        let gate = pair_propagator(spec, t)?;
        apply_pair_gate(register, spec.pair(), &gate)?;
    }
    Ok(())
}
