//! Dense matrix oracle for small registers.
//!
//! Everything here deliberately avoids the closed-form propagator in
//! [`crate::dynamics`]: the Hamiltonian is assembled from Kronecker products
//! of 2×2 spin operators and exponentiated numerically, so the two paths
//! can be compared against each other in tests. The oracle is capped at
//! 4 pairs (256 amplitudes) — it exists for validation, not production runs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics::PairSpec;
use crate::error::{Error, Result};
use crate::register::QubitRegister;

/// Largest register the dense oracle accepts.
pub const MAX_ORACLE_PAIRS: usize = 4;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// 2×2 operator embedded at one bit position of an n-qubit space. Bit 0 is
/// the least significant bit of the basis index.
fn op_at(op: &CMatrix, bit: usize, n_qubits: usize) -> CMatrix {
    let mut out = identity(1);
    for q in (0..n_qubits).rev() {
        let factor = if q == bit { op.clone() } else { identity(2) };
        out = out.kronecker(&factor);
    }
    out
}

fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
}

fn sigma_plus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

fn check_oracle_size(num_pairs: usize) -> Result<()> {
    if num_pairs > MAX_ORACLE_PAIRS {
        return Err(Error::OracleTooLarge { requested: num_pairs, max: MAX_ORACLE_PAIRS });
    }
    Ok(())
}

/// Full 4^M × 4^M Hamiltonian for the listed pairs on a register of
/// `num_pairs` pairs. Pairs not listed contribute nothing, which makes it
/// easy to build the commuting summands H_1, H_2, ... individually.
pub fn dense_hamiltonian(num_pairs: usize, pairs: &[PairSpec]) -> Result<CMatrix> {
    check_oracle_size(num_pairs)?;
    let n_qubits = 2 * num_pairs;
    let dim = 1usize << n_qubits;
    let mut h = CMatrix::zeros(dim, dim);
    let sz = sigma_z();
    let sp = sigma_plus();
    let sm = sigma_minus();
    for spec in pairs {
        if spec.pair() == 0 || spec.pair() > num_pairs {
            return Err(Error::PairIndexOutOfRange { index: spec.pair(), num_pairs });
        }
        let ba = spec.pair() - 1;
        let b_a = num_pairs + spec.pair() - 1;
        let omega = c(spec.omega(), 0.0);
        let g = c(spec.g(), 0.0);
        h += (op_at(&sz, ba, n_qubits) + op_at(&sz, b_a, n_qubits)) * omega;
        let exchange = op_at(&sm, ba, n_qubits) * op_at(&sp, b_a, n_qubits)
            + op_at(&sp, ba, n_qubits) * op_at(&sm, b_a, n_qubits);
        h += exchange * g;
    }
    Ok(h)
}

/// Embeds a 4×4 two-qubit matrix acting on (a_k, A_k) into the full
/// register space, for cross-checking the in-place gate kernel.
pub fn embed_pair_unitary(
    num_pairs: usize,
    pair: usize,
    matrix: &[[Complex64; 4]; 4],
) -> Result<CMatrix> {
    check_oracle_size(num_pairs)?;
    if pair == 0 || pair > num_pairs {
        return Err(Error::PairIndexOutOfRange { index: pair, num_pairs });
    }
    let ba = pair - 1;
    let b_a = num_pairs + pair - 1;
    let dim = 1usize << (2 * num_pairs);
    let rest_mask = !((1usize << ba) | (1usize << b_a));
    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            if row & rest_mask != col & rest_mask {
                continue;
            }
            let mr = (((row >> ba) & 1) << 1) | ((row >> b_a) & 1);
            let mc = (((col >> ba) & 1) << 1) | ((col >> b_a) & 1);
            out[(row, col)] = matrix[mr][mc];
        }
    }
    Ok(out)
}

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé
/// approximant. Accurate to machine precision for the small, well-scaled
/// matrices the oracle deals in.
pub fn expm(matrix: &CMatrix) -> CMatrix {
    const THETA_13: f64 = 5.371920351148152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let dim = matrix.nrows();
    // 1-norm: max absolute column sum.
    let norm = (0..matrix.ncols())
        .map(|j| matrix.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as u32 } else { 0 };
    let scale = c(0.5f64.powi(from_u32(squarings)), 0.0);
    let a = matrix * scale;

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let id = identity(dim);

    let u_inner = &a6 * c(B[13], 0.0) + &a4 * c(B[11], 0.0) + &a2 * c(B[9], 0.0);
    let u_poly = &a6 * u_inner
        + &a6 * c(B[7], 0.0)
        + &a4 * c(B[5], 0.0)
        + &a2 * c(B[3], 0.0)
        + &id * c(B[1], 0.0);
    let u = &a * u_poly;
    let v_inner = &a6 * c(B[12], 0.0) + &a4 * c(B[10], 0.0) + &a2 * c(B[8], 0.0);
    let v = &a6 * v_inner
        + &a6 * c(B[6], 0.0)
        + &a4 * c(B[4], 0.0)
        + &a2 * c(B[2], 0.0)
        + &id * c(B[0], 0.0);

    // exp(a) ≈ (v - u)^{-1} (v + u)
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut result = lhs
        .lu()
        .solve(&rhs)
        .expect("Padé denominator is nonsingular for norms below the scaling threshold");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn from_u32(v: u32) -> i32 {
    v.try_into().expect("squaring count fits in i32")
}

/// Evolves a register by exp(-i H t) built with `dense_hamiltonian`.
/// Returns a new register; the input is untouched.
pub fn dense_evolve(register: &QubitRegister, pairs: &[PairSpec], t: f64) -> Result<QubitRegister> {
    check_oracle_size(register.num_pairs())?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter { name: "t", value: t });
    }
    let h = dense_hamiltonian(register.num_pairs(), pairs)?;
    let u = expm(&(h * c(0.0, -t)));
    let amps = nalgebra::DVector::from_column_slice(register.amplitudes());
    let evolved = &u * amps;
    let mut out = register.clone();
    out.amplitudes_mut().copy_from_slice(evolved.as_slice());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_free, pair_propagator};
    use crate::register::{BasisStateSpec, QubitId};

    const TOL: f64 = 1e-12;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMatrix::zeros(3, 3);
        let e = expm(&z);
        assert!((e - identity(3)).iter().all(|v| v.norm() < TOL));
    }

    #[test]
    fn expm_matches_scalar_exponentials_on_diagonals() {
        let m =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.3, -1.2), c(-2.0, 0.5)]));
        let e = expm(&m);
        assert!((e[(0, 0)] - c(0.3, -1.2).exp()).norm() < 1e-13);
        assert!((e[(1, 1)] - c(-2.0, 0.5).exp()).norm() < 1e-13);
        assert!(e[(0, 1)].norm() < TOL && e[(1, 0)].norm() < TOL);
    }

    #[test]
    fn expm_is_exact_on_nilpotents() {
        // exp([[0,x],[0,0]]) = [[1,x],[0,1]]
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(7.0, -3.0);
        let e = expm(&m);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < TOL);
        assert!((e[(0, 1)] - c(7.0, -3.0)).norm() < 1e-11);
        assert!(e[(1, 0)].norm() < TOL);
    }

    #[test]
    fn expm_of_antihermitian_is_unitary_and_composes() {
        // A deliberately non-normalized anti-Hermitian matrix with norm
        // above the scaling threshold, to exercise the squaring branch.
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let v = c(0.1 * (i as f64 - j as f64), 0.3 * (i + j) as f64 + 1.7);
                m[(i, j)] = v;
            }
        }
        let anti = (&m - m.adjoint()) * c(0.5, 0.0) * c(4.0, 0.0);
        let e = expm(&anti);
        let defect = (e.adjoint() * &e - identity(4)).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(defect < 1e-12, "unitarity defect {defect}");

        let twice = expm(&(&anti * c(2.0, 0.0)));
        let composed = &e * &e;
        let diff = (&twice - composed).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-11, "composition defect {diff}");
    }

    #[test]
    fn pair_hamiltonians_commute() {
        let p1 = [PairSpec::new(1, 1.0, 0.5).unwrap()];
        let p2 = [PairSpec::new(2, 2.0, 0.5).unwrap()];
        let h1 = dense_hamiltonian(2, &p1).unwrap();
        let h2 = dense_hamiltonian(2, &p2).unwrap();
        let comm = &h1 * &h2 - &h2 * &h1;
        let norm = comm.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(norm < TOL, "commutator norm {norm}");

        let total = dense_hamiltonian(2, &[p1[0], p2[0]]).unwrap();
        let diff = (&total - (&h1 + &h2)).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff < TOL);
    }

    #[test]
    fn hamiltonian_has_the_expected_matrix_elements() {
        let spec = PairSpec::new(1, 0.7, 1.3).unwrap();
        let h = dense_hamiltonian(1, &[spec]).unwrap();
        assert!((h[(0, 0)] - c(-2.6, 0.0)).norm() < TOL); // |00⟩: both σz at -1
        assert!((h[(3, 3)] - c(2.6, 0.0)).norm() < TOL); //  |11⟩: both σz at +1
        assert!((h[(1, 1)]).norm() < TOL && (h[(2, 2)]).norm() < TOL);
        // exchange couples |a=1,A=0⟩ (index 0b01) with |a=0,A=1⟩ (0b10)
        assert!((h[(1, 2)] - c(0.7, 0.0)).norm() < TOL);
        assert!((h[(2, 1)] - c(0.7, 0.0)).norm() < TOL);
        let defect = (&h - h.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(defect < TOL, "hamiltonian not hermitian");
    }

    #[test]
    fn dense_evolve_agrees_with_the_analytic_kernel() {
        let pairs = [PairSpec::new(1, 0.8, 0.6).unwrap(), PairSpec::new(2, 1.7, 0.6).unwrap()];
        let s10 = BasisStateSpec::with_excited(2, &[QubitId::lower(1)]).unwrap();
        let s01 = BasisStateSpec::with_excited(2, &[QubitId::lower(2), QubitId::upper(1)]).unwrap();
        let reg = QubitRegister::from_superposition(2, &[(c(0.6, 0.0), s10), (c(0.0, 0.8), s01)])
            .unwrap();

        let oracle = dense_evolve(&reg, &pairs, 1.1).unwrap();
        let mut analytic = reg.clone();
        evolve_free(&mut analytic, &pairs, 1.1).unwrap();
        for (a, b) in oracle.amplitudes().iter().zip(analytic.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn embedded_gate_matches_the_inplace_kernel() {
        let spec = PairSpec::new(2, 1.4, 0.3).unwrap();
        let gate = pair_propagator(&spec, 0.77).unwrap();
        let full = embed_pair_unitary(3, 2, gate.matrix()).unwrap();

        let s = BasisStateSpec::with_excited(3, &[QubitId::lower(2), QubitId::lower(3)]).unwrap();
        let t = BasisStateSpec::with_excited(3, &[QubitId::upper(2)]).unwrap();
        let reg = QubitRegister::from_superposition(3, &[(c(0.48, -0.36), s), (c(0.64, 0.48), t)])
            .unwrap();

        let amps = nalgebra::DVector::from_column_slice(reg.amplitudes());
        let expected = &full * amps;
        let mut actual = reg.clone();
        crate::dynamics::apply_pair_gate(&mut actual, 2, &gate).unwrap();
        for (a, b) in actual.amplitudes().iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_rejects_large_registers() {
        let reg = QubitRegister::new(5).unwrap();
        assert!(matches!(
            dense_evolve(&reg, &[], 0.1),
            Err(Error::OracleTooLarge { requested: 5, .. })
        ));
    }
}
