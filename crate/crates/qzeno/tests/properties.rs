//! Randomized invariants of the simulator: conservation laws, gauge
//! freedoms, and agreement between the factorized kernels and the dense
//! oracle.

use num_complex::Complex64;
use proptest::prelude::*;

use qzeno::dense::dense_evolve;
use qzeno::dynamics::{evolve_free, PairSpec};
use qzeno::metrics::{concurrence_between, excitation_expectation};
use qzeno::zeno::{project, Projector};
use qzeno::{BasisStateSpec, QubitId, QubitRegister};

fn basis_spec(num_pairs: usize, index: usize) -> BasisStateSpec {
    let mut occupations = Vec::with_capacity(2 * num_pairs);
    for k in 1..=num_pairs {
        occupations.push((QubitId::lower(k), index & (1 << (k - 1)) != 0));
        occupations.push((QubitId::upper(k), index & (1 << (num_pairs + k - 1)) != 0));
    }
    BasisStateSpec::new(num_pairs, &occupations).expect("full coverage by construction")
}

fn register_from_parts(num_pairs: usize, parts: &[(f64, f64)]) -> Option<QubitRegister> {
    let norm: f64 = parts.iter().map(|(re, im)| re * re + im * im).sum();
    if norm < 1e-3 {
        return None;
    }
    let terms: Vec<(Complex64, BasisStateSpec)> = parts
        .iter()
        .enumerate()
        .map(|(index, &(re, im))| (Complex64::new(re, im), basis_spec(num_pairs, index)))
        .collect();
    QubitRegister::from_superposition(num_pairs, &terms).ok()
}

fn register_strategy(num_pairs: usize) -> impl Strategy<Value = QubitRegister> {
    let dim = 1usize << (2 * num_pairs);
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter_map("state norm too small", move |parts| {
            register_from_parts(num_pairs, &parts)
        })
}

fn pair_specs_strategy(num_pairs: usize) -> impl Strategy<Value = Vec<PairSpec>> {
    proptest::collection::vec((0.0f64..3.0, -2.0f64..2.0), num_pairs).prop_map(move |params| {
        params
            .into_iter()
            .enumerate()
            .map(|(i, (g, omega))| PairSpec::new(i + 1, g, omega).expect("parameters in range"))
            .collect()
    })
}

/// Applies a global phase by rebuilding the register from phased terms.
fn with_global_phase(register: &QubitRegister, theta: f64) -> QubitRegister {
    let phase = Complex64::new(theta.cos(), theta.sin());
    let terms: Vec<(Complex64, BasisStateSpec)> = register
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, amp)| (phase * amp, basis_spec(register.num_pairs(), index)))
        .collect();
    QubitRegister::from_superposition(register.num_pairs(), &terms)
        .expect("unit-norm input stays unit-norm")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_evolution_preserves_norm(
        state in register_strategy(3),
        pairs in pair_specs_strategy(3),
        t in -3.0f64..3.0,
    ) {
        let mut evolved = state.clone();
        evolve_free(&mut evolved, &pairs, t).unwrap();
        prop_assert!((evolved.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_evolution_composes(
        state in register_strategy(2),
        pairs in pair_specs_strategy(2),
        t1 in 0.0f64..2.0,
        t2 in 0.0f64..2.0,
    ) {
        let mut two_steps = state.clone();
        evolve_free(&mut two_steps, &pairs, t1).unwrap();
        evolve_free(&mut two_steps, &pairs, t2).unwrap();
        let mut one_step = state.clone();
        evolve_free(&mut one_step, &pairs, t1 + t2).unwrap();
        for (a, b) in two_steps.amplitudes().iter().zip(one_step.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn excitation_count_is_conserved(
        state in register_strategy(3),
        pairs in pair_specs_strategy(3),
        t in 0.0f64..3.0,
    ) {
        let before = excitation_expectation(&state);
        let mut evolved = state.clone();
        evolve_free(&mut evolved, &pairs, t).unwrap();
        prop_assert!((excitation_expectation(&evolved) - before).abs() < 1e-10);
    }

    #[test]
    fn concurrence_ignores_the_level_splitting(
        state in register_strategy(2),
        g in (0.0f64..3.0, 0.0f64..3.0),
        omegas in ((-2.0f64..2.0), (-2.0f64..2.0)),
        t in 0.0f64..3.0,
    ) {
        // ω enters only through phases local to each pair, which no
        // concurrence of any qubit pairing can see.
        let run = |w1: f64, w2: f64| {
            let pairs = [
                PairSpec::new(1, g.0, w1).unwrap(),
                PairSpec::new(2, g.1, w2).unwrap(),
            ];
            let mut evolved = state.clone();
            evolve_free(&mut evolved, &pairs, t).unwrap();
            evolved
        };
        let detuned = run(omegas.0, omegas.1);
        let plain = run(0.0, 0.0);
        for (q1, q2) in [
            (QubitId::lower(1), QubitId::lower(2)),
            (QubitId::upper(1), QubitId::upper(2)),
            (QubitId::lower(1), QubitId::upper(1)),
        ] {
            let with_omega = concurrence_between(&detuned, q1, q2).unwrap();
            let without = concurrence_between(&plain, q1, q2).unwrap();
            prop_assert!((with_omega - without).abs() < 1e-10,
                "C({q1},{q2}): {with_omega} vs {without}");
        }
    }

    #[test]
    fn concurrence_stays_in_the_unit_interval(
        state in register_strategy(2),
    ) {
        for (q1, q2) in [
            (QubitId::lower(1), QubitId::lower(2)),
            (QubitId::upper(1), QubitId::upper(2)),
            (QubitId::lower(1), QubitId::upper(2)),
        ] {
            let value = concurrence_between(&state, q1, q2).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&value), "C = {value}");
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_phase_blind(
        x in register_strategy(2),
        y in register_strategy(2),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let forward = x.fidelity(&y).unwrap();
        let backward = y.fidelity(&x).unwrap();
        prop_assert!((forward - backward).abs() < 1e-12);

        let phased = with_global_phase(&x, theta);
        let against_phased = phased.fidelity(&y).unwrap();
        prop_assert!((against_phased - forward).abs() < 1e-12);
        prop_assert!(phased.fidelity(&x).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn projection_is_exactly_idempotent(
        state in register_strategy(2),
        pair in 1usize..=2,
        upper in proptest::bool::ANY,
        kept_value in proptest::bool::ANY,
    ) {
        let target = if upper { QubitId::upper(pair) } else { QubitId::lower(pair) };
        let projector = Projector { target, kept_value };
        let (once, norm_once) = project(&state, &projector).unwrap();
        let (twice, norm_twice) = project(&once, &projector).unwrap();
        prop_assert_eq!(once.amplitudes(), twice.amplitudes());
        prop_assert!(norm_twice == norm_once, "{norm_twice} != {norm_once}");
    }
}

proptest! {
    // The dense comparison diagonalizes up to 64×64 matrices per case;
    // fewer cases keep the suite quick.
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorized_kernels_match_the_dense_oracle(
        num_pairs in 1usize..=3,
        parts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
        raw_pairs in proptest::collection::vec((0.1f64..3.0, -2.0f64..2.0), 3),
        t in 0.0f64..3.0,
    ) {
        let dim = 1usize << (2 * num_pairs);
        prop_assume!(register_from_parts(num_pairs, &parts[..dim]).is_some());
        let state = register_from_parts(num_pairs, &parts[..dim]).unwrap();
        let pairs: Vec<PairSpec> = raw_pairs[..num_pairs]
            .iter()
            .enumerate()
            .map(|(i, &(g, omega))| PairSpec::new(i + 1, g, omega).unwrap())
            .collect();

        let mut factorized = state.clone();
        evolve_free(&mut factorized, &pairs, t).unwrap();
        let dense = dense_evolve(&state, &pairs, t).unwrap();
        let deficit = 1.0 - factorized.fidelity(&dense).unwrap();
        prop_assert!(deficit.abs() < 1e-9, "fidelity deficit {deficit}");
    }
}
