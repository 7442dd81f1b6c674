//! Entanglement swap with equal couplings: no freezing is needed, a single
//! free half-period moves the shared excitation from the lower partition
//! (a_1, a_2) to the upper one (A_1, A_2) in one go.
//!
//! Run with `cargo run --example free_swap`.

use num_complex::Complex64;
use qzeno::metrics::concurrence_between;
use qzeno::protocols::{pi_pulse_image, plan_swap, shared_excitation_state, FreezeKind};
use qzeno::zeno::sample_schedule;
use qzeno::QubitId;

fn main() -> qzeno::Result<()> {
    let alpha = Complex64::new(0.6, 0.0);
    let beta = Complex64::new(0.0, 0.8);
    let initial = shared_excitation_state(2, alpha, beta)?;

    // Equal couplings: the plan degenerates to one free phase of length
    // pi / (2 g) and the freeze window has zero duration.
    let plan = plan_swap(1.0, 1.0, FreezeKind::Ideal)?;
    assert_eq!(plan.freeze_duration, 0.0);
    println!("total duration: {:.6}", plan.total_duration);

    let samples = 9;
    let times: Vec<f64> =
        (0..samples).map(|i| plan.total_duration * i as f64 / (samples - 1) as f64).collect();
    let points = sample_schedule(&initial, &plan.pair_specs(), &plan.schedule(), &times)?;

    println!("{:>10}  {:>12}  {:>12}", "t", "C(a1,a2)", "C(A1,A2)");
    for point in &points {
        let lower = concurrence_between(&point.state, QubitId::lower(1), QubitId::lower(2))?;
        let upper = concurrence_between(&point.state, QubitId::upper(1), QubitId::upper(2))?;
        println!("{:>10.6}  {:>12.9}  {:>12.9}", point.time, lower, upper);
    }

    // The final state is the pi-pulse image of the input: each pair's
    // excitation hops to the partner qubit and picks up a factor -i.
    let target = pi_pulse_image(&initial, &[1, 2])?;
    let final_state = &points.last().expect("nonempty grid").state;
    println!("fidelity to the pi-pulse image: {:.12}", final_state.fidelity(&target)?);
    Ok(())
}
