//! Entanglement swap with unequal couplings. The faster pair would finish
//! its half-period early, so the planner holds it frozen for
//! (pi/2)(1/g_slow - 1/g_fast) and then releases both pairs to land their
//! pi pulses simultaneously at t = pi/(2 g_slow).
//!
//! With an ideal freeze the swap is exact. A projective freeze with N
//! slices approaches it as N grows, at the cost of a sub-unit survival
//! probability.
//!
//! Run with `cargo run --example unequal_swap`.

use num_complex::Complex64;
use qzeno::protocols::{pi_pulse_image, plan_swap, run_swap, shared_excitation_state, FreezeKind};

fn main() -> qzeno::Result<()> {
    let alpha = Complex64::new(0.6, 0.0);
    let beta = Complex64::new(0.8, 0.0);
    let initial = shared_excitation_state(2, alpha, beta)?;
    let target = pi_pulse_image(&initial, &[1, 2])?;

    let (g1, g2) = (1.0, 2.0f64.sqrt());

    let plan = plan_swap(g1, g2, FreezeKind::Ideal)?;
    println!(
        "g1 = {g1}, g2 = {g2:.6}: freeze pair {} for {:.6}, total {:.6}",
        plan.fast_pair, plan.freeze_duration, plan.total_duration
    );
    let record = run_swap(&initial, &plan)?;
    println!(
        "ideal freeze:  fidelity = {:.15}, survival = {:.15}\n",
        record.final_state.fidelity(&target)?,
        record.survival_probability
    );

    println!("{:>6}  {:>12}  {:>18}", "N", "infidelity", "survival");
    for exponent in 0..=10 {
        let slices = 1usize << exponent;
        let plan = plan_swap(g1, g2, FreezeKind::Sliced(slices))?;
        let record = run_swap(&initial, &plan)?;
        let infidelity = 1.0 - record.final_state.fidelity(&target)?;
        println!("{:>6}  {:>12.3e}  {:>18.12}", slices, infidelity, record.survival_probability);
    }
    Ok(())
}
