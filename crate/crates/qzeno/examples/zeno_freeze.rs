//! Freezing a pair by repeated projection. The excitation sits entirely on
//! the monitored pair, so without intervention it would complete a full
//! transfer to the partner qubit. Cutting the window into N slices and
//! projecting the partner onto |0⟩ after each slice suppresses the
//! transfer; the survival probability obeys 1 - S ≈ (gT)²/N, so doubling
//! N halves the deficit.
//!
//! Run with `cargo run --example zeno_freeze`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use qzeno::dynamics::PairSpec;
use qzeno::protocols::{closed_form_survival, shared_excitation_state, ClosedForm};
use qzeno::zeno::{zeno_evolve_pair, Projector};
use qzeno::QubitId;

fn main() -> qzeno::Result<()> {
    // All weight on pair 2, the monitored one.
    let alpha = Complex64::new(0.0, 0.0);
    let beta = Complex64::new(1.0, 0.0);
    let initial = shared_excitation_state(2, alpha, beta)?;
    let pairs = [PairSpec::new(1, 1.0, 0.0)?, PairSpec::new(2, 1.0, 0.0)?];

    // g T = pi/2: left alone, the excitation would fully leave a_2.
    let total_time = FRAC_PI_2;

    println!(
        "{:>6}  {:>18}  {:>12}  {:>8}  {:>10}",
        "N", "survival", "deficit", "ratio", "closed form"
    );
    let mut previous_deficit = None;
    for exponent in 0..=10 {
        let slices = 1usize << exponent;
        let record = zeno_evolve_pair(
            &initial,
            &pairs,
            2,
            Projector::keep_ground(QubitId::upper(2)),
            total_time,
            slices,
        )?;
        let deficit = 1.0 - record.survival_probability;
        let ratio = previous_deficit
            .map(|p: f64| format!("{:.4}", p / deficit))
            .unwrap_or_else(|| "-".into());
        let reference = closed_form_survival(&ClosedForm::new(
            alpha,
            beta,
            1.0,
            1.0,
            total_time / slices as f64,
            slices as u32,
        )?);
        println!(
            "{:>6}  {:>18.12}  {:>12.3e}  {:>8}  {:>10.3e}",
            slices,
            record.survival_probability,
            deficit,
            ratio,
            (record.survival_probability - reference).abs(),
        );
        previous_deficit = Some(deficit);
    }
    println!("(\"closed form\" column: |simulated - cos^2N(gT/N)|)");
    Ok(())
}
