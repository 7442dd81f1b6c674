//! Sliced projective control of individual pairs.
//!
//! A control window of duration T on a monitored pair is cut into N slices:
//! the register evolves freely for τ = T/N, then a single-qubit projector
//! is applied and only the kept component survives (selective measurement).
//! The run therefore implements (P e^{-iHτ})^N applied to the state. Each
//! projection multiplies the state norm by the probability of the kept
//! outcome; the product of those per-slice ratios is the survival
//! probability of the whole post-selected run. As N grows the monitored
//! pair's exchange is inhibited — its surviving amplitude scales as
//! cos^N(gτ) → 1 — which is the Zeno freezing the protocols rely on.
//!
//! The state is kept unnormalized while a schedule runs and renormalized
//! once at the end (or at each requested sample point); survival accounting
//! is exact either way because unitaries preserve the norm.
//!
//! [`PairMode::IdealFrozen`] is the N → ∞ idealization: the pair's
//! propagator is simply omitted, no projection happens and no survival
//! cost is paid.

use std::collections::BTreeMap;

use crate::dynamics::{apply_pair_gate, pair_propagator, PairSpec};
use crate::error::{Error, Result};
use crate::register::{QubitId, QubitRegister};

/// Single-qubit projector |v⟩⟨v| on `target`, keeping amplitudes where the
/// qubit occupation equals `kept_value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Projector {
    pub target: QubitId,
    pub kept_value: bool,
}

impl Projector {
    /// Keeps the component with `target` in the ground state — the usual
    /// choice for freezing a pair whose upper qubit starts in |0⟩.
    pub fn keep_ground(target: QubitId) -> Self {
        Projector { target, kept_value: false }
    }
}

/// What happens to one pair during a schedule phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// Evolve under the pair Hamiltonian for the whole phase.
    Free,
    /// Evolve, but interrupt with `slices` projective measurements spread
    /// uniformly over the phase.
    SlicedZeno { projector: Projector, slices: usize },
    /// Ideal N → ∞ limit: the pair is exempted from evolution entirely.
    IdealFrozen,
}

/// One phase of a schedule: a duration plus per-pair modes. Pairs missing
/// from `modes` default to `Free`.
#[derive(Clone, Debug, Default)]
pub struct Phase {
    pub duration: f64,
    pub modes: BTreeMap<usize, PairMode>,
}

impl Phase {
    pub fn free(duration: f64) -> Self {
        Phase { duration, modes: BTreeMap::new() }
    }

    pub fn with_mode(mut self, pair: usize, mode: PairMode) -> Self {
        self.modes.insert(pair, mode);
        self
    }
}

/// A sequence of phases executed back to back.
#[derive(Clone, Debug, Default)]
pub struct ZenoSchedule {
    pub phases: Vec<Phase>,
}

impl ZenoSchedule {
    pub fn new(phases: Vec<Phase>) -> Self {
        ZenoSchedule { phases }
    }

    pub fn total_duration(&self) -> f64 {
        self.phases.iter().map(|p| p.duration).sum()
    }
}

/// Norm ratio recorded for one projection.
#[derive(Clone, Copy, Debug)]
pub struct SliceRecord {
    /// Pair the projector acted on.
    pub pair: usize,
    /// 1-based slice number within the phase, counted per pair.
    pub slice: usize,
    /// Norm² after the projection divided by norm² before it.
    pub norm_ratio: f64,
}

/// Per-phase log entry.
#[derive(Clone, Debug)]
pub struct PhaseRecord {
    pub phase_index: usize,
    /// Unnormalized norm² of the state at the end of the phase, relative to
    /// the (normalized) input of the run.
    pub post_phase_norm_squared: f64,
    pub slice_survivals: Vec<SliceRecord>,
}

/// Outcome of a schedule run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    /// Final state, renormalized.
    pub final_state: QubitRegister,
    /// Probability that every projection selected the kept outcome; equals
    /// the final unnormalized norm².
    pub survival_probability: f64,
    pub per_phase: Vec<PhaseRecord>,
}

/// Applies the projector and returns the unnormalized projected state along
/// with its norm² (the probability of the kept outcome for a normalized
/// input).
pub fn project(register: &QubitRegister, projector: &Projector) -> Result<(QubitRegister, f64)> {
    let mut out = register.clone();
    let (_, after) = project_in_place(&mut out, projector)?;
    Ok((out, after))
}

/// In-place projection; returns (norm² before, norm² after) measured in the
/// same pass over the amplitudes.
fn project_in_place(register: &mut QubitRegister, projector: &Projector) -> Result<(f64, f64)> {
    let bit = register.bit_position(projector.target)?;
    let mask = 1usize << bit;
    let want = if projector.kept_value { mask } else { 0 };
    let mut before = 0.0;
    let mut after = 0.0;
    for (index, amp) in register.amplitudes_mut().iter_mut().enumerate() {
        let p = amp.norm_sqr();
        before += p;
        if index & mask == want {
            after += p;
        } else {
            *amp = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    Ok((before, after))
}

/// Pair specs resolved into a dense per-pair table covering 1..=M.
fn resolve_pairs(num_pairs: usize, pairs: &[PairSpec]) -> Result<Vec<PairSpec>> {
    let mut table: Vec<Option<PairSpec>> = vec![None; num_pairs];
    for spec in pairs {
        if spec.pair() == 0 || spec.pair() > num_pairs {
            return Err(Error::PairIndexOutOfRange { index: spec.pair(), num_pairs });
        }
        if table[spec.pair() - 1].is_some() {
            return Err(Error::DuplicatePairIndex(spec.pair()));
        }
        table[spec.pair() - 1] = Some(*spec);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(i, slot)| slot.ok_or(Error::MissingPairSpec(i + 1)))
        .collect()
}

struct SlicedPair {
    spec: PairSpec,
    projector: Projector,
    slices: u64,
    next_event: u64,
}

struct PhasePlan {
    duration: f64,
    free: Vec<PairSpec>,
    sliced: Vec<SlicedPair>,
}

fn plan_phase(num_pairs: usize, table: &[PairSpec], phase: &Phase) -> Result<PhasePlan> {
    if !(phase.duration.is_finite() && phase.duration >= 0.0) {
        return Err(Error::InvalidParameter { name: "phase duration", value: phase.duration });
    }
    for &pair in phase.modes.keys() {
        if pair == 0 || pair > num_pairs {
            return Err(Error::PairIndexOutOfRange { index: pair, num_pairs });
        }
    }
    let mut free = Vec::new();
    let mut sliced = Vec::new();
    for k in 1..=num_pairs {
        match phase.modes.get(&k).copied().unwrap_or(PairMode::Free) {
            PairMode::Free => free.push(table[k - 1]),
            PairMode::IdealFrozen => {}
            PairMode::SlicedZeno { projector, slices } => {
                if slices == 0 {
                    return Err(Error::InvalidParameter { name: "slices", value: 0.0 });
                }
                sliced.push(SlicedPair {
                    spec: table[k - 1],
                    projector,
                    slices: slices as u64,
                    next_event: 1,
                });
            }
        }
    }
    Ok(PhasePlan { duration: phase.duration, free, sliced })
}

/// Runs one phase in place up to `upto` (≤ duration), feeding every
/// projection's norm ratio to `on_slice`. Free pairs receive a single gate
/// because their propagators commute with everything the sliced pairs do.
fn run_phase_partial(
    state: &mut QubitRegister,
    plan: &mut PhasePlan,
    upto: f64,
    mut on_slice: impl FnMut(usize, usize, f64) -> Result<()>,
) -> Result<()> {
    for spec in &plan.free {
        let gate = pair_propagator(spec, upto)?;
        apply_pair_gate(state, spec.pair(), &gate)?;
    }
    if plan.sliced.is_empty() {
        return Ok(());
    }
    // Slack so that sample times that land exactly on a slice boundary
    // include that slice despite rounding.
    let slack = plan.duration * 1e-12;
    let mut elapsed = 0.0;
    loop {
        // Earliest pending event over all sliced pairs, compared as exact
        // rationals i/N; ties all fire after the same evolution gap.
        let mut best: Option<(u128, u64, u64)> = None; // (i*LCM-free cross terms handled pairwise)
        for sp in &plan.sliced {
            if sp.next_event > sp.slices {
                continue;
            }
            let cand = (sp.next_event as u128, sp.next_event, sp.slices);
            best = match best {
                None => Some(cand),
                Some((_, bi, bn)) => {
                    // cand < best  ⇔  i_c * N_b < i_b * N_c
                    if (sp.next_event as u128) * (bn as u128) < (bi as u128) * (sp.slices as u128) {
                        Some(cand)
                    } else {
                        best
                    }
                }
            };
        }
        let Some((_, event_index, event_slices)) = best else { break };
        let t_event = plan.duration * (event_index as f64) / (event_slices as f64);
        if t_event > upto + slack {
            break;
        }
        let gap = (t_event - elapsed).max(0.0);
        for sp in &plan.sliced {
            let gate = pair_propagator(&sp.spec, gap)?;
            apply_pair_gate(state, sp.spec.pair(), &gate)?;
        }
        elapsed = t_event;
        for sp in &mut plan.sliced {
            if sp.next_event > sp.slices {
                continue;
            }
            let due = (sp.next_event as u128) * (event_slices as u128)
                == (event_index as u128) * (sp.slices as u128);
            if due {
                let (before, after) = project_in_place(state, &sp.projector)?;
                let ratio = if before > 0.0 { after / before } else { 0.0 };
                on_slice(sp.spec.pair(), sp.next_event as usize, ratio)?;
                sp.next_event += 1;
            }
        }
    }
    // Remaining evolution after the last fired slice.
    let tail = (upto - elapsed).max(0.0);
    if tail > 0.0 {
        for sp in &plan.sliced {
            let gate = pair_propagator(&sp.spec, tail)?;
            apply_pair_gate(state, sp.spec.pair(), &gate)?;
        }
    }
    Ok(())
}

/// Executes a schedule on a normalized register and returns the final
/// normalized state, the survival probability and the per-phase log.
/// A projection that annihilates the state aborts the run with the phase
/// and slice where it happened.
pub fn run_schedule(
    register: &QubitRegister,
    pairs: &[PairSpec],
    schedule: &ZenoSchedule,
) -> Result<RunRecord> {
    let table = resolve_pairs(register.num_pairs(), pairs)?;
    let mut state = register.clone();
    let initial_norm = state.norm_squared();
    if initial_norm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroNorm);
    }
    let mut per_phase = Vec::with_capacity(schedule.phases.len());
    let mut current_norm = initial_norm;
    for (phase_index, phase) in schedule.phases.iter().enumerate() {
        let mut plan = plan_phase(register.num_pairs(), &table, phase)?;
        let mut slice_survivals = Vec::new();
        run_phase_partial(&mut state, &mut plan, phase.duration, |pair, slice, ratio| {
            slice_survivals.push(SliceRecord { pair, slice, norm_ratio: ratio });
            current_norm *= ratio;
            if current_norm <= f64::MIN_POSITIVE {
                return Err(Error::ZeroSurvival { phase: phase_index, slice });
            }
            Ok(())
        })?;
        per_phase.push(PhaseRecord {
            phase_index,
            post_phase_norm_squared: state.norm_squared() / initial_norm,
            slice_survivals,
        });
    }
    let final_norm = state.norm_squared();
    let survival_probability = final_norm / initial_norm;
    state.normalize()?;
    Ok(RunRecord { final_state: state, survival_probability, per_phase })
}

/// Convenience wrapper: one phase of duration `total_time` where pair
/// `monitored` is sliced N times under `projector` and every other pair
/// evolves freely.
pub fn zeno_evolve_pair(
    register: &QubitRegister,
    pairs: &[PairSpec],
    monitored: usize,
    projector: Projector,
    total_time: f64,
    slices: usize,
) -> Result<RunRecord> {
    let phase =
        Phase::free(total_time).with_mode(monitored, PairMode::SlicedZeno { projector, slices });
    run_schedule(register, pairs, &ZenoSchedule::new(vec![phase]))
}

/// State, survival and time of one sampled point of a schedule.
#[derive(Clone, Debug)]
pub struct SchedulePoint {
    pub time: f64,
    /// Normalized state at `time`.
    pub state: QubitRegister,
    /// Survival probability accumulated up to `time`.
    pub survival: f64,
}

/// Samples the schedule at the given non-decreasing times in [0, total
/// duration]. States are checkpointed at phase starts, so the cost per
/// sample is one partial phase rather than a rerun from t = 0.
pub fn sample_schedule(
    register: &QubitRegister,
    pairs: &[PairSpec],
    schedule: &ZenoSchedule,
    times: &[f64],
) -> Result<Vec<SchedulePoint>> {
    let table = resolve_pairs(register.num_pairs(), pairs)?;
    let total = schedule.total_duration();
    let slack = total.max(1.0) * 1e-9;
    for window in times.windows(2) {
        if window[1] < window[0] {
            return Err(Error::InvalidParameter { name: "sample times order", value: window[1] });
        }
    }
    if let (Some(&first), Some(&last)) = (times.first(), times.last()) {
        if first < -slack || last > total + slack {
            return Err(Error::InvalidParameter { name: "sample time range", value: last });
        }
    }

    let mut points = Vec::with_capacity(times.len());
    // Checkpoint state and survival at the start of the current phase.
    let mut checkpoint = register.clone();
    let initial_norm = checkpoint.norm_squared();
    if initial_norm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroNorm);
    }
    let mut phase_index = 0usize;
    let mut phase_start = 0.0f64;

    for &t in times {
        // Advance checkpoints past finished phases.
        while phase_index < schedule.phases.len()
            && t > phase_start + schedule.phases[phase_index].duration + slack
        {
            let phase = &schedule.phases[phase_index];
            let mut plan = plan_phase(register.num_pairs(), &table, phase)?;
            run_phase_partial(&mut checkpoint, &mut plan, phase.duration, |_, slice, ratio| {
                if ratio <= f64::MIN_POSITIVE {
                    return Err(Error::ZeroSurvival { phase: phase_index, slice });
                }
                Ok(())
            })?;
            phase_start += phase.duration;
            phase_index += 1;
        }
        let mut state = checkpoint.clone();
        if phase_index < schedule.phases.len() {
            let phase = &schedule.phases[phase_index];
            let upto = (t - phase_start).clamp(0.0, phase.duration);
            let mut plan = plan_phase(register.num_pairs(), &table, phase)?;
            run_phase_partial(&mut state, &mut plan, upto, |_, slice, ratio| {
                if ratio <= f64::MIN_POSITIVE {
                    return Err(Error::ZeroSurvival { phase: phase_index, slice });
                }
                Ok(())
            })?;
        }
        let survival = state.norm_squared() / initial_norm;
        state.normalize().map_err(|_| Error::ZeroSurvival { phase: phase_index, slice: 0 })?;
        points.push(SchedulePoint { time: t, state, survival });
    }
    Ok(points)
}
