//! Experiment configuration and batch execution.
//!
//! Configs are TOML documents with sections mirroring the library layers:
//!
//! ```toml
//! [model]
//! pairs = 2                      # number of pairs M (1..=13)
//! [[model.pair]]                 # optional per-pair overrides
//! index = 2
//! g = 2.0                        # default 1.0
//! omega = 0.0                    # default 0.0
//!
//! [initial]
//! preset = "single-excitation"   # or explicit [[initial.term]] entries
//! alpha = [0.7071067811865476, 0.0]
//! beta = 0.7071067811865476      # complex values: [re, im] or a bare real
//!
//! [[schedule.phase]]
//! duration = 0.8
//! [[schedule.phase.mode]]        # unlisted pairs evolve freely
//! pair = 2
//! kind = "sliced"                # free | sliced | ideal-frozen
//! slices = 4
//! keep = { qubit = "A2", value = 0 }   # default: the pair's upper qubit in 0
//!
//! [[observable]]
//! kind = "concurrence"           # concurrence | fidelity | excitation
//! qubits = ["a1", "a2"]
//!
//! [sampling]
//! points = 200                   # trace resolution (default 200)
//!
//! [sweep]                        # optional; replaces every sliced count
//! parameter = "slices"           # "n" is accepted as an alias
//! values = [1, 2, 4, 8]
//! ```
//!
//! State presets: `single-excitation` (α|1_{a1}⟩ + β|1_{a2}⟩),
//! `two-excitation` (α|1_{a1}1_{a2}⟩ + β|00⟩), `w-state`, `ghz-w`
//! (coefficients: all-excited, one per single excitation, vacuum — M + 2
//! entries, uniform by default), and `zeno-limit` (the perfectly-frozen
//! limit state; `g` defaults to pair 1's coupling and `t` to the schedule
//! duration). α and β default to 1/√2. A fidelity target is the same
//! state grammar plus an optional `pi-pulse = [pairs]`, which replaces the
//! target by its exact π-pulse image on those pairs, explicit -i factors
//! included.
//!
//! Without a `[sweep]` section the run is a time trace: observables are
//! evaluated on a uniform grid of `sampling.points` times. With one, the
//! schedule runs once per swept value (in parallel; row order follows the
//! value list) and observables are evaluated on each final state.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::PairSpec;
use crate::error::{Error, Result};
use crate::metrics;
use crate::protocols;
use crate::register::{BasisStateSpec, QubitId, QubitRegister, Role, MAX_PAIRS};
use crate::report::{ExperimentReport, ReportMetadata, ReportRow};
use crate::zeno::{run_schedule, sample_schedule, PairMode, Phase, Projector, ZenoSchedule};

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

/// A complex number in config files: either `[re, im]` or a bare real.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Parts([f64; 2]),
}

impl ComplexSpec {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexSpec::Real(re) => Complex64::new(re, 0.0),
            ComplexSpec::Parts([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ModelSection {
    /// Number of pairs M.
    pub pairs: usize,
    /// Per-pair overrides; unlisted pairs get g = 1, ω = 0.
    #[serde(default, rename = "pair")]
    pub pair_overrides: Vec<PairSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PairSection {
    pub index: usize,
    #[serde(default = "default_coupling")]
    pub g: f64,
    #[serde(default)]
    pub omega: f64,
}

fn default_coupling() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetName {
    SingleExcitation,
    TwoExcitation,
    WState,
    GhzW,
    ZenoLimit,
}

impl PresetName {
    fn label(self) -> &'static str {
        match self {
            PresetName::SingleExcitation => "single-excitation",
            PresetName::TwoExcitation => "two-excitation",
            PresetName::WState => "w-state",
            PresetName::GhzW => "ghz-w",
            PresetName::ZenoLimit => "zeno-limit",
        }
    }
}

/// A state description: either a named preset with its parameters or an
/// explicit superposition of basis terms. Doubles as the fidelity-target
/// grammar, where `pi-pulse` may additionally be set.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct StateSection {
    #[serde(default)]
    pub preset: Option<PresetName>,
    #[serde(default)]
    pub alpha: Option<ComplexSpec>,
    #[serde(default)]
    pub beta: Option<ComplexSpec>,
    /// `ghz-w` only: M + 2 amplitudes.
    #[serde(default)]
    pub coefficients: Option<Vec<ComplexSpec>>,
    /// `zeno-limit` only: coupling of the free pair.
    #[serde(default)]
    pub g: Option<f64>,
    /// `zeno-limit` only: evolution time.
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub term: Option<Vec<TermSection>>,
    /// Fidelity targets only: apply the exact π-pulse image on these pairs.
    #[serde(default)]
    pub pi_pulse: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TermSection {
    pub amplitude: ComplexSpec,
    /// Qubits in |1⟩ for this term, e.g. `["a1", "A2"]`; all others are |0⟩.
    #[serde(default)]
    pub excited: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScheduleSection {
    #[serde(rename = "phase")]
    pub phases: Vec<PhaseSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PhaseSection {
    pub duration: f64,
    #[serde(default, rename = "mode")]
    pub modes: Vec<ModeSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    Free,
    Sliced,
    IdealFrozen,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ModeSection {
    pub pair: usize,
    pub kind: ModeKind,
    #[serde(default)]
    pub slices: Option<usize>,
    #[serde(default)]
    pub keep: Option<KeepSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct KeepSection {
    pub qubit: String,
    /// Occupation kept by the projector: 0 or 1 (default 0).
    #[serde(default)]
    pub value: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableKind {
    Concurrence,
    Fidelity,
    Excitation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ObservableSection {
    pub kind: ObservableKind,
    /// Concurrence: exactly two qubits. Excitation: optional subset
    /// (omitted = whole register).
    #[serde(default)]
    pub qubits: Option<Vec<String>>,
    /// Fidelity only.
    #[serde(default)]
    pub target: Option<StateSection>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SamplingSection {
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    200
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection { points: default_points() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    /// Replaces the slice count of every sliced mode in the schedule.
    #[serde(rename = "slices", alias = "n")]
    Slices,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub values: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub initial: StateSection,
    pub schedule: ScheduleSection,
    #[serde(default, rename = "observable")]
    pub observables: Vec<ObservableSection>,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

// ---------------------------------------------------------------------------
// Parsing and validation
// ---------------------------------------------------------------------------

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ConfigValidation { path: path.into(), message: message.into() }
}

/// Parses a qubit label of the form `a3` (lower partition) or `A3` (upper
/// partition), 1-based.
pub fn parse_qubit_name(name: &str) -> std::result::Result<QubitId, String> {
    let mut chars = name.chars();
    let role = match chars.next() {
        Some('a') => Role::Lower,
        Some('A') => Role::Upper,
        _ => return Err(format!("{name:?} must start with 'a' or 'A'")),
    };
    let pair: usize = chars
        .as_str()
        .parse()
        .map_err(|_| format!("{name:?} must be 'a<k>' or 'A<k>' with k >= 1"))?;
    if pair == 0 {
        return Err(format!("{name:?}: pair numbering starts at 1"));
    }
    Ok(match role {
        Role::Lower => QubitId::lower(pair),
        Role::Upper => QubitId::upper(pair),
    })
}

fn parse_qubit_in_range(name: &str, num_pairs: usize, path: &str) -> Result<QubitId> {
    let qubit = parse_qubit_name(name).map_err(|message| invalid(path, message))?;
    if qubit.pair() > num_pairs {
        return Err(invalid(
            path,
            format!("pair {} out of range for {num_pairs} pairs", qubit.pair()),
        ));
    }
    Ok(qubit)
}

/// Parses and validates a TOML experiment config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig =
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    validate_config(&config)?;
    Ok(config)
}

/// Validates a config built programmatically (the CLI presets) or parsed
/// from text. Every rejection names the offending field.
pub fn validate_config(config: &ExperimentConfig) -> Result<()> {
    let m = config.model.pairs;
    if m == 0 || m > MAX_PAIRS {
        return Err(invalid("model.pairs", format!("must be in 1..={MAX_PAIRS}, got {m}")));
    }
    let mut seen = BTreeSet::new();
    for (i, pair) in config.model.pair_overrides.iter().enumerate() {
        let path = format!("model.pair[{i}]");
        if pair.index == 0 || pair.index > m {
            return Err(invalid(
                format!("{path}.index"),
                format!("pair {} out of range for {m} pairs", pair.index),
            ));
        }
        if !seen.insert(pair.index) {
            return Err(invalid(
                format!("{path}.index"),
                format!("pair {} listed twice", pair.index),
            ));
        }
        if !pair.g.is_finite() || pair.g < 0.0 {
            return Err(invalid(
                format!("{path}.g"),
                format!("must be finite and >= 0, got {}", pair.g),
            ));
        }
        if !pair.omega.is_finite() {
            return Err(invalid(format!("{path}.omega"), "must be finite"));
        }
    }

    if config.schedule.phases.is_empty() {
        return Err(invalid("schedule.phase", "at least one phase is required"));
    }
    let mut any_sliced = false;
    for (i, phase) in config.schedule.phases.iter().enumerate() {
        let path = format!("schedule.phase[{i}]");
        if !phase.duration.is_finite() || phase.duration <= 0.0 {
            return Err(invalid(
                format!("{path}.duration"),
                format!("must be finite and > 0, got {}", phase.duration),
            ));
        }
        let mut listed = BTreeSet::new();
        for (j, mode) in phase.modes.iter().enumerate() {
            let mode_path = format!("{path}.mode[{j}]");
            if mode.pair == 0 || mode.pair > m {
                return Err(invalid(
                    format!("{mode_path}.pair"),
                    format!("pair {} out of range for {m} pairs", mode.pair),
                ));
            }
            if !listed.insert(mode.pair) {
                return Err(invalid(
                    format!("{mode_path}.pair"),
                    format!("pair {} listed twice in this phase", mode.pair),
                ));
            }
            match mode.kind {
                ModeKind::Sliced => {
                    any_sliced = true;
                    match mode.slices {
                        Some(n) if n >= 1 => {}
                        Some(_) => {
                            return Err(invalid(format!("{mode_path}.slices"), "must be >= 1"))
                        }
                        None if config.sweep.is_some() => {
                            // The sweep will supply the count.
                        }
                        None => {
                            return Err(invalid(
                                format!("{mode_path}.slices"),
                                "required for sliced mode (or provide a [sweep])",
                            ))
                        }
                    }
                    if let Some(keep) = &mode.keep {
                        let qubit = parse_qubit_in_range(
                            &keep.qubit,
                            m,
                            &format!("{mode_path}.keep.qubit"),
                        )?;
                        if qubit.pair() != mode.pair {
                            return Err(invalid(
                                format!("{mode_path}.keep.qubit"),
                                format!("must belong to pair {}, got {}", mode.pair, keep.qubit),
                            ));
                        }
                        if keep.value > 1 {
                            return Err(invalid(
                                format!("{mode_path}.keep.value"),
                                format!("must be 0 or 1, got {}", keep.value),
                            ));
                        }
                    }
                }
                ModeKind::Free | ModeKind::IdealFrozen => {
                    if mode.slices.is_some() {
                        return Err(invalid(
                            format!("{mode_path}.slices"),
                            "only valid for sliced mode",
                        ));
                    }
                    if mode.keep.is_some() {
                        return Err(invalid(
                            format!("{mode_path}.keep"),
                            "only valid for sliced mode",
                        ));
                    }
                }
            }
        }
    }

    validate_state(&config.initial, config, "initial")?;

    for (i, observable) in config.observables.iter().enumerate() {
        let path = format!("observable[{i}]");
        match observable.kind {
            ObservableKind::Concurrence => {
                if observable.target.is_some() {
                    return Err(invalid(format!("{path}.target"), "only valid for fidelity"));
                }
                let qubits = observable.qubits.as_ref().ok_or_else(|| {
                    invalid(format!("{path}.qubits"), "concurrence needs two qubits")
                })?;
                if qubits.len() != 2 {
                    return Err(invalid(
                        format!("{path}.qubits"),
                        format!("concurrence needs exactly two qubits, got {}", qubits.len()),
                    ));
                }
                let q1 = parse_qubit_in_range(&qubits[0], m, &format!("{path}.qubits[0]"))?;
                let q2 = parse_qubit_in_range(&qubits[1], m, &format!("{path}.qubits[1]"))?;
                if q1 == q2 {
                    return Err(invalid(format!("{path}.qubits"), "the two qubits must differ"));
                }
            }
            ObservableKind::Fidelity => {
                if observable.qubits.is_some() {
                    return Err(invalid(format!("{path}.qubits"), "not valid for fidelity"));
                }
                let target = observable.target.as_ref().ok_or_else(|| {
                    invalid(format!("{path}.target"), "fidelity needs a target state")
                })?;
                validate_state(target, config, &format!("{path}.target"))?;
            }
            ObservableKind::Excitation => {
                if observable.target.is_some() {
                    return Err(invalid(format!("{path}.target"), "only valid for fidelity"));
                }
                if let Some(qubits) = &observable.qubits {
                    if qubits.is_empty() {
                        return Err(invalid(
                            format!("{path}.qubits"),
                            "omit the list entirely for total excitation",
                        ));
                    }
                    let mut ids = BTreeSet::new();
                    for (j, name) in qubits.iter().enumerate() {
                        let q = parse_qubit_in_range(name, m, &format!("{path}.qubits[{j}]"))?;
                        if !ids.insert((q.pair(), q.role() == Role::Upper)) {
                            return Err(invalid(
                                format!("{path}.qubits[{j}]"),
                                format!("{name} listed twice"),
                            ));
                        }
                    }
                }
            }
        }
    }

    if config.sampling.points == 0 {
        return Err(invalid("sampling.points", "must be >= 1"));
    }

    if let Some(sweep) = &config.sweep {
        if sweep.values.is_empty() {
            return Err(invalid("sweep.values", "must list at least one value"));
        }
        if let Some(zero) = sweep.values.iter().position(|&v| v == 0) {
            return Err(invalid(format!("sweep.values[{zero}]"), "sweep values must be positive"));
        }
        if !any_sliced {
            return Err(invalid(
                "sweep.parameter",
                "sweeping slices requires at least one sliced mode in the schedule",
            ));
        }
    }
    Ok(())
}

fn validate_state(state: &StateSection, config: &ExperimentConfig, path: &str) -> Result<()> {
    let m = config.model.pairs;
    match (&state.preset, &state.term) {
        (Some(_), Some(_)) => {
            return Err(invalid(path, "give either a preset or explicit terms, not both"))
        }
        (None, None) => return Err(invalid(path, "give a preset or explicit terms")),
        _ => {}
    }

    let reject = |field: &str, allowed: &str| -> Error {
        invalid(format!("{path}.{field}"), format!("only valid for {allowed}"))
    };

    if let Some(preset) = state.preset {
        if state.term.is_some() {
            return Err(reject("term", "explicit states"));
        }
        match preset {
            PresetName::SingleExcitation | PresetName::TwoExcitation => {
                if state.coefficients.is_some() {
                    return Err(reject("coefficients", "the ghz-w preset"));
                }
                if state.g.is_some() || state.t.is_some() {
                    return Err(reject("g/t", "the zeno-limit preset"));
                }
                check_amplitude_pair_config(state, path)?;
                if m < 2 {
                    return Err(invalid(
                        path,
                        format!("preset {} needs at least 2 pairs", preset.label()),
                    ));
                }
            }
            PresetName::WState => {
                for (name, given) in [
                    ("alpha", state.alpha.is_some()),
                    ("beta", state.beta.is_some()),
                    ("coefficients", state.coefficients.is_some()),
                    ("g", state.g.is_some()),
                    ("t", state.t.is_some()),
                ] {
                    if given {
                        return Err(invalid(
                            format!("{path}.{name}"),
                            "the w-state preset takes no parameters",
                        ));
                    }
                }
            }
            PresetName::GhzW => {
                if state.alpha.is_some() || state.beta.is_some() {
                    return Err(reject("alpha/beta", "the excitation presets"));
                }
                if state.g.is_some() || state.t.is_some() {
                    return Err(reject("g/t", "the zeno-limit preset"));
                }
                if let Some(coefficients) = &state.coefficients {
                    if coefficients.len() != m + 2 {
                        return Err(invalid(
                            format!("{path}.coefficients"),
                            format!(
                                "ghz-w needs M + 2 = {} amplitudes, got {}",
                                m + 2,
                                coefficients.len()
                            ),
                        ));
                    }
                    if coefficients.iter().all(|c| c.value().norm_sqr() == 0.0) {
                        return Err(invalid(
                            format!("{path}.coefficients"),
                            "all amplitudes are zero",
                        ));
                    }
                }
            }
            PresetName::ZenoLimit => {
                if state.coefficients.is_some() {
                    return Err(reject("coefficients", "the ghz-w preset"));
                }
                check_amplitude_pair_config(state, path)?;
                if let Some(g) = state.g {
                    if !g.is_finite() || g < 0.0 {
                        return Err(invalid(
                            format!("{path}.g"),
                            format!("must be finite and >= 0, got {g}"),
                        ));
                    }
                }
                if let Some(t) = state.t {
                    if !t.is_finite() || t < 0.0 {
                        return Err(invalid(
                            format!("{path}.t"),
                            format!("must be finite and >= 0, got {t}"),
                        ));
                    }
                }
                if m != 2 {
                    return Err(invalid(
                        path,
                        "the zeno-limit preset is defined for exactly 2 pairs",
                    ));
                }
            }
        }
    }

    if let Some(terms) = &state.term {
        for (name, given) in [
            ("alpha", state.alpha.is_some()),
            ("beta", state.beta.is_some()),
            ("coefficients", state.coefficients.is_some()),
            ("g", state.g.is_some()),
            ("t", state.t.is_some()),
        ] {
            if given {
                return Err(invalid(format!("{path}.{name}"), "only valid with a preset"));
            }
        }
        if terms.is_empty() {
            return Err(invalid(format!("{path}.term"), "at least one term is required"));
        }
        for (i, term) in terms.iter().enumerate() {
            let mut listed = BTreeSet::new();
            for (j, name) in term.excited.iter().enumerate() {
                let q = parse_qubit_in_range(name, m, &format!("{path}.term[{i}].excited[{j}]"))?;
                if !listed.insert((q.pair(), q.role() == Role::Upper)) {
                    return Err(invalid(
                        format!("{path}.term[{i}].excited[{j}]"),
                        format!("{name} listed twice"),
                    ));
                }
            }
        }
    }

    if let Some(pulse) = &state.pi_pulse {
        let mut listed = BTreeSet::new();
        for (j, pair) in pulse.iter().enumerate() {
            if *pair == 0 || *pair > m {
                return Err(invalid(
                    format!("{path}.pi-pulse[{j}]"),
                    format!("pair {pair} out of range for {m} pairs"),
                ));
            }
            if !listed.insert(*pair) {
                return Err(invalid(
                    format!("{path}.pi-pulse[{j}]"),
                    format!("pair {pair} listed twice"),
                ));
            }
        }
    }
    Ok(())
}

fn check_amplitude_pair_config(state: &StateSection, path: &str) -> Result<()> {
    let alpha = state.alpha.map_or(std::f64::consts::FRAC_1_SQRT_2.into(), |a| a.value());
    let beta = state.beta.map_or(std::f64::consts::FRAC_1_SQRT_2.into(), |b| b.value());
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(invalid(
            format!("{path}.alpha/beta"),
            format!("|alpha|^2 + |beta|^2 must be 1, got {norm}"),
        ));
    }
    Ok(())
}

/// SHA-256 of the canonical JSON serialization of the parsed config.
/// Formatting-only differences in the TOML text (ordering, whitespace,
/// comments) leave the digest unchanged; any semantic change alters it.
pub fn config_digest(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serialization cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(&canonical);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(out, "{byte:02x}").expect("writing to a String cannot fail");
    }
    out
}

// ---------------------------------------------------------------------------
// Building runtime objects from the config
// ---------------------------------------------------------------------------

fn build_pairs(config: &ExperimentConfig) -> Result<Vec<PairSpec>> {
    let m = config.model.pairs;
    let mut g = vec![1.0; m];
    let mut omega = vec![0.0; m];
    for pair in &config.model.pair_overrides {
        g[pair.index - 1] = pair.g;
        omega[pair.index - 1] = pair.omega;
    }
    (1..=m).map(|k| PairSpec::new(k, g[k - 1], omega[k - 1])).collect()
}

fn amplitude_or_default(spec: Option<ComplexSpec>) -> Complex64 {
    spec.map_or(std::f64::consts::FRAC_1_SQRT_2.into(), |c| c.value())
}

/// Builds the state a [`StateSection`] describes. `pairs` and
/// `schedule_total` supply the zeno-limit defaults (pair 1's coupling and
/// the schedule duration).
fn build_state(
    state: &StateSection,
    num_pairs: usize,
    pairs: &[PairSpec],
    schedule_total: f64,
) -> Result<QubitRegister> {
    let register = if let Some(preset) = state.preset {
        match preset {
            PresetName::SingleExcitation => protocols::shared_excitation_state(
                num_pairs,
                amplitude_or_default(state.alpha),
                amplitude_or_default(state.beta),
            )?,
            PresetName::TwoExcitation => protocols::two_excitation_state(
                num_pairs,
                amplitude_or_default(state.alpha),
                amplitude_or_default(state.beta),
            )?,
            PresetName::WState => protocols::w_state(num_pairs)?,
            PresetName::GhzW => {
                let coefficients: Vec<Complex64> = match &state.coefficients {
                    Some(list) => list.iter().map(|c| c.value()).collect(),
                    None => vec![Complex64::new(1.0, 0.0); num_pairs + 2],
                };
                protocols::ghz_w_state(num_pairs, &coefficients)?
            }
            PresetName::ZenoLimit => protocols::zeno_limit_state(
                amplitude_or_default(state.alpha),
                amplitude_or_default(state.beta),
                state.g.unwrap_or(pairs[0].g()),
                state.t.unwrap_or(schedule_total),
            )?,
        }
    } else {
        let terms = state.term.as_ref().expect("validated: preset or terms");
        let mut built = Vec::with_capacity(terms.len());
        for term in terms {
            let excited: Vec<QubitId> = term
                .excited
                .iter()
                .map(|name| parse_qubit_name(name).expect("validated earlier"))
                .collect();
            built
                .push((term.amplitude.value(), BasisStateSpec::with_excited(num_pairs, &excited)?));
        }
        QubitRegister::from_superposition(num_pairs, &built)?
    };
    match &state.pi_pulse {
        Some(pulse) => protocols::pi_pulse_image(&register, pulse),
        None => Ok(register),
    }
}

/// Builds the schedule; `slices_override` replaces every sliced count
/// (sweep execution).
fn build_schedule(
    config: &ExperimentConfig,
    slices_override: Option<usize>,
) -> Result<ZenoSchedule> {
    let mut phases = Vec::with_capacity(config.schedule.phases.len());
    for phase_section in &config.schedule.phases {
        let mut phase = Phase::free(phase_section.duration);
        for mode_section in &phase_section.modes {
            let mode = match mode_section.kind {
                ModeKind::Free => PairMode::Free,
                ModeKind::IdealFrozen => PairMode::IdealFrozen,
                ModeKind::Sliced => {
                    let slices = match slices_override {
                        Some(n) => n,
                        None => mode_section
                            .slices
                            .ok_or(Error::InvalidParameter { name: "slices", value: 0.0 })?,
                    };
                    let projector = match &mode_section.keep {
                        Some(keep) => Projector {
                            target: parse_qubit_name(&keep.qubit).expect("validated earlier"),
                            kept_value: keep.value == 1,
                        },
                        None => Projector::keep_ground(QubitId::upper(mode_section.pair)),
                    };
                    PairMode::SlicedZeno { projector, slices }
                }
            };
            phase = phase.with_mode(mode_section.pair, mode);
        }
        phases.push(phase);
    }
    Ok(ZenoSchedule::new(phases))
}

enum Observable {
    Concurrence(QubitId, QubitId),
    Fidelity(QubitRegister),
    Excitation(Option<Vec<QubitId>>),
}

impl Observable {
    fn evaluate(&self, state: &QubitRegister) -> Result<f64> {
        match self {
            Observable::Concurrence(q1, q2) => metrics::concurrence_between(state, *q1, *q2),
            Observable::Fidelity(target) => state.fidelity(target),
            Observable::Excitation(None) => Ok(metrics::excitation_expectation(state)),
            Observable::Excitation(Some(qubits)) => metrics::excitation_of(state, qubits),
        }
    }
}

fn qubit_list_label(qubits: &[QubitId], separator: char) -> String {
    let mut label = String::new();
    for (i, q) in qubits.iter().enumerate() {
        if i > 0 {
            label.push(separator);
        }
        label.push_str(&q.to_string());
    }
    label
}

fn build_observables(
    config: &ExperimentConfig,
    pairs: &[PairSpec],
    schedule_total: f64,
) -> Result<Vec<(String, Observable)>> {
    let m = config.model.pairs;
    let mut built = Vec::with_capacity(config.observables.len());
    for section in &config.observables {
        match section.kind {
            ObservableKind::Concurrence => {
                let qubits = section.qubits.as_ref().expect("validated earlier");
                let q1 = parse_qubit_name(&qubits[0]).expect("validated earlier");
                let q2 = parse_qubit_name(&qubits[1]).expect("validated earlier");
                let name = format!("concurrence({})", qubit_list_label(&[q1, q2], ':'));
                built.push((name, Observable::Concurrence(q1, q2)));
            }
            ObservableKind::Fidelity => {
                let target_section = section.target.as_ref().expect("validated earlier");
                let target = build_state(target_section, m, pairs, schedule_total)?;
                let label = target_section.preset.map_or("target", |preset| preset.label());
                built.push((format!("fidelity({label})"), Observable::Fidelity(target)));
            }
            ObservableKind::Excitation => match &section.qubits {
                None => built.push(("excitation(total)".to_string(), Observable::Excitation(None))),
                Some(names) => {
                    let qubits: Vec<QubitId> = names
                        .iter()
                        .map(|name| parse_qubit_name(name).expect("validated earlier"))
                        .collect();
                    let name = format!("excitation({})", qubit_list_label(&qubits, '+'));
                    built.push((name, Observable::Excitation(Some(qubits))));
                }
            },
        }
    }
    Ok(built)
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Runs a validated config to a report. The pipeline contains no
/// randomness: a fixed config always yields identical rows, and the sweep
/// branch parallelizes over values while keeping row order fixed by the
/// value list.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    validate_config(config)?;

    let pairs = build_pairs(config)?;
    let base_schedule = build_schedule(config, config.sweep.as_ref().map(|_| 1))?;
    let total = base_schedule.total_duration();
    let initial = build_state(&config.initial, config.model.pairs, &pairs, total)?;
    let observables = build_observables(config, &pairs, total)?;

    let rows: Vec<ReportRow> = match &config.sweep {
        Some(sweep) => {
            let per_value: Vec<Vec<ReportRow>> = sweep
                .values
                .par_iter()
                .map(|&value| -> Result<Vec<ReportRow>> {
                    let schedule = build_schedule(config, Some(value as usize))?;
                    let record = run_schedule(&initial, &pairs, &schedule)?;
                    observables
                        .iter()
                        .map(|(name, observable)| {
                            Ok(ReportRow {
                                sample: value as f64,
                                observable: name.clone(),
                                value: observable.evaluate(&record.final_state)?,
                                survival: record.survival_probability,
                            })
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            per_value.into_iter().flatten().collect()
        }
        None => {
            let points = config.sampling.points;
            let times: Vec<f64> = if points == 1 {
                vec![total]
            } else {
                (0..points).map(|i| total * i as f64 / (points - 1) as f64).collect()
            };
            let sampled = sample_schedule(&initial, &pairs, &base_schedule, &times)?;
            let mut rows = Vec::with_capacity(sampled.len() * observables.len());
            for point in &sampled {
                for (name, observable) in &observables {
                    rows.push(ReportRow {
                        sample: point.time,
                        observable: name.clone(),
                        value: observable.evaluate(&point.state)?,
                        survival: point.survival,
                    });
                }
            }
            rows
        }
    };

    for row in &rows {
        if !row.value.is_finite() || !row.survival.is_finite() {
            return Err(Error::InvalidParameter { name: "report value", value: row.value });
        }
    }

    Ok(ExperimentReport {
        metadata: ReportMetadata {
            config_digest: config_digest(config),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
        rows,
    })
}
