//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Register construction outside the supported pair count.
    #[error("pair count must be between 1 and {max}, got {requested}")]
    PairCountOutOfRange { requested: usize, max: usize },

    /// A pair index k outside 1..=M.
    #[error("pair index {index} out of range for a register of {num_pairs} pairs")]
    PairIndexOutOfRange { index: usize, num_pairs: usize },

    /// The same pair appears twice in a coupling list or mode map.
    #[error("pair index {0} listed more than once")]
    DuplicatePairIndex(usize),

    /// A schedule references a pair with no coupling spec.
    #[error("no coupling spec supplied for pair {0}")]
    MissingPairSpec(usize),

    /// Two registers of different size were combined.
    #[error("register size mismatch: {left} pairs vs {right} pairs")]
    RegisterSizeMismatch { left: usize, right: usize },

    /// A basis-state spec must mention every qubit of the register exactly once.
    #[error("basis state spec {0} qubit {1}")]
    BasisSpecCoverage(&'static str, String),

    /// An operation received the same qubit twice where two distinct qubits
    /// are required.
    #[error("qubits must be distinct, got {0} twice")]
    IdenticalQubits(String),

    /// Superposition terms summed (or cancelled) to the zero vector.
    #[error("state has zero norm and cannot be normalized")]
    ZeroNorm,

    /// A projection annihilated the entire state. Carries the position in
    /// the schedule where the survival probability hit zero.
    #[error("projection annihilated the state at phase {phase}, slice {slice}")]
    ZeroSurvival { phase: usize, slice: usize },

    /// A numeric parameter was NaN or infinite (or negative where a
    /// non-negative value is required).
    #[error("invalid numeric parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// The closed-form concurrence only covers the equal-coupling regime.
    #[error("closed-form concurrence requires g1 = g2, got g1 = {g1}, g2 = {g2}")]
    UnequalCouplings { g1: f64, g2: f64 },

    /// The transfer protocol assumes one shared coupling constant.
    #[error(
        "transfer requires a uniform coupling, pair {pair} has g = {g} but expected {expected}"
    )]
    NonUniformCoupling { pair: usize, g: f64, expected: f64 },

    /// A matrix handed to the entanglement metrics is not a density matrix.
    #[error("not a valid two-qubit density matrix: {0}")]
    InvalidDensity(&'static str),

    /// The dense oracle is restricted to small registers.
    #[error("dense oracle supports at most {max} pairs, got {requested}")]
    OracleTooLarge { requested: usize, max: usize },

    /// Config text that is not well-formed TOML (or has the wrong shape).
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// Config that parsed but fails semantic validation. `path` names the
    /// offending field.
    #[error("config field `{path}`: {message}")]
    ConfigValidation { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: parse errors, validation errors
    /// and zero-survival outcomes are distinguishable to calling scripts.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::ConfigParse(_) => 2,
            Error::ConfigValidation { .. } => 3,
            Error::ZeroSurvival { .. } => 4,
            _ => 1,
        }
    }
}
