//! Simulator for measurement-driven control of exchange-coupled qubit pairs.
//!
//! The system is a register of 2M qubits arranged as M independent pairs
//! (a_k, A_k). Each pair evolves under its own exchange Hamiltonian
//!
//! ```text
//! H_k = ω σz(a_k) + ω σz(A_k) + g_k (σ−(a_k) σ+(A_k) + σ+(a_k) σ−(A_k))
//! ```
//!
//! (ħ = 1 throughout). Pair Hamiltonians act on disjoint qubits and commute,
//! so the global propagator factorizes into 4×4 pair propagators. On top of
//! that free dynamics, the crate implements sliced projective control: an
//! evolution window of duration T is cut into N slices, and after each slice
//! a single-qubit projector is applied to the monitored pair. Frequent
//! projection inhibits the pair's excitation exchange (the quantum Zeno
//! effect), which is what the swap and transfer protocols exploit.
//!
//! Modules, bottom up:
//!
//! * [`register`] — state vectors over M pairs and basis bookkeeping.
//! * [`dynamics`] — analytic pair propagators and gate application.
//! * [`dense`] — a dense matrix-exponential oracle used to cross-check the
//!   analytic path on small registers.
//! * [`zeno`] — projectors, sliced schedules, and survival accounting.
//! * [`metrics`] — reduced two-qubit states, concurrence, excitation counts.
//! * [`protocols`] — entanglement swap and transfer plans plus the matching
//!   closed-form states.
//! * [`experiment`] — declarative experiment configs and the deterministic
//!   runner behind the CLI.
//! * [`report`] — CSV / JSON-lines emission of experiment results.

pub mod dense;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod protocols;
pub mod register;
pub mod report;
pub mod zeno;

pub use error::{Error, Result};
pub use register::{BasisStateSpec, QubitId, QubitRegister, Role};
