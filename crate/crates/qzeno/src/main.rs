//! `qzeno` — batch front-end over the experiment runner.
//!
//! Subcommands either load a TOML config (`run`) or assemble one from
//! flags (`swap`, `transfer`, `zeno-scan`); everything then flows through
//! the same deterministic pipeline. Exit codes: 0 success, 2 config parse
//! error, 3 config validation error, 4 zero survival probability,
//! 1 anything else. Set `QZENO_THREADS` to pin the worker-thread count.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qzeno::experiment::{
    parse_config, run_experiment, ExperimentConfig, KeepSection, ModeKind, ModeSection,
    ModelSection, ObservableKind, ObservableSection, PairSection, PhaseSection, PresetName,
    SamplingSection, ScheduleSection, StateSection, SweepParameter, SweepSection,
};
use qzeno::protocols::{plan_swap, plan_transfer, FreezeKind};
use qzeno::report::{emit_csv, emit_jsonl};

#[derive(Parser)]
#[command(
    name = "qzeno",
    version,
    about = "Measurement-driven (quantum Zeno) control of exchange-coupled qubit pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a TOML experiment config.
    Run {
        /// Path to the config file.
        config: PathBuf,
    },
    /// Move a shared excitation from the lower to the upper partition
    /// (2 pairs; the faster pair is frozen until the couplings line up).
    Swap {
        /// Coupling of pair 1.
        #[arg(long)]
        g1: f64,
        /// Coupling of pair 2.
        #[arg(long)]
        g2: f64,
        /// Freeze with this many projective slices; ideal freezing when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Number of trace sample points.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Move the lower-partition state of the driven pairs upward while the
    /// rest are frozen.
    Transfer {
        /// Number of pairs.
        #[arg(long)]
        m: usize,
        /// Driven pairs, comma separated (e.g. 1,2).
        #[arg(long, value_delimiter = ',')]
        active: Vec<usize>,
        /// Freeze with this many projective slices; ideal freezing when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Shared coupling of the driven pairs.
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        /// Number of trace sample points.
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Sweep the slice count N and report convergence toward the
    /// perfectly-frozen limit (2 pairs, g = 1, pair 2 monitored).
    ZenoScan {
        /// Total evolution time of the free pair.
        #[arg(long)]
        t: f64,
        /// Slice counts, comma separated (e.g. 1,2,4,8,16).
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<u64>,
    },
}

fn freeze_kind(n: Option<usize>) -> FreezeKind {
    n.map_or(FreezeKind::Ideal, FreezeKind::Sliced)
}

fn freeze_mode(pair: usize, n: Option<usize>) -> ModeSection {
    ModeSection {
        pair,
        kind: if n.is_some() { ModeKind::Sliced } else { ModeKind::IdealFrozen },
        slices: n,
        keep: n.map(|_| KeepSection { qubit: format!("A{pair}"), value: 0 }),
    }
}

fn concurrence_observable(first: &str, second: &str) -> ObservableSection {
    ObservableSection {
        kind: ObservableKind::Concurrence,
        qubits: Some(vec![first.to_string(), second.to_string()]),
        target: None,
    }
}

fn swap_config(
    g1: f64,
    g2: f64,
    n: Option<usize>,
    points: usize,
) -> qzeno::Result<ExperimentConfig> {
    let plan = plan_swap(g1, g2, freeze_kind(n))?;
    let mut phases = Vec::new();
    if plan.freeze_duration > 0.0 {
        phases.push(PhaseSection {
            duration: plan.freeze_duration,
            modes: vec![freeze_mode(plan.fast_pair, n)],
        });
    }
    phases.push(PhaseSection {
        duration: plan.total_duration - plan.freeze_duration,
        modes: Vec::new(),
    });
    let target = StateSection {
        preset: Some(PresetName::SingleExcitation),
        pi_pulse: Some(vec![1, 2]),
        ..StateSection::default()
    };
    Ok(ExperimentConfig {
        model: ModelSection {
            pairs: 2,
            pair_overrides: vec![
                PairSection { index: 1, g: g1, omega: 0.0 },
                PairSection { index: 2, g: g2, omega: 0.0 },
            ],
        },
        initial: StateSection {
            preset: Some(PresetName::SingleExcitation),
            ..StateSection::default()
        },
        schedule: ScheduleSection { phases },
        observables: vec![
            ObservableSection {
                kind: ObservableKind::Fidelity,
                qubits: None,
                target: Some(target),
            },
            concurrence_observable("A1", "A2"),
            concurrence_observable("a1", "a2"),
        ],
        sampling: SamplingSection { points },
        sweep: None,
    })
}

fn transfer_config(
    m: usize,
    active: &[usize],
    n: Option<usize>,
    g: f64,
    points: usize,
) -> qzeno::Result<ExperimentConfig> {
    let plan = plan_transfer(m, active, g, freeze_kind(n))?;
    let modes: Vec<ModeSection> =
        (1..=m).filter(|k| !plan.active.contains(k)).map(|k| freeze_mode(k, n)).collect();
    let target = StateSection {
        preset: Some(PresetName::GhzW),
        pi_pulse: Some(plan.active.clone()),
        ..StateSection::default()
    };
    Ok(ExperimentConfig {
        model: ModelSection {
            pairs: m,
            pair_overrides: (1..=m).map(|index| PairSection { index, g, omega: 0.0 }).collect(),
        },
        initial: StateSection { preset: Some(PresetName::GhzW), ..StateSection::default() },
        schedule: ScheduleSection {
            phases: vec![PhaseSection { duration: plan.pulse_duration, modes }],
        },
        observables: vec![
            ObservableSection {
                kind: ObservableKind::Fidelity,
                qubits: None,
                target: Some(target),
            },
            ObservableSection { kind: ObservableKind::Excitation, qubits: None, target: None },
        ],
        sampling: SamplingSection { points },
        sweep: None,
    })
}

fn zeno_scan_config(t: f64, n_list: Vec<u64>) -> ExperimentConfig {
    ExperimentConfig {
        model: ModelSection { pairs: 2, pair_overrides: Vec::new() },
        initial: StateSection {
            preset: Some(PresetName::SingleExcitation),
            ..StateSection::default()
        },
        schedule: ScheduleSection {
            phases: vec![PhaseSection {
                duration: t,
                modes: vec![ModeSection {
                    pair: 2,
                    kind: ModeKind::Sliced,
                    slices: None, // supplied by the sweep
                    keep: None,
                }],
            }],
        },
        observables: vec![
            ObservableSection {
                kind: ObservableKind::Fidelity,
                qubits: None,
                target: Some(StateSection {
                    preset: Some(PresetName::ZenoLimit),
                    ..StateSection::default()
                }),
            },
            concurrence_observable("a1", "a2"),
        ],
        sampling: SamplingSection { points: 1 },
        sweep: Some(SweepSection { parameter: SweepParameter::Slices, values: n_list }),
    }
}

fn execute(cli: Cli) -> qzeno::Result<()> {
    let config = match cli.command {
        Command::Run { config } => parse_config(&std::fs::read_to_string(config)?)?,
        Command::Swap { g1, g2, n, points } => swap_config(g1, g2, n, points)?,
        Command::Transfer { m, active, n, g, points } => transfer_config(m, &active, n, g, points)?,
        Command::ZenoScan { t, n_list } => zeno_scan_config(t, n_list),
    };
    let report = run_experiment(&config)?;
    let rendered = match cli.format {
        OutputFormat::Csv => emit_csv(&report),
        OutputFormat::Jsonl => emit_jsonl(&report),
    };
    match cli.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QZENO_THREADS") {
        if let Ok(count) = threads.parse::<usize>() {
            if count > 0 {
                // Ignore failure: the pool may already be initialized.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(count).build_global();
            }
        }
    }
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
