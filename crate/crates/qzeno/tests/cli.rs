//! End-to-end checks of the command-line binary: exit codes, output
//! destinations and the two output encodings.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_qzeno")
}

fn bundled_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("binary should spawn")
}

fn scratch_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qzeno-cli-{tag}-{}", std::process::id()))
}

#[test]
fn run_executes_a_bundled_config() {
    let config = bundled_config("free-swap.toml");
    let output = run_cli(&["run", config.to_str().unwrap()]);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("sample,observable,value,survival"));
    assert!(lines.next().is_some(), "expected at least one data row");
}

#[test]
fn malformed_toml_exits_with_code_2() {
    let path = scratch_path("malformed.toml");
    std::fs::write(&path, "this is not [ toml").unwrap();
    let output = run_cli(&["run", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn invalid_config_exits_with_code_3() {
    let path = scratch_path("invalid.toml");
    std::fs::write(
        &path,
        "[model]\npairs = 0\n\n[initial]\npreset = \"single-excitation\"\n\n[[schedule.phase]]\nduration = 1.0\n",
    )
    .unwrap();
    let output = run_cli(&["run", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("model.pairs"), "stderr: {stderr}");
}

#[test]
fn annihilating_projection_exits_with_code_4() {
    // The whole excitation sits on pair 1 and the projector insists on
    // finding A2 excited: the very first projection wipes the state out.
    let path = scratch_path("annihilate.toml");
    std::fs::write(
        &path,
        r#"
[model]
pairs = 2

[initial]
preset = "single-excitation"
alpha = 1.0
beta = 0.0

[[schedule.phase]]
duration = 1.0

[[schedule.phase.mode]]
pair = 2
kind = "sliced"
slices = 4
keep = { qubit = "A2", value = 1 }

[[observable]]
kind = "concurrence"
qubits = ["a1", "a2"]
"#,
    )
    .unwrap();
    let output = run_cli(&["run", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("annihilated"), "stderr: {stderr}");
}

#[test]
fn rejected_flag_values_exit_with_code_1() {
    let output = run_cli(&["swap", "--g1", "0", "--g2", "1"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn missing_config_file_exits_with_code_1() {
    let output = run_cli(&["run", "/nonexistent/qzeno-no-such-file.toml"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let out = scratch_path("swap-out.csv");
    let output = run_cli(&[
        "swap",
        "--g1",
        "1.0",
        "--g2",
        "2.0",
        "--points",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    assert!(output.stdout.is_empty(), "report should go to the file, not stdout");
    let written = std::fs::read_to_string(&out).unwrap();
    std::fs::remove_file(&out).ok();
    assert!(written.starts_with("sample,observable,value,survival\n"));
    // 3 sample points x 3 observables.
    assert_eq!(written.lines().count(), 1 + 9);
}

#[test]
fn jsonl_format_starts_with_a_metadata_line() {
    let output = run_cli(&["zeno-scan", "--t", "0.8", "--n-list", "1,2,4", "--format", "jsonl"]);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    let metadata = lines.next().expect("metadata line");
    assert!(metadata.contains("\"config-digest\""), "metadata: {metadata}");
    assert!(metadata.contains("\"tool-version\""), "metadata: {metadata}");
    // 3 sweep values x 2 observables.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert!(row.contains("\"observable\""), "row: {row}");
    }
}

#[test]
fn transfer_reports_conserved_excitation() {
    let output = run_cli(&["transfer", "--m", "3", "--active", "1,2"]);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let excitation: Vec<f64> = stdout
        .lines()
        .skip(1)
        .filter(|line| line.contains("excitation(total)"))
        .map(|line| line.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(excitation.len(), 1);
    // ghz-w default on M = 3: uniform amplitudes over the all-excited term,
    // three singles and the vacuum, i.e. (3 + 3) / 5 excitations.
    assert!((excitation[0] - 6.0 / 5.0).abs() < 1e-12, "got {}", excitation[0]);
}
