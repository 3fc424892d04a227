//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure. Criteria 1-9 run the library self-checks at the default
//! seed; criterion 10 runs every CLI command twice and compares bytes.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use bathtub_core::validation::{run_criterion, CheckResult, ValidationOptions};

const TITLES: [&str; 10] = [
    "inversion round trip, 1e4 targets, 1e-9 max(1,x)",
    "quadrature vs cumulative hazard, 20 points, 1e-6 rel",
    "KS distance < 0.025, n = 1e4 per model",
    "truncation tail mass (k = 4 within 3 SE, k = 40 ~ 1e-5)",
    "model identities, 1e3 points, 1e-12 rel",
    "shape invariants",
    "likelihood: log L = -8, grid MLE within 1e-6",
    "Kaplan-Meier: 1 - ECDF (n = 200) and hand example",
    "defective tails and censoring at tau",
    "CLI determinism: byte-identical reruns",
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bathtub"))
}

fn run_in(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin()
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`bathtub {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

/// Every file in `dir` plus stdout, keyed by name.
fn snapshot(dir: &Path, stdout: Vec<u8>) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .expect("readable temp dir")
        .map(|e| {
            let e = e.expect("dir entry");
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).expect("readable file"))
        })
        .collect();
    files.sort();
    files.push(("<stdout>".into(), stdout));
    files
}

fn determinism() -> Result<String, String> {
    let shared = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = shared.path().join("config.json");
    fs::write(&config, r#"{"model": "mbt", "n": 300, "tau": 4.0, "points": 101}"#).map_err(|e| e.to_string())?;
    let data = shared.path().join("data.csv");
    run_in(shared.path(), &["simulate", "--config", "config.json", "--seed", "5", "--out", "data.csv"])?;
    let cfg = config.to_str().unwrap();
    let data = data.to_str().unwrap();
    let sidecar = shared.path().join("data.json");
    let sidecar = sidecar.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["draw", "--config", cfg, "--seed", "11", "--out", "g.json"],
        vec!["draw", "--config", cfg, "--seed", "11", "--component", "2", "--out", "g2.json"],
        vec!["curves", "--config", cfg, "--seed", "11", "--out", "curves.csv"],
        vec!["simulate", "--config", cfg, "--seed", "11", "--out", "sim.csv"],
        vec!["loglik", "--config", cfg, "--seed", "11", "--data", data],
        vec!["loglik", "--model", sidecar, "--data", data, "--out", "ll.txt"],
        vec!["km", "--data", data, "--tau", "4", "--out", "km.csv"],
        vec!["validate", "--seed", "11", "--out", "report.txt"],
    ];
    for args in &commands {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let stdout = run_in(dir.path(), args)?;
            runs.push(snapshot(dir.path(), stdout));
        }
        if runs[0] != runs[1] {
            return Err(format!("`bathtub {}` differs between runs", args[0]));
        }
        if runs[0].iter().all(|(_, bytes)| bytes.is_empty()) {
            return Err(format!("`bathtub {}` produced no output", args[0]));
        }
    }
    Ok(format!("{} commands byte-identical", commands.len()))
}

fn summarize(results: &[CheckResult]) -> String {
    let worst = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect::<Vec<_>>();
    if worst.is_empty() {
        format!("{} checks", results.len())
    } else {
        format!("failed: {}", worst.join("; "))
    }
}

fn main() -> ExitCode {
    let opts = ValidationOptions::default();
    let mut failures = 0;
    println!("\nacceptance (seed {})", opts.seed);
    for criterion in 1..=10u8 {
        let start = Instant::now();
        let (passed, detail, lines) = if criterion == 10 {
            match determinism() {
                Ok(msg) => (true, msg, Vec::new()),
                Err(msg) => (false, msg, Vec::new()),
            }
        } else {
            match run_criterion(criterion, &opts) {
                Ok(results) => (
                    !results.is_empty() && results.iter().all(|r| r.passed),
                    summarize(&results),
                    results.iter().map(|r| r.to_string()).collect(),
                ),
                Err(e) => (false, format!("error: {e}"), Vec::new()),
            }
        };
        failures += usize::from(!passed);
        println!(
            "{} criterion {:>2}: {} ({detail}, {:.1?})",
            if passed { "PASS" } else { "FAIL" },
            criterion,
            TITLES[usize::from(criterion) - 1],
            start.elapsed()
        );
        for line in lines {
            println!("      {line}");
        }
    }
    println!("\n{} of 10 criteria passed\n", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
