//! `bathtub`: prior draws, hazard curves, simulated data, likelihoods,
//! Kaplan-Meier curves and the self-check suite.

mod config;
mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bathtub_core::empirical::kaplan_meier;
use bathtub_core::inference::log_likelihood;
use bathtub_core::models::simulate_dataset;
use bathtub_core::validation::{self, ValidationOptions};
use bathtub_core::{Dataset, HazardFunction};
use clap::{Args, Parser, Subcommand};

use config::{load_model, RunConfig, Sidecar, STREAM_SAMPLES};

#[derive(Parser)]
#[command(name = "bathtub", version, about = "Gamma Process hazard-rate models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON run configuration (or a sidecar written by `simulate`).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Gamma Process draw; writes JSON plus a `k,theta,weight` CSV.
    Draw {
        #[command(flatten)]
        common: Common,
        /// 1 for `G` / `G1`, 2 for `G2`.
        #[arg(long, default_value_t = 1)]
        component: u8,
    },
    /// Tabulate hazard, cumulative hazard, density and survival.
    Curves {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Simulate a `time,status` dataset; writes a JSON sidecar next to it.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Log-likelihood of a dataset under a model.
    Loglik {
        #[command(flatten)]
        common: Common,
        /// Frozen model: a model JSON or a `simulate` sidecar. Without it
        /// the model is built from the config and seed.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Kaplan-Meier survival curve of a dataset.
    Km {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Run the self-check suite; exits non-zero if any check fails.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn with_output(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = create(path)?;
            body(&mut w)
                .and_then(|_| w.flush())
                .with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).and_then(|_| lock.flush()).context("cannot write to stdout")
        }
    }
}

/// `out` with extension `ext`, or `out.<suffix>` if that would collide.
fn companion(out: &Path, ext: &str, suffix: &str) -> PathBuf {
    let p = out.with_extension(ext);
    if p == out {
        let mut s = out.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    } else {
        p
    }
}

fn cmd_draw(common: &Common, component: u8) -> Result<()> {
    let cfg = load_config(common)?;
    let draw = cfg.draw(component)?;
    let json = serde_json::to_string_pretty(&draw)?;
    with_output(common.out.as_deref(), |w| writeln!(w, "{json}"))?;
    if let Some(out) = &common.out {
        let csv = companion(out, "csv", ".atoms.csv");
        with_output(Some(&csv), |w| {
            writeln!(w, "k,theta,weight")?;
            for (k, (theta, weight)) in draw.atoms().enumerate() {
                writeln!(w, "{},{theta},{weight}", k + 1)?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// Evenly spaced grid on `[0, tmax]` plus `(b-, b)` at each breakpoint.
fn curve_grid(tmax: f64, points: usize, breakpoints: &[f64]) -> Result<Vec<f64>> {
    if !(tmax > 0.0 && tmax.is_finite()) {
        bail!("tmax must be positive and finite, got {tmax}");
    }
    if points < 2 {
        bail!("points must be at least 2, got {points}");
    }
    let step = tmax / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| (i as f64 * step).min(tmax)).collect();
    for &b in breakpoints.iter().filter(|b| **b > 0.0 && **b <= tmax) {
        grid.push(b.next_down());
        grid.push(b);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn cmd_curves(common: &Common, model: Option<String>, tmax: Option<f64>, points: Option<usize>) -> Result<()> {
    let mut cfg = load_config(common)?;
    if let Some(m) = model {
        cfg.model = m;
    }
    cfg.tmax = tmax.unwrap_or(cfg.tmax);
    cfg.points = points.unwrap_or(cfg.points);
    let cfg = cfg.resolved()?;
    let model = cfg.build_model()?;
    let grid = curve_grid(cfg.tmax, cfg.points, &model.breakpoints())?;
    with_output(common.out.as_deref(), |w| {
        writeln!(w, "t,hazard,cum_hazard,density,survival")?;
        for t in grid {
            let big = HazardFunction::cum_hazard(&model, t);
            let s = (-big).exp();
            let h = HazardFunction::hazard(&model, t);
            let f = if s > 0.0 { h * s } else { 0.0 };
            writeln!(w, "{t},{h},{big},{f},{s}")?;
        }
        Ok(())
    })
}

fn cmd_simulate(common: &Common, model: Option<String>, n: Option<usize>, tau: Option<f64>) -> Result<()> {
    let mut cfg = load_config(common)?;
    if let Some(m) = model {
        cfg.model = m;
    }
    cfg.n = n.unwrap_or(cfg.n);
    if tau.is_some() {
        cfg.tau = tau;
    }
    let cfg = cfg.resolved()?;
    let model = cfg.build_model()?;
    let data = simulate_dataset(&model, cfg.n, cfg.tau, &mut cfg.stream(STREAM_SAMPLES))?;
    with_output(common.out.as_deref(), |w| data.write_csv(w))?;
    if let Some(out) = &common.out {
        let sidecar = Sidecar {
            config: cfg,
            model: model.spec(),
        };
        let json = serde_json::to_string_pretty(&sidecar)?;
        with_output(Some(&companion(out, "json", ".sidecar.json")), |w| writeln!(w, "{json}"))?;
    }
    Ok(())
}

fn cmd_loglik(common: &Common, model: Option<&Path>, data: &Path, tau: Option<f64>) -> Result<()> {
    let cfg = load_config(common)?;
    // A sidecar also carries the horizon its data were simulated with.
    let sidecar_tau = model.and_then(|p| RunConfig::load(p).ok()).and_then(|c| c.tau);
    let tau = tau.or(cfg.tau).or(sidecar_tau);
    let model = match model {
        Some(path) => load_model(path)?,
        None => cfg.resolved()?.build_model()?,
    };
    let data = Dataset::from_csv_path(data, tau)?;
    let ll = log_likelihood(&model, &data)?;
    let line = format::general(ll, 12);
    with_output(common.out.as_deref(), |w| writeln!(w, "{line}"))
}

fn cmd_km(common: &Common, data: &Path, tau: Option<f64>) -> Result<()> {
    let data = Dataset::from_csv_path(data, tau)?;
    let curve = kaplan_meier(&data);
    with_output(common.out.as_deref(), |w| curve.write_csv(w))
}

fn cmd_validate(common: &Common, tolerance_scale: f64) -> Result<bool> {
    if !(tolerance_scale >= 0.0 && tolerance_scale.is_finite()) {
        bail!("tolerance scale must be finite and >= 0, got {tolerance_scale}");
    }
    let seed = match &common.config {
        Some(path) if common.seed.is_none() => RunConfig::load(path)?.seed,
        _ => common.seed.unwrap_or(validation::DEFAULT_SEED),
    };
    let opts = ValidationOptions {
        seed,
        tolerance_scale,
    };
    let results = validation::run_all(&opts)?;
    let passed = results.iter().filter(|r| r.passed).count();
    with_output(common.out.as_deref(), |w| {
        writeln!(w, "seed {seed}, tolerance scale {tolerance_scale}")?;
        for r in &results {
            writeln!(w, "{r}")?;
        }
        writeln!(w, "{passed}/{} checks passed", results.len())
    })?;
    Ok(passed == results.len())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Draw { common, component } => cmd_draw(&common, component)?,
        Command::Curves {
            common,
            model,
            tmax,
            points,
        } => cmd_curves(&common, model, tmax, points)?,
        Command::Simulate { common, model, n, tau } => cmd_simulate(&common, model, n, tau)?,
        Command::Loglik {
            common,
            model,
            data,
            tau,
        } => cmd_loglik(&common, model.as_deref(), &data, tau)?,
        Command::Km { common, data, tau } => cmd_km(&common, &data, tau)?,
        Command::Validate {
            common,
            tolerance_scale,
        } => return cmd_validate(&common, tolerance_scale),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_pairs_breakpoints() {
        let g = curve_grid(2.0, 3, &[0.5, 1.0, 7.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.5f64.next_down(), 0.5, 1.0f64.next_down(), 1.0, 2.0]);
        assert!(curve_grid(0.0, 3, &[]).is_err());
        assert!(curve_grid(1.0, 1, &[]).is_err());
    }

    #[test]
    fn companion_paths() {
        assert_eq!(companion(Path::new("d/x.csv"), "json", ".s.json"), PathBuf::from("d/x.json"));
        assert_eq!(companion(Path::new("x.json"), "json", ".s.json"), PathBuf::from("x.json.s.json"));
    }
}
