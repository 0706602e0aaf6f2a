//! `aoasim`: simulate arrival-angle spectra, sweep transmit beamwidths, score
//! against measured spectra and extract taps from a delay profile.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use aoasim::experiment::{Execution, Scenario, STANDARD_HPBW_SWEEP};
use aoasim::{estimation, experiment, io, AngularSpectrum, CompositeAoa, RunReport};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "aoasim", version, about = "Geometry-based angle-of-arrival simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    /// Number of Monte Carlo trials (overrides the scenario)
    #[arg(long)]
    trials: Option<usize>,
    /// Number of histogram bins over (-180, 180] degrees (overrides the scenario)
    #[arg(long)]
    bins: Option<usize>,
    /// Master seed (overrides the scenario)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Run trials on a single thread
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn load(&self) -> Result<Scenario> {
        let config = io::read_scenario(&self.scenario)?;
        let scenario = Scenario::from_config(config)
            .with_context(|| format!("loading {}", self.scenario.display()))?;
        Ok(scenario.with_run_settings(self.trials, self.bins, self.seed)?)
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn out_dir(&self) -> Result<&Path> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        Ok(&self.out)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run all trials of a scenario; writes spectrum.csv and report.json
    Simulate {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Repeat the simulation for several Gaussian beamwidths; writes sweep.csv
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Half-power beamwidths in degrees
        #[arg(long, value_delimiter = ',', default_values_t = STANDARD_HPBW_SWEEP)]
        hpbw: Vec<f64>,
        /// Report the spread of raw path angles instead of the binned spectrum
        #[arg(long)]
        raw_paths: bool,
    },
    /// Least-square error between the model and an empirical spectrum
    Fit {
        #[command(flatten)]
        run: RunArgs,
        /// CSV with columns angle_deg, density_per_deg
        #[arg(long)]
        empirical: PathBuf,
    },
    /// Extract delay taps from a power delay profile
    Taps {
        /// CSV with columns delay_us, power (linear)
        #[arg(long)]
        pdp: PathBuf,
        /// Minimum peak prominence in dB
        #[arg(long, default_value_t = experiment::DEFAULT_PROMINENCE_DB)]
        prominence: f64,
        /// Path count assigned to every tap
        #[arg(long, default_value_t = experiment::DEFAULT_PATHS)]
        paths: usize,
    },
}

fn summary(report: &RunReport) -> serde_json::Value {
    json!({
        "angle_spread_deg": report.angle_spread_deg,
        "standard_error_deg": report.standard_error.to_degrees(),
        "raw_path_angle_spread_deg": report.raw_path_angle_spread.to_degrees(),
        "point_mass_at_zero": report.averaged_spectrum.point_mass,
        "trials": report.per_trial_spreads.len(),
    })
}

fn simulate(run: &RunArgs) -> Result<()> {
    let scenario = run.load()?;
    let report = experiment::run_simulation_with(&scenario, run.execution())?;
    let out = run.out_dir()?;
    io::write_spectrum_csv(&out.join("spectrum.csv"), &report.averaged_spectrum)?;
    io::write_report_json(&out.join("report.json"), &report)?;
    eprintln!("simulated {} trials in {:.3} s", scenario.trials(), report.elapsed);
    println!("{}", summary(&report));
    Ok(())
}

fn sweep(run: &RunArgs, hpbw: &[f64], raw_paths: bool) -> Result<()> {
    let scenario = run.load()?;
    let points = experiment::hpbw_sweep(&scenario, hpbw, run.execution())?;
    let out = run.out_dir()?;
    for p in &points {
        let stem = format!("hpbw_{}", p.hpbw_deg);
        io::write_spectrum_csv(&out.join(format!("spectrum_{stem}.csv")), &p.report.averaged_spectrum)?;
        io::write_report_json(&out.join(format!("report_{stem}.json")), &p.report)?;
    }
    io::write_sweep_csv(&out.join("sweep.csv"), &points, raw_paths)?;
    let rows: Vec<_> = points
        .iter()
        .map(|p| {
            let mut s = summary(&p.report);
            s["hpbw_deg"] = json!(p.hpbw_deg);
            s
        })
        .collect();
    println!("{}", serde_json::to_string(&rows)?);
    Ok(())
}

fn fit(run: &RunArgs, empirical_path: &Path) -> Result<()> {
    let scenario = run.load()?;
    let empirical = io::read_empirical_csv(empirical_path)?;
    let report = experiment::run_simulation_with(&scenario, run.execution())?;
    let analytic = CompositeAoa::new(scenario.ellipses(), scenario.taps(), scenario.pattern(), scenario.local())?;
    let spectrum: &AngularSpectrum = &report.averaged_spectrum;
    let result = json!({
        "lse_simulated": estimation::lse(spectrum, &empirical)?,
        "lse_analytic": estimation::lse(&analytic, &empirical)?,
        "points": empirical.len(),
        "density_unit": "per_radian",
        "angle_spread_deg": report.angle_spread_deg,
    });
    let out = run.out_dir()?;
    io::write_spectrum_csv(&out.join("spectrum.csv"), spectrum)?;
    io::write_json(&out.join("fit.json"), &result)?;
    println!("{result}");
    Ok(())
}

fn taps(pdp: &Path, prominence: f64, paths: usize) -> Result<()> {
    let samples = io::read_pdp_csv(pdp)?;
    let profile = experiment::extract_taps(&samples, prominence, paths)?;
    let rows: Vec<_> = profile
        .taps()
        .iter()
        .map(|t| json!({"delay_us": t.delay * 1e6, "power": t.power, "paths": t.paths}))
        .collect();
    println!("{}", serde_json::to_string_pretty(&json!({ "taps": rows }))?);
    Ok(())
}

fn error_record(err: &anyhow::Error) -> serde_json::Value {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<aoasim::Error>())
        .map_or("error", aoasim::Error::kind);
    let causes: Vec<String> = err.chain().map(|e| e.to_string()).collect();
    json!({ "error": { "kind": kind, "message": err.to_string(), "causes": causes } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { run } => simulate(run),
        Command::Sweep { run, hpbw, raw_paths } => sweep(run, hpbw, *raw_paths),
        Command::Fit { run, empirical } => fit(run, empirical),
        Command::Taps { pdp, prominence, paths } => taps(pdp, *prominence, *paths),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_record(&err));
            ExitCode::FAILURE
        }
    }
}
