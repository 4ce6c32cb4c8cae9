//! `popdyn` command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input or a model that violates a
//! precondition, 3 when the numerics fail.

pub mod input;
pub mod report;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use popdyn_core::{
    analyze, analyze_structure, eventual_limit, fate, iterate, periodic_limits, spectral::spectral_radius_with,
    stabilizing_scale, target_growth_scale, Tolerances, Trajectory,
};

use report::{to_json, ReportPayload, ScalePayload, SimulationSummary};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    Model(popdyn_core::Error),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Output(_) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Output(msg) => f.write_str(msg),
            CliError::Model(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<popdyn_core::Error> for CliError {
    fn from(e: popdyn_core::Error) -> Self {
        CliError::Model(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "popdyn", version, about = "Growth rate, net reproductive rate and dynamics of matrix population models")]
pub struct Cli {
    /// Relative width of the eigenvalue bracket at which power iteration stops
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_spec: Option<f64>,
    /// Slack for comparing r and R0 against 1
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_class: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print growth rate, R0, trichotomy class and structure as JSON
    Analyze { file: PathBuf },
    /// Rescale fertility to growth rate 1 or to a target growth rate
    #[command(group(ArgGroup::new("mode").required(true).args(["stationary", "target_growth"])))]
    Scale {
        file: PathBuf,
        #[arg(long)]
        stationary: bool,
        #[arg(long, value_name = "S")]
        target_growth: Option<f64>,
    },
    /// Iterate the model and write the trajectory as CSV
    Simulate {
        file: PathBuf,
        /// Initial population: comma-separated list or a file with one value per line
        #[arg(long, value_name = "LIST|FILE", allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        steps: usize,
        /// Divide x_k by r^k
        #[arg(long)]
        normalize: bool,
        /// CSV destination (default: standard output)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// JSON summary destination (default: standard error)
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
    },
}

impl Cli {
    fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut tol = Tolerances::default();
        for (name, value, slot) in [
            ("--tol-spec", self.tol_spec, &mut tol.spectral),
            ("--tol-class", self.tol_class, &mut tol.classification),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v < 1.0) {
                    return Err(CliError::Input(format!("{name} must lie in (0, 1), got {v}")));
                }
                *slot = v;
            }
        }
        Ok(tol)
    }
}

/// Runs a parsed command, writing results to `stdout` and diagnostics to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let tol = cli.tolerances()?;
    match &cli.command {
        Command::Analyze { file } => {
            let model = input::read_model(file, tol)?;
            let report = analyze(&model)?;
            emit(stdout, &to_json(&ReportPayload::new(&model, &report)))
        }
        Command::Scale { file, stationary, target_growth } => {
            let model = input::read_model(file, tol)?;
            let scaling = match (stationary, target_growth) {
                (true, _) => stabilizing_scale(&model)?,
                (false, Some(s)) => target_growth_scale(&model, *s)?,
                (false, None) => unreachable!("clap enforces a scaling mode"),
            };
            emit(stdout, &to_json(&ScalePayload::new(&scaling)))
        }
        Command::Simulate { file, x0, steps, normalize, out, summary } => {
            let model = input::read_model(file, tol)?;
            let x0 = input::read_population(x0)?;
            let trajectory = iterate(&model, &x0, *steps, *normalize)?;
            let csv = trajectory_csv(&trajectory, model.order());
            match out {
                Some(path) => write_file(path, &csv)?,
                None => emit(stdout, &csv)?,
            }
            let line = serde_json::to_string(&summarize(&model, &x0, &trajectory)?).expect("summary serializes") + "\n";
            match summary {
                Some(path) => write_file(path, &line),
                None => emit(stderr, &line),
            }
        }
    }
}

fn summarize(model: &popdyn_core::PopulationModel, x0: &[f64], traj: &Trajectory) -> Result<SimulationSummary, CliError> {
    let tol = model.tolerances();
    let structure = analyze_structure(model.projection());
    let mut summary = SimulationSummary {
        steps: traj.steps.len() - 1,
        normalized: traj.normalized,
        growth_rate: spectral_radius_with(model.projection(), tol)?,
        imprimitivity_index: structure.imprimitivity_index.filter(|_| structure.irreducible),
        fate: None,
        limit: None,
        periodic_limits: None,
        note: None,
    };
    if !structure.irreducible {
        summary.note = Some("reducible projection matrix: long-run limits are not computed".into());
    } else if structure.primitive {
        let lim = eventual_limit(model, x0)?;
        summary.fate = Some(lim.fate);
        summary.limit = Some(lim.limit);
    } else {
        let per = periodic_limits(model, x0)?;
        summary.fate = Some(fate(per.growth_rate, tol));
        summary.periodic_limits = Some(per.limits);
        summary.note = Some(format!("period {}: x_k / r^k does not converge, its {} residue subsequences do", per.d, per.d));
    }
    Ok(summary.rounded())
}

pub fn trajectory_csv(traj: &Trajectory, n: usize) -> String {
    let mut out = String::from("step,total");
    for i in 1..=n {
        out.push_str(&format!(",class_{i}"));
    }
    out.push('\n');
    for step in &traj.steps {
        out.push_str(&step.step.to_string());
        for v in std::iter::once(&step.total).chain(&step.population) {
            out.push(',');
            out.push_str(&csv_number(*v));
        }
        out.push('\n');
    }
    out
}

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
fn csv_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn emit(w: &mut dyn Write, text: &str) -> Result<(), CliError> {
    w.write_all(text.as_bytes()).map_err(|e| CliError::Output(format!("write failed: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}
