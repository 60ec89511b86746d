//! `cyflow`: validate complexes, report curvature, run the flow, and run the
//! oracle suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use cyflow::complex::{parse_facet_list, Complex};
use cyflow::curvature::{write_curvature_csv, write_curvature_json, CurvatureField};
use cyflow::flow::{random_radii, run_flow, write_summary_json, write_trajectory_csv, FlowConfig};
use cyflow::metric::{read_radii, MetricStructure};
use cyflow::oracle::{run_checks, SweepConfig};

#[derive(Parser)]
#[command(name = "cyflow", version, about = "Combinatorial Yamabe flow on sphere-packing metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a facet list is a closed pseudomanifold.
    Validate {
        #[arg(long)]
        facets: PathBuf,
    },
    /// Write per-vertex curvature with the average and total.
    Curvature {
        #[command(flatten)]
        input: Input,
        /// Seed for `--radii random:..`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; `.json` selects JSON, anything else CSV. Stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the flow and classify how it ends.
    Flow {
        #[command(flatten)]
        input: Input,
        /// JSON file with flow settings; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for trajectory.csv, summary.json and config.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the oracle-vs-analytic sweep on random tetrahedra.
    Check {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file for the JSON report. Stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    facets: PathBuf,
    /// `ones`, `random:<lo>,<hi>` (log-uniform), or a radii file.
    #[arg(long, default_value = "ones")]
    radii: String,
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    normalize: Option<bool>,
    #[arg(long)]
    tol_converge: Option<f64>,
    #[arg(long)]
    delta_collapse: Option<f64>,
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    sample_every: Option<usize>,
    #[arg(long)]
    max_halvings: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut FlowConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(dt, t_max, normalize, tol_converge, delta_collapse, q_min, sample_every, max_halvings, seed);
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 1,
            Self::Invariant(_) => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path, warn_open: bool) -> Result<Complex, CliError> {
    let fl = parse_facet_list(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let c = Complex::new(&fl);
    if warn_open {
        let diag = c.validate_closed();
        if !diag.is_closed() {
            eprintln!("warning: {diag}");
        }
    }
    Ok(c)
}

fn load_radii(arg: &str, c: &Complex, seed: u64) -> Result<MetricStructure<f64>, CliError> {
    if arg == "ones" {
        return Ok(MetricStructure::ones(c.n_vertices()));
    }
    if let Some(range) = arg.strip_prefix("random:") {
        let bad = || CliError::Input(format!("expected random:<lo>,<hi>, got {arg}"));
        let (lo, hi) = range.split_once(',').ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        return random_radii(c.n_vertices(), lo, hi, seed).map_err(input);
    }
    let path = Path::new(arg);
    read_radii(&read(path)?, c).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { facets } => {
            let c = load_complex(&facets, false)?;
            let diag = c.validate_closed();
            println!("{diag}, {} vertices, d_max = {}", c.n_vertices(), c.max_degree());
            if !diag.is_closed() {
                return Err(CliError::Input("not a closed pseudomanifold".into()));
            }
            Ok(())
        }
        Command::Curvature { input: inp, seed, out } => {
            let c = load_complex(&inp.facets, true)?;
            let m = load_radii(&inp.radii, &c, seed)?;
            let field = CurvatureField::compute(&c, &m, FlowConfig::default().q_min).map_err(input)?;
            let json = out.as_deref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            let text = if json { write_curvature_json(&c, &field) } else { write_curvature_csv(&c, &field) };
            match out {
                Some(p) => write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Flow { input: inp, config, out, overrides } => {
            let mut cfg = match &config {
                Some(p) => FlowConfig::from_json(&read(p)?).map_err(input)?,
                None => FlowConfig::default(),
            };
            overrides.apply(&mut cfg);
            cfg.validate().map_err(input)?;
            let c = load_complex(&inp.facets, true)?;
            let m = load_radii(&inp.radii, &c, cfg.seed)?;
            let report = run_flow(&c, &m, &cfg).map_err(input)?;
            let summary = write_summary_json(&report);
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
                write(&dir.join("trajectory.csv"), &write_trajectory_csv(&c, &report))?;
                write(&dir.join("summary.json"), &summary)?;
                write(&dir.join("config.json"), &cfg.to_json())?;
            }
            println!("{summary}");
            if !report.violations.is_empty() {
                let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                return Err(CliError::Invariant(lines.join("\n")));
            }
            Ok(())
        }
        Command::Check { samples, seed, out } => {
            let reports = run_checks(&SweepConfig { samples, seed });
            let text = serde_json::to_string_pretty(&reports).expect("plain data serializes");
            match out {
                Some(p) => write(&p, &text)?,
                None => println!("{text}"),
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.test.as_str()).collect();
            if !failed.is_empty() {
                return Err(CliError::Invariant(format!("failed checks: {}", failed.join(", "))));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are input errors; help and version are not
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
