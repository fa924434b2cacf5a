//! Command-line front end: `detect`, `generate`, `study` and `plot-data`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::stress_difference;
use crate::error::{Error, Result};
use crate::genmodel::{radius_for_degree, sample_glpm, sample_hyperbolic, GlpmParams, HyperbolicParams};
use crate::graph::{is_connected, parse_edge_list, Network};
use crate::inference::{run_method, Method, TestOptions};
use crate::report::{plot_data_from_json, study_csv, to_json, write_atomic, DetectReport, MethodReport, StudyFile};
use crate::study::{derive_seed, run_simulation_study, StudyConfig};

#[derive(Debug, Parser)]
#[command(name = "netgeom", version, about = "Test whether a network is better embedded in the Euclidean plane or the hyperbolic disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the detection methods on an edge list
    Detect(DetectArgs),
    /// Sample a network from the GLPM or the hyperbolic disk model
    Generate(GenerateArgs),
    /// Sensitivity / specificity study on simulated networks
    Study(StudyArgs),
    /// Convert a detect or study report into tidy CSV
    PlotData(PlotDataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Stress,
    Permutation,
    Bootstrap,
    All,
}

impl MethodChoice {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Stress => vec![Method::Stress],
            MethodChoice::Permutation => vec![Method::Permutation],
            MethodChoice::Bootstrap => vec![Method::Bootstrap],
            MethodChoice::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Glpm,
    Hyperbolic,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Whitespace-separated edge list
    #[arg(long)]
    pub input: PathBuf,
    /// JSON report path (printed to stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodChoice,
    /// Permutation / bootstrap replicates
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: ModelChoice,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Target mean degree (hyperbolic model)
    #[arg(long)]
    pub kbar: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Edge-list path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Optional CSV of latent positions
    #[arg(long)]
    pub positions: Option<PathBuf>,
    /// Resample until connected, up to 1000 attempts
    #[arg(long)]
    pub require_connected: bool,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// Flat `key = value` study configuration
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON report path; a CSV with the same stem is written next to it
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Overrides the configuration's seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlotDataArgs {
    /// A report written by `detect` or `study`
    #[arg(long)]
    pub input: PathBuf,
    /// CSV path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub const CONNECT_ATTEMPTS: usize = 1000;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn std::io::Write) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs the detection methods and returns the report; verdict lines go to `out`.
pub fn detect(args: &DetectArgs, out: &mut dyn std::io::Write) -> Result<DetectReport> {
    let start = Instant::now();
    let net = parse_edge_list(&read(&args.input)?, true)?;
    let opts = TestOptions::default().with_replicates(args.replicates).with_alpha(args.alpha);
    let observed = stress_difference(&net, &opts.hyperbolic, opts.pairs)?;
    let mut reports = Vec::new();
    for m in args.method.methods() {
        // each method gets its own stream so results do not depend on which
        // other methods were requested
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(args.seed, &[m.number() as u64]));
        let rep = match run_method(m, &net, &opts, &mut rng) {
            Ok(r) => MethodReport::from_result(&r),
            Err(Error::CalibrationInfeasible(_)) => {
                MethodReport::not_available(m, &observed, args.alpha, args.replicates, "calibration infeasible")
            }
            Err(e) => return Err(e),
        };
        writeln!(out, "{}", rep.verdict())?;
        reports.push(rep);
    }
    let input = args.input.file_name().map_or_else(|| args.input.display().to_string(), |f| f.to_string_lossy().into());
    Ok(DetectReport::new(&input, args.seed, reports, start.elapsed().as_millis() as u64))
}

fn positions_csv(header: &str, rows: impl Iterator<Item = (f64, f64)>) -> String {
    let mut s = format!("node_label,{header}\n");
    for (i, (a, b)) in rows.enumerate() {
        let _ = writeln!(s, "{i},{a},{b}");
    }
    s
}

/// Samples a network; returns edge-list text and the positions CSV.
pub fn generate(args: &GenerateArgs) -> Result<(Network, String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this model")));
    let (header, sample): (String, Box<dyn Fn(&mut ChaCha8Rng) -> Result<(Network, String)>>) = match args.model {
        ModelChoice::Glpm => {
            let p = GlpmParams::new(args.gamma, need(args.phi, "phi")?, need(args.tau, "tau")?)?;
            (
                format!("# glpm n={} gamma={} phi={} tau={} seed={}", args.n, p.gamma, p.phi, p.tau, args.seed),
                Box::new(move |r: &mut ChaCha8Rng| {
                    let (net, z) = sample_glpm(args.n, &p, r)?;
                    Ok((net, positions_csv("x,y", z.iter().map(|u| (u[0], u[1])))))
                }),
            )
        }
        ModelChoice::Hyperbolic => {
            let kbar = need(args.kbar, "kbar")?;
            let p = HyperbolicParams::new(radius_for_degree(args.n, kbar)?)?;
            (
                format!("# hyperbolic n={} kbar={} radius={} seed={}", args.n, kbar, p.radius, args.seed),
                Box::new(move |r: &mut ChaCha8Rng| {
                    let (net, pos) = sample_hyperbolic(args.n, &p, r)?;
                    Ok((net, positions_csv("r,theta", pos.into_iter())))
                }),
            )
        }
    };
    let attempts = if args.require_connected { CONNECT_ATTEMPTS } else { 1 };
    for _ in 0..attempts {
        let (net, pos) = sample(&mut rng)?;
        if !args.require_connected || is_connected(&net) {
            let text = format!("{header}\n{}", net.to_edge_list());
            return Ok((net, text, pos));
        }
    }
    Err(Error::ConnectivityCapExceeded { attempts })
}

pub fn study(args: &StudyArgs, out: &mut dyn std::io::Write) -> Result<StudyFile> {
    let start = Instant::now();
    let mut cfg = match &args.config {
        Some(p) => StudyConfig::parse(&read(p)?)?,
        None => StudyConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let report = run_simulation_study(&cfg)?;
    write!(out, "{}", report.to_table())?;
    Ok(StudyFile::new(report, start.elapsed().as_millis() as u64))
}

/// Executes a parsed command line, writing human output to `out`.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<()> {
    match cli.command {
        Command::Detect(a) => {
            let report = detect(&a, out)?;
            emit(a.output.as_deref(), &to_json(&report), out)
        }
        Command::Generate(a) => {
            let (net, text, pos) = generate(&a)?;
            emit(a.output.as_deref(), &text, out)?;
            if let Some(p) = &a.positions {
                write_atomic(p, &pos)?;
            }
            eprintln!("generated {} nodes, {} edges", net.n(), net.edge_count());
            Ok(())
        }
        Command::Study(a) => {
            let file = study(&a, out)?;
            if let Some(p) = &a.output {
                write_atomic(p, &to_json(&file))?;
                write_atomic(&p.with_extension("csv"), &study_csv(&file.study))?;
            }
            Ok(())
        }
        Command::PlotData(a) => {
            let csv = plot_data_from_json(&read(&a.input)?)?;
            emit(a.output.as_deref(), &csv, out)
        }
    }
}
