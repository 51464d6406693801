use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualtopo::driver::{GainMeasure, Method};
use dualtopo::problems::ProblemKind;

/// Output directory variable, used when neither the command line nor the
/// config file sets `--out`.
pub const OUT_ENV: &str = "DUALTOPO_OUT";

#[derive(Debug, Parser)]
#[command(name = "dualtopo", version, about = "Binary topology optimization with a canonical-dual knapsack solver")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a benchmark structure with CDT, BESO or SIMP.
    Run(RunArgs),
    /// Closed-form examples.
    Demo(DemoArgs),
    /// Per-iteration cost of CDT and BESO over a range of meshes.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory (created if missing).
    #[arg(long, env = OUT_ENV, default_value = "out")]
    pub out: PathBuf,
    /// File of `key = value` lines using the long flag names. Flags given on
    /// the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value = "mbb", value_parser = parse_problem)]
    pub problem: ProblemKind,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(2..))]
    pub nelx: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..))]
    pub nely: u64,
    /// Layers in z (3-D problems only).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub nelz: u64,
    #[arg(long, default_value_t = 0.4, value_parser = parse_volfrac)]
    pub volfrac: f64,
    /// Volume reduction rate per outer step.
    #[arg(long, default_value_t = 0.975, value_parser = parse_open_unit)]
    pub mu: f64,
    #[arg(long, default_value = "cdt", value_parser = parse_method)]
    pub method: Method,
    /// Young's modulus of solid material.
    #[arg(long = "youngs", default_value_t = 1.0, value_parser = parse_positive)]
    pub e: f64,
    #[arg(long, default_value_t = 0.3)]
    pub nu: f64,
    /// Ersatz modulus of void material.
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub emin: f64,
    /// Load magnitude.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub load: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_nonnegative)]
    pub tau0: f64,
    #[arg(long, default_value_t = 2e-16, value_parser = parse_positive)]
    pub omega1: f64,
    #[arg(long, default_value_t = 1e-2, value_parser = parse_positive)]
    pub omega2: f64,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_outer: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_inner: u64,
    /// Initial β of the knapsack solver (default `max(1, 10 max w)`).
    #[arg(long, value_parser = parse_positive)]
    pub beta: Option<f64>,
    #[arg(long, default_value = "stored", value_parser = parse_gain)]
    pub gain: GainMeasure,
    /// SIMP penalty.
    #[arg(long, default_value_t = 3.0)]
    pub penal: f64,
    /// SIMP filter radius.
    #[arg(long, default_value_t = 1.5)]
    pub rmin: f64,
    /// Write text (P2) graymaps instead of binary (P5).
    #[arg(long)]
    pub pgm_ascii: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Buridan,
    Truss,
    Counterexample,
    DoubleWell,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long, value_enum)]
    pub name: DemoName,
    /// Buridan: base gain of both piles.
    #[arg(long, default_value_t = 2.0, value_parser = parse_positive)]
    pub w: f64,
    /// Buridan and truss: symmetry-breaking perturbation.
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Counterexample and truss: group stiffnesses (default `(2 − √2)/2`, `(4 + √2)/2`).
    #[arg(long, value_parser = parse_positive)]
    pub a: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub b: Option<f64>,
    /// Counterexample: SIMP penalty.
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    /// Counterexample: surface samples per axis.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..=2000))]
    pub resolution: u64,
    /// Double well: β.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub beta: f64,
    /// Double well: λ.
    #[arg(long, default_value_t = 2.0, value_parser = parse_positive)]
    pub lambda: f64,
    /// Load vector, comma separated. Double well: any length, default `0.5`.
    /// Counterexample: two entries, default `1,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub f: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value = "cantilever", value_parser = parse_problem)]
    pub problem: ProblemKind,
    /// Meshes as `NELXxNELY`, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "20x8,40x16,60x20,80x30", value_parser = parse_mesh)]
    pub meshes: Vec<MeshDims>,
    #[arg(long, value_delimiter = ',', default_value = "cdt,beso", value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0.5, value_parser = parse_volfrac)]
    pub volfrac: f64,
    #[arg(long, default_value_t = 0.975, value_parser = parse_open_unit)]
    pub mu: f64,
    #[arg(long, default_value_t = 1e-2, value_parser = parse_positive)]
    pub omega2: f64,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_outer: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn parse_volfrac(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x <= 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is outside (0, 1]"))
    }
}

fn parse_open_unit(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is outside (0, 1)"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} must be positive"))
    }
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} must be nonnegative"))
    }
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    s.parse()
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.trim().parse()
}

fn parse_gain(s: &str) -> Result<GainMeasure, String> {
    s.parse()
}

/// Element counts per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshDims(pub Vec<usize>);

/// `60x20` or `20x8x4`.
pub fn parse_mesh(s: &str) -> Result<MeshDims, String> {
    let dims: Result<Vec<usize>, _> = s.trim().split('x').map(str::parse::<usize>).collect();
    match dims {
        Ok(d) if (2..=3).contains(&d.len()) && d.iter().all(|&n| n >= 1) => Ok(MeshDims(d)),
        _ => Err(format!("`{s}` is not a mesh like 60x20")),
    }
}
