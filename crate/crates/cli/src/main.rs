use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod io;

#[derive(Parser, Debug)]
#[command(
    name = "wandering",
    version,
    about = "Annular systems, curve lifting and wandering Jordan curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pullback graph: predicates, κ table, Cantor verdict.
    Multicurve(MulticurveArgs),
    /// Interval model: depth-n intervals, expansion, orbit codes.
    Interval(IntervalArgs),
    /// Annular system: validation, degree growth, nested fates, hulls.
    Annulus(AnnulusArgs),
    /// Exact-system check and iterated lifting along a code.
    Wandering(WanderingArgs),
    /// Renormalization report from a bundle.
    Renorm(RenormArgs),
    /// Full invariant suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Args, Debug)]
pub struct MulticurveArgs {
    /// Graph JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// κ table depth.
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct IntervalArgs {
    /// Interval-system JSON, annular-spec JSON, or a built-in name
    /// (`middle-thirds`, `cubic-annulus-model`, `lattes`).
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    /// Points whose orbit codes are classified (`p/q` or decimals).
    #[arg(long = "point")]
    pub points: Vec<String>,
    /// Orbit length used for classification.
    #[arg(long, default_value_t = 64)]
    pub iters: usize,
    /// Output directory for `intervals.csv` and `report.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct AnnulusArgs {
    /// Annular-spec JSON or a built-in name.
    #[arg(long)]
    pub input: String,
    /// Hull depth.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Codes for nested fates: `0,1` is periodic, `2/0,1` has prefix 2,
    /// `champernowne` streams all words.
    #[arg(long = "code")]
    pub codes: Vec<String>,
    /// Fate horizon.
    #[arg(long, default_value_t = 64)]
    pub iters: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct WanderingArgs {
    /// Built-in map: `lattes` or `cubic-annulus-model`.
    #[arg(long, conflicts_with = "input")]
    pub map: Option<String>,
    /// Map JSON with marked points, core curves and boundaries.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "0,1")]
    pub code: String,
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    /// Stop once successive curves are this close.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Chordal clearance from critical values.
    #[arg(long, default_value_t = 1e-4)]
    pub delta: f64,
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
    /// Output directory for `wandering.svg`, `curve.csv`, `convergence.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RenormArgs {
    /// Bundle JSON or `lattes`.
    #[arg(long, default_value = "lattes")]
    pub input: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Multicurve(a) => commands::multicurve(a),
        Command::Interval(a) => commands::interval(a),
        Command::Annulus(a) => commands::annulus(a),
        Command::Wandering(a) => commands::wandering(a),
        Command::Renorm(a) => commands::renorm(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
