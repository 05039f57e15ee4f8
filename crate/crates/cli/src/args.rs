use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Densities, scores, entropies and mixed fractional information for
/// symmetric α-stable laws, with a two-tier consistency validator.
#[derive(Debug, Parser)]
#[command(name = "sasinfo", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density, log-density and x-derivative at the given points.
    Pdf(PdfArgs),
    /// Fisher score f'/f at the given points.
    Score(ScoreArgs),
    /// Relative entropy D(g_v ‖ g_s).
    Kl(PairCmd),
    /// Scale derivative D'(v) on the step ladder.
    Dprime(DprimeArgs),
    /// Mixed fractional information by chain rule, integral or both.
    Mfi(MfiArgs),
    /// Consistency check of D'(v) against the score integral.
    Validate(ValidateArgs),
    /// Positivity or log-Sobolev ratio sweep over a grid.
    Sweep(SweepArgs),
    /// The MFI integrand on a uniform grid.
    Integrand(IntegrandArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreKind {
    /// Closed form where it exists, numerical density derivative otherwise.
    Analytic,
    /// Five-point difference of the log-density.
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MfiMethod {
    Chain,
    Integral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Positivity,
    Lsi,
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    /// Absolute quadrature tolerance [default: by tier].
    #[arg(long)]
    pub eps_abs: Option<f64>,
    /// Relative quadrature tolerance [default: by tier].
    #[arg(long)]
    pub eps_rel: Option<f64>,
    /// Subdivision budget per adaptive integral.
    #[arg(long, default_value_t = 400)]
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreOpts {
    /// How the Fisher score is evaluated.
    #[arg(long, value_enum, default_value_t = ScoreKind::Fd)]
    pub score: ScoreKind,
    /// Step of the log-density difference.
    #[arg(long, default_value_t = 1e-6)]
    pub score_dx: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct Pair {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Scale of the initial law.
    #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
    pub v: f64,
    /// Scale of the target law.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PdfArgs {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub scale: f64,
    /// Evaluation points; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub pdf: PdfArgs,
    #[command(flatten)]
    pub score: ScoreOpts,
}

#[derive(Debug, Clone, Args)]
pub struct PairCmd {
    #[command(flatten)]
    pub pair: Pair,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DprimeArgs {
    #[command(flatten)]
    pub pair: Pair,
    /// Stencil steps; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,1e-3,5e-4,1e-4", allow_hyphen_values = true)]
    pub h: Vec<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MfiArgs {
    #[command(flatten)]
    pub pair: Pair,
    #[arg(long, value_enum, default_value_t = MfiMethod::Both)]
    pub method: MfiMethod,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,1e-3,5e-4,1e-4", allow_hyphen_values = true)]
    pub h: Vec<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub score: ScoreOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub pair: Pair,
    /// 1 = closed-form D'(v) (α ∈ {1, 2}), 2 = numerical stencil [default: 1 where available].
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub tier: Option<u8>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,1e-3,5e-4,1e-4", allow_hyphen_values = true)]
    pub h: Vec<f64>,
    /// Largest accepted relative error [default: 1e-10 for tier 1, 1e-5 for tier 2].
    #[arg(long)]
    pub gate: Option<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub score: ScoreOpts,
    /// Report file.
    #[arg(long, default_value = "validation_results.json")]
    pub out: PathBuf,
    /// Print the summary of an existing report instead of recomputing.
    #[arg(long, conflicts_with_all = ["alpha", "v", "s", "tier", "h", "eps_abs", "eps_rel"])]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Stability indices [default: 0.8,1,1.2,1.5,1.8,2 for positivity, 1 for lsi].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha_grid: Option<Vec<f64>>,
    /// Values of v/s [default: 0.5,0.8,1,1.2,2 for positivity, 10,100,1000,10000 for lsi].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ratio_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,5e-3,1e-3,5e-4,1e-4", allow_hyphen_values = true)]
    pub h: Vec<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrandArgs {
    #[command(flatten)]
    pub pair: Pair,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 201)]
    pub n_points: usize,
    #[command(flatten)]
    pub score: ScoreOpts,
    #[command(flatten)]
    pub out: OutArgs,
}
