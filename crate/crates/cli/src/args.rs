use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdcoint::DeterministicSpec;

#[derive(Debug, Parser)]
#[command(
    name = "hdcoint",
    version,
    about = "Wachter-limit diagnostics for cointegration rank tests in large VARs",
    after_help = "Set HDCOINT_THREADS to fix the number of Monte Carlo workers; results do not depend on it."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical correlations and rescaled trace statistics of a CSV panel.
    Analyze(AnalyzeArgs),
    /// Monte Carlo summary of the canonical-correlation spectrum.
    Simulate(SimulateArgs),
    /// pdf, cdf and quantiles of a Wachter law.
    Dist(DistArgs),
    /// Centering constants and Bartlett factors as functions of p/T.
    Centers(CentersArgs),
    /// Wachter quantile-quantile plot of a CSV panel or a simulated draw.
    Qq(QqArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DgpKind {
    /// Pure random walk.
    Rw,
    /// Stationary AR(1) with coefficient --rho.
    Ar1,
    /// Random walk with a N(0, I) drift per replication.
    Rwc,
    /// --white-noise white-noise components, the rest random walks.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    /// W(c/(1+c), 2c/(1+c)), the no-cointegration limit.
    Null,
    /// W(c/(2-c), 1/(2-c)), the limit for independent white noises.
    WhiteNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotFormatArg {
    Svg,
    Csv,
}

fn det_parser(s: &str) -> Result<DeterministicSpec, String> {
    s.parse().map_err(|e: hdcoint::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct DgpArgs {
    /// Data-generating process.
    #[arg(long, value_enum, default_value = "rw")]
    pub dgp: DgpKind,
    /// AR coefficient in [0, 1); only with --dgp ar1.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Number of white-noise components; only with --dgp mixed.
    #[arg(long = "white-noise")]
    pub white_noise: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EnvelopeArgs {
    /// Attach Monte Carlo 5%/95% bands to the Wachter plot.
    #[arg(long)]
    pub envelope: bool,
    /// Replications for the envelope.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV panel: one row per time point, one column per variable.
    pub input: PathBuf,
    /// Deterministic terms: none, const or rtrend.
    #[arg(long, default_value = "none", value_parser = det_parser)]
    pub det: DeterministicSpec,
    /// Cointegration rank under the null.
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Report path (JSON); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a Wachter plot; format from the extension (.svg or .csv).
    #[arg(long)]
    pub qq: Option<PathBuf>,
    #[command(flatten)]
    pub env: EnvelopeArgs,
    /// Null process for the envelope.
    #[command(flatten)]
    pub dgp: DgpArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of series.
    #[arg(long)]
    pub p: usize,
    /// Sample size; each replication has T + 1 observations from X_0 = 0.
    #[arg(long = "T")]
    pub t: usize,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[command(flatten)]
    pub dgp: DgpArgs,
    /// Seed; replication j uses substream j.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deterministic terms in the fitted model: none, const or rtrend.
    #[arg(long, default_value = "none", value_parser = det_parser)]
    pub det: DeterministicSpec,
    /// Rank used for LR / (2p²).
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Include every replication's spectrum in the JSON output.
    #[arg(long)]
    pub keep_spectra: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Aspect ratio(s) p/T: a value, a list, or a range a..b[:step].
    #[arg(long, conflicts_with_all = ["gamma1", "gamma2"], required_unless_present = "gamma1")]
    pub c: Option<String>,
    /// Which limit law to use with --c.
    #[arg(long, value_enum, default_value = "null")]
    pub law: Law,
    /// First Wachter parameter, in (0, 1); use with --gamma2 instead of --c.
    #[arg(long, requires = "gamma2")]
    pub gamma1: Option<f64>,
    /// Second Wachter parameter, in (0, 1).
    #[arg(long, requires = "gamma1")]
    pub gamma2: Option<f64>,
    /// Quantile levels: a value, a list, or a range a..b[:step].
    #[arg(long, default_value = "0.05..0.95")]
    pub quantiles: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CentersArgs {
    /// Aspect ratio(s): a value, a list, or a range a..b[:step].
    #[arg(long, conflicts_with_all = ["p", "t"], required_unless_present = "p")]
    pub c: Option<String>,
    /// Number of series; with --T gives c = p/T.
    #[arg(long, requires = "t")]
    pub p: Option<usize>,
    /// Sample size.
    #[arg(long = "T", requires = "p")]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QqArgs {
    /// CSV panel; when absent a single draw from --dgp with --p and --T is
    /// plotted.
    pub input: Option<PathBuf>,
    /// Series in the simulated draw.
    #[arg(long, conflicts_with = "input", requires = "t")]
    pub p: Option<usize>,
    /// Sample size of the simulated draw.
    #[arg(long = "T", conflicts_with = "input", requires = "p")]
    pub t: Option<usize>,
    /// Process for the draw and the envelope.
    #[command(flatten)]
    pub dgp: DgpArgs,
    /// Deterministic terms: none, const or rtrend.
    #[arg(long, default_value = "none", value_parser = det_parser)]
    pub det: DeterministicSpec,
    /// Limit law on the theoretical axis.
    #[arg(long, value_enum, default_value = "null")]
    pub law: Law,
    #[command(flatten)]
    pub env: EnvelopeArgs,
    /// Output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to the extension of --out.
    #[arg(long, value_enum)]
    pub format: Option<PlotFormatArg>,
}
