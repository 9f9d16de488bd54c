//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use bootagg::Rgb;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Parser)]
#[command(
    name = "bootagg",
    version,
    about = "Uncertainty visualization by aggregating charts of bootstrap resamples",
    after_help = "Exit codes: 0 success, 1 configuration error, 2 renderer protocol error, 3 I/O error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resample a dataset, render every resample and aggregate the images.
    Run(Box<RunArgs>),
    /// Aggregate a directory of pre-rendered PNG images.
    Aggregate(AggregateArgs),
    /// Print image counts, implied coverage and Jeffreys bounds.
    Coverage(CoverageArgs),
    /// Monte Carlo checks of the coverage guarantees.
    Simulate(SimulateArgs),
}

/// `WxH` in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size {
    pub width: u32,
    pub height: u32,
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| format!("expected positive pixel counts in '{s}'"))
        };
        Ok(Size {
            width: parse(w)?,
            height: parse(h)?,
        })
    }
}

impl std::fmt::Display for Size {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// `LO,HI` in data units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits(pub f64, pub f64);

impl FromStr for Limits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| format!("expected LO,HI, got '{s}'"))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad lower limit in '{s}'"))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad upper limit in '{s}'"))?;
        Ok(Limits(lo, hi))
    }
}

impl std::fmt::Display for Limits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinKind {
    /// A disc at the column statistic.
    PointEstimate,
    /// Least-squares polynomial over a scatter of the full data.
    RegressionLine,
    /// Relative frequencies of categories.
    BarChart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statistic {
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakMode {
    /// The smallest channel value wins a tie for the most frequent value.
    Smallest,
    /// Ties are broken at random, keyed by `--tie-seed`.
    Seeded,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Slope of the intensity transform.
    #[arg(long, default_value_t = 2.5)]
    pub k: f64,
    /// Threshold of the intensity transform, in (0, 0.5).
    #[arg(long, default_value_t = 0.3)]
    pub tau: f64,
    /// Plain per-pixel mean instead of the frequency transform.
    #[arg(long)]
    pub no_transform: bool,
    /// How ties for the most frequent channel value are broken.
    #[arg(long, value_enum, default_value_t = TieBreakMode::Smallest)]
    pub tie_break: TieBreakMode,
    /// Seed for `--tie-break seeded` (defaults to the run seed).
    #[arg(long)]
    pub tie_seed: Option<u64>,
    /// Bound on bytes of image data held at once; switches to on-disk
    /// staging and row-tiled aggregation.
    #[arg(long, value_name = "BYTES")]
    pub memory_cap: Option<u64>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("renderer").required(true).args(["renderer_cmd", "builtin"])))]
#[command(group(ArgGroup::new("count").required(true).args(["n", "coverage"])))]
pub struct RunArgs {
    /// CSV file with a header row.
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    /// External renderer; placeholders {resample} {full} {out} {width} {height} {index}.
    #[arg(long, value_name = "TEMPLATE")]
    pub renderer_cmd: Option<String>,
    /// Built-in renderer.
    #[arg(long, value_enum, value_name = "KIND")]
    pub builtin: Option<BuiltinKind>,
    /// Number of images.
    #[arg(long)]
    pub n: Option<u64>,
    /// Target coverage; the number of images is the smallest that reaches it.
    #[arg(long)]
    pub coverage: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output PNG.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[arg(long, default_value = "900x450")]
    pub size: Size,
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Concurrent renders (defaults to the number of CPUs).
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Also write the individual images.
    #[arg(long)]
    pub keep_stack: bool,
    /// Directory for `--keep-stack` (defaults to `<out stem>_stack`).
    #[arg(long, value_name = "DIR", requires = "keep_stack")]
    pub stack_dir: Option<PathBuf>,
    /// Seconds before an external renderer is killed.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,

    /// Column for point estimates and bar charts.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum, default_value_t = Statistic::Mean)]
    pub statistic: Statistic,
    /// Predictor column for regression lines.
    #[arg(long)]
    pub x: Option<String>,
    /// Response column for regression lines.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Bar order (defaults to order of first appearance in the data).
    #[arg(long, value_delimiter = ',')]
    pub categories: Option<Vec<String>>,
    /// Horizontal data range `LO,HI` (defaults to the full data, padded 5%).
    #[arg(long, allow_hyphen_values = true)]
    pub xlim: Option<Limits>,
    /// Vertical data range `LO,HI`.
    #[arg(long, allow_hyphen_values = true)]
    pub ylim: Option<Limits>,
    /// Mark size in pixels; a mark of size s is a disc of radius s - 1.
    #[arg(long)]
    pub mark_size: Option<u32>,
    /// Mark color, `#rrggbb` or `r,g,b`.
    #[arg(long)]
    pub color: Option<Rgb>,
    #[arg(long, default_value = "#ffffff")]
    pub background: Rgb,
}

#[derive(Debug, Clone, Args)]
pub struct AggregateArgs {
    /// Directory of PNG images, stacked in lexicographic file-name order.
    #[arg(long, value_name = "DIR")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub transform: TransformArgs,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("count").required(true).args(["n", "coverage", "table"])))]
pub struct CoverageArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub coverage: Option<f64>,
    /// Rows for the coverages 0.8, 0.9, 0.95, 0.99 and 0.999.
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Range of n scalar draws against a fresh draw.
    Range,
    /// The same through resampling, rendering and pixel intervals.
    Pipeline,
    /// Jeffreys bounds for a fixed region against the exact probability.
    Region,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub scenario: Scenario,
    #[arg(long, default_value_t = 39)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Defaults to 20240917.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `normal:MU,SIGMA`, `uniform:A,B`, `exponential:RATE` or
    /// `discrete:V@P,V@P,...`.
    #[arg(long, default_value = "normal:0,1")]
    pub dist: String,
    /// Rows of each synthetic dataset (pipeline).
    #[arg(long, default_value_t = 30)]
    pub rows: usize,
    /// Raster size (pipeline).
    #[arg(long, default_value = "300x150")]
    pub size: Size,
    /// Horizontal data range (pipeline; defaults to the generator mean ± 4 standard errors).
    #[arg(long, allow_hyphen_values = true)]
    pub xlim: Option<Limits>,
    #[arg(long, default_value_t = 3)]
    pub mark_size: u32,
    /// Region is `value > threshold` (region; overrides --threshold-quantile).
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    /// Threshold as a quantile of the generator (region).
    #[arg(long, default_value_t = 0.98)]
    pub threshold_quantile: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}
