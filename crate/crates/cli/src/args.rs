use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coopbc_core::{Format, LogBase};

#[derive(Debug, Parser)]
#[command(
    name = "coopbc",
    version,
    about = "Rate regions of broadcast channels with one-sided receiver cooperation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Logarithm base of every rate read or written.
    #[arg(long, global = true, default_value = "bits", value_parser = parse_base)]
    pub base: LogBase,

    /// Absolute tolerance of the root finders.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Number of uniform parameter samples along each boundary.
    #[arg(long, global = true, default_value_t = 2001)]
    pub grid: usize,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: coopbc_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Scalar Gaussian pair; parameters are the SNRs `s1 s2`.
    Gaussian,
    /// BEC to User 1, BSC to User 2; parameters are `tau1 p2`.
    Becbsc,
}

/// `gaussian S1 S2` or `becbsc TAU1 P2`.
#[derive(Debug, Clone, Args)]
pub struct ChannelSpec {
    #[arg(value_enum)]
    pub family: Family,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Inner,
    Outer,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the inner and outer bounds of one channel.
    Region {
        #[command(flatten)]
        channel: ChannelSpec,
        #[arg(long, default_value_t = 0.0)]
        c12: f64,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
    },
    /// Frontiers of the Gaussian pair s1 = 5, s2 = 0.5 plus threshold points.
    Fig2 {
        /// Comma-separated cooperation capacities; default 0,0.25,0.5,0.75,1 bits.
        #[arg(long, value_delimiter = ',')]
        c12: Option<Vec<f64>>,
    },
    /// Frontiers of the BEC(0.1)/BSC(0.2) pair plus threshold points.
    Fig3 {
        /// Comma-separated cooperation capacities; default 0,0.2,0.4,0.6 bits.
        #[arg(long, value_delimiter = ',')]
        c12: Option<Vec<f64>>,
    },
    /// Check that User 1's channel is more capable than User 2's.
    CheckMc {
        /// `becbsc`; omit when passing --ch1/--ch2.
        #[arg(value_enum, requires_all = ["a", "b"])]
        family: Option<Family>,
        a: Option<f64>,
        b: Option<f64>,
        /// Transition matrix JSON of User 1's channel.
        #[arg(long, requires = "ch2", conflicts_with = "family")]
        ch1: Option<PathBuf>,
        /// Transition matrix JSON of User 2's channel.
        #[arg(long, requires = "ch1")]
        ch2: Option<PathBuf>,
        /// Grid points along a binary input simplex.
        #[arg(long, default_value_t = 10_000)]
        resolution: usize,
    },
    /// Compare brute-force bounds with the parametric ones.
    OracleCompare {
        #[command(flatten)]
        channel: ChannelSpec,
        #[arg(long, default_value_t = 0.0)]
        c12: f64,
        /// Cardinality of the auxiliary alphabet.
        #[arg(long, default_value_t = 2)]
        u_cardinality: usize,
        /// Grid denominator for every probability.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Largest tolerated deviation between the frontiers.
        #[arg(long, default_value_t = 5e-3)]
        budget: f64,
        /// Largest number of auxiliary laws to enumerate.
        #[arg(long, default_value_t = coopbc_core::oracle::DEFAULT_MAX_EVALUATIONS)]
        max_evaluations: u64,
    },
    /// Threshold table over a grid of cooperation capacities.
    Sweep {
        #[command(flatten)]
        channel: ChannelSpec,
        /// Explicit comma-separated capacities; overrides --points.
        #[arg(long, value_delimiter = ',')]
        c12: Option<Vec<f64>>,
        /// Uniform points on [0, C1 - C2].
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Monte Carlo run of superposition coding with decode-and-forward.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub channel: Family,
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long)]
    pub s2: Option<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r1: f64,
    #[arg(long)]
    pub r2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c12: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// JSON file with `p_u` and `p_x_given_u`.
    #[arg(long, conflicts_with_all = ["q", "power_split"])]
    pub input_law: Option<PathBuf>,
    /// Uniform binary cloud with satellites through a BSC(q).
    #[arg(long, conflicts_with = "power_split")]
    pub q: Option<f64>,
    /// Satellite share alpha of the unit input power.
    #[arg(long)]
    pub power_split: Option<f64>,
    /// Largest codebook, in codewords.
    #[arg(long, default_value_t = coopbc_core::dnfsim::DEFAULT_CODEBOOK_BUDGET)]
    pub budget: u64,
}
