use std::path::PathBuf;

use blindconv::campaign::Suite;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "blindconv", version, about = "Ambiguity space of blind linear deconvolution")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_abs: f64,
    /// Relative tolerance, scaled by the largest absolute entry.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_rel: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear convolution of two signals.
    Convolve {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Anti-diagonal sums of a matrix.
    Lift {
        #[arg(long)]
        w: PathBuf,
    },
    /// Hankel selector matrices for an m x n grid.
    Basis {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Only the selector with this zero-based index.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Bordered rank-two kernel element from u and v.
    N0 {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
    },
    /// Recursive rank-two kernel element: seeded with --m and --n, or
    /// assembled from --u1 --u2 --v1 --v2.
    N2 {
        #[arg(long, required_unless_present = "u1")]
        m: Option<usize>,
        #[arg(long, required_unless_present = "u1")]
        n: Option<usize>,
        #[arg(long, requires_all = ["u2", "v1", "v2"], conflicts_with_all = ["m", "n"])]
        u1: Option<PathBuf>,
        #[arg(long)]
        u2: Option<PathBuf>,
        #[arg(long)]
        v1: Option<PathBuf>,
        #[arg(long)]
        v2: Option<PathBuf>,
    },
    /// Skew-symmetric exceptional element.
    M2 {
        #[arg(long)]
        u: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Basis of the linear kernel of the lifted operator.
    Kernel {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// All bordered-rotation decompositions of a signal.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Factorization certificate for a rank-two kernel element.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Adversarial pair for even-length signals.
    Attack {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Zero-padding shift pair.
    Shift {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Checks that a pair certifies unidentifiability; exits 1 if it does not.
    Verify {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Recomputes the worked example; exits 1 on any mismatch.
    ReproducePaper {
        #[arg(long)]
        x1: Option<PathBuf>,
        #[arg(long)]
        x2: Option<PathBuf>,
        #[arg(long)]
        y1: Option<PathBuf>,
        #[arg(long)]
        y2: Option<PathBuf>,
    },
    /// Seeded Monte-Carlo campaign; exits 1 if any trial fails.
    Trials {
        #[arg(long, value_parser = clap::value_parser!(Suite))]
        suite: Suite,
        /// Trials, or draws per family and size for the nullspace suite.
        #[arg(long = "n", default_value_t = 100, value_parser = clap::value_parser!(usize))]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        mmax: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Record per-trial wall time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Convolve { .. } => "convolve",
            Command::Lift { .. } => "lift",
            Command::Basis { .. } => "basis",
            Command::N0 { .. } => "n0",
            Command::N2 { .. } => "n2",
            Command::M2 { .. } => "m2",
            Command::Kernel { .. } => "kernel",
            Command::Decompose { .. } => "decompose",
            Command::Classify { .. } => "classify",
            Command::Attack { .. } => "attack",
            Command::Shift { .. } => "shift",
            Command::Verify { .. } => "verify",
            Command::ReproducePaper { .. } => "reproduce-paper",
            Command::Trials { .. } => "trials",
        }
    }
}
