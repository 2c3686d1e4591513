use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Coset cardinality and Hamming distance spectra of overlapped arithmetic codes")]
pub struct Cli {
    /// Directory for CSV files and manifests.
    #[arg(long, global = true, default_value = "spectra-out")]
    pub out: PathBuf,

    /// Worker threads (overrides SPECTRA_THREADS; default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest word enumeration allowed.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    pub max_words: u128,

    /// Largest number of codeword pairs allowed.
    #[arg(long, global = true, default_value_t = 1 << 36)]
    pub max_pairs: u128,

    /// Largest number of shift evaluations allowed.
    #[arg(long, global = true, default_value_t = 1 << 34)]
    pub max_shifts: u128,

    #[command(subcommand)]
    pub command: Command,
}

/// Code rate, given as a decimal or as the minimal polynomial of 2^r.
#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct RateArg {
    /// Overlapping factor r in (0, 1].
    #[arg(long)]
    pub r: Option<f64>,
    /// Integer polynomial in x with a single root x = 2^r in (1, 2), e.g. "x^3-x-1".
    #[arg(long)]
    pub alpha: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode one word and print its coset index.
    Encode {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rate: RateArg,
        /// Word as a string of 0/1 symbols, x_1 first.
        #[arg(long)]
        word: String,
    },
    /// Enumerate all cosets.
    Partition {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rate: RateArg,
    },
    /// Coset cardinality spectrum on a grid.
    Ccs {
        #[command(flatten)]
        rate: RateArg,
        #[arg(long, value_enum, default_value_t = CcsMode::Asymptotic)]
        mode: CcsMode,
        /// Code length (backward and empirical modes).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 4096)]
        bins: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Hamming distance spectrum.
    Hds {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rate: RateArg,
        #[arg(long, value_enum, default_value_t = HdsMethod::Mixed)]
        method: HdsMethod,
        #[arg(long, default_value_t = 0)]
        dmin: u32,
        /// Defaults to n.
        #[arg(long)]
        dmax: Option<u32>,
        /// Grid size of the CCS used by the fast and binomial methods.
        #[arg(long, default_value_t = 4096)]
        bins: usize,
    },
    /// Distribution of the normalised shift function.
    ShiftDist {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        rate: RateArg,
        #[arg(long)]
        d: u32,
        /// `all`, or `gap:K` for the index set missing position n−K+1 (d = n−1).
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Also emit the theoretical density.
        #[arg(long)]
        theory: bool,
    },
    /// Closed forms of ψ(1) and ψ(2), at one rate or on a grid.
    PsiClosed {
        #[arg(long, conflicts_with_all = ["rmin", "rmax"])]
        r: Option<f64>,
        #[arg(long, requires = "rmax")]
        rmin: Option<f64>,
        #[arg(long, requires = "rmin")]
        rmax: Option<f64>,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Analytic ψ(3;n) from the species calculus.
    Psi3 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u32,
        /// Also evaluate n from this value up to --n.
        #[arg(long)]
        nmin: Option<u32>,
        /// Add the soft approximation for comparison.
        #[arg(long)]
        soft: bool,
        /// Write the species audit table.
        #[arg(long)]
        audit: bool,
    },
    /// Regenerate the data behind a figure or table.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CcsMode {
    Asymptotic,
    Backward,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HdsMethod {
    Exhaustive,
    Binomial,
    Soft,
    Hard,
    Fast,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    ShiftDistN,
    ShiftDistN1,
    ShiftDistD,
    HdsAll,
    HdsZoom,
    Psi12Curves,
    Psi3Divergent,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::ShiftDistN => "shift-dist-n",
            Target::ShiftDistN1 => "shift-dist-n1",
            Target::ShiftDistD => "shift-dist-d",
            Target::HdsAll => "hds-all",
            Target::HdsZoom => "hds-zoom",
            Target::Psi12Curves => "psi12-curves",
            Target::Psi3Divergent => "psi3-divergent",
        }
    }
}
