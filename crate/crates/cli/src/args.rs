use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qplane", version, about = "Sums of squares and operator models for the q-plane algebra xx* = q x*x")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Deformation parameter as an exact rational: 2, 1/2, 0.75
    #[arg(long, global = true)]
    pub q: Option<String>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "max-iter", global = true, default_value_t = 50_000)]
    pub max_iter: usize,
    /// Truncation radius of the shift models (basis e_-K … e_K)
    #[arg(long = "K", global = true, default_value_t = 40)]
    pub k: usize,
    #[arg(long = "lam-grid", global = true, default_value_t = 9)]
    pub lam_grid: usize,
    /// Maximal number of denominator factors
    #[arg(long, global = true, default_value_t = 1)]
    pub depth: usize,
    /// Largest |k| in a denominator factor (q^k x*x + 1)
    #[arg(long, global = true, default_value_t = 2)]
    pub kmax: u32,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the JSON report to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the normal form and degree
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Search, extract or refute a sum-of-squares decomposition
    Sos {
        #[arg(value_enum)]
        mode: SosMode,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// With `check`: verify this certificate file instead of searching
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Search for a denominator b with b f b a sum of squares
    Psatz {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Finite shift-model computations
    Op {
        #[command(subcommand)]
        cmd: OpCommand,
    },
    /// Trigonometric symbol of the top-degree part
    Symbol {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        /// Use the printed weight formula instead of the default one
        #[arg(long)]
        printed: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SosMode {
    Check,
    Extract,
    Refute,
}

#[derive(Subcommand, Debug)]
pub enum OpCommand {
    /// Smallest interior eigenvalue of f(X, X*) over the shift models
    Probe {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// q-normality and polar-decomposition residuals for m, n ≤ 3
    Residuals {
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Moment table of a finitely supported state, computed two ways
    Moments {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 4)]
        degmax: usize,
    },
}
