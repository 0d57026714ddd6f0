use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "cylbif",
    version,
    about = "Periodic domains bifurcating from cylinders in space forms",
    long_about = "Periodic domains bifurcating from cylinders in space forms.\n\n\
                  Values come from flags, then the --config file, then the stated defaults. \
                  Relative output paths resolve against --out-dir, else $CYLBIF_OUT_DIR, else the config \
                  key out_dir, else the working directory."
)]
pub struct Cli {
    /// TOML config file whose keys mirror the long flags (`j_max = 32`)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for relative output paths [default: .]
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct SpaceArgs {
    /// Ambient dimension, at least 2
    #[arg(long)]
    pub n: Option<u32>,

    /// Curvature of the space form, nonzero
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct WindowArgs {
    /// Lower end of the period window [default: 0.5]
    #[arg(long)]
    pub tlo: Option<f64>,

    /// Upper end of the period window [default: 200]
    #[arg(long)]
    pub thi: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SearchArgs {
    /// Log-spaced samples of the initial zero search [default: 512]
    #[arg(long)]
    pub search_points: Option<usize>,

    /// Boundary perturbation amplitude, in [0, 0.5) [default: 0.1]
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Samples of the profile over one period, at least 8 [default: 256]
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state of the unit geodesic ball (JSON)
    Eigen {
        #[command(flatten)]
        space: SpaceArgs,
        /// Write JSON here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Dispersion curve sigma(T) by both routes (CSV)
    Scan {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        window: WindowArgs,
        /// Number of log-spaced periods, at least 2 [default: 200]
        #[arg(long)]
        points: Option<usize>,
        /// Fourier mode [default: 1]
        #[arg(long)]
        j: Option<u32>,
        /// Write CSV here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// T_star, kernel modes and crossing parity (JSON) plus the domain profile (CSV)
    Bifurcate {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Largest mode tested for the kernel [default: 64]
        #[arg(long)]
        j_max: Option<u32>,
        /// Relative kernel tolerance [default: 1e-8]
        #[arg(long)]
        kernel_tol: Option<f64>,
        /// Write the JSON report here instead of stdout
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Profile CSV path [default: profile_n<N>_k<K>.csv]
        #[arg(long, value_name = "FILE")]
        profile: Option<PathBuf>,
        /// Also dump the finite-difference DtN matrix at T_star (CSV)
        #[arg(long, value_name = "FILE")]
        dtn_csv: Option<PathBuf>,
        /// Radial intervals of the DtN grid [default: 64]
        #[arg(long)]
        dtn_m: Option<usize>,
        /// Periodic points of the DtN grid, even [default: 64]
        #[arg(long)]
        dtn_mt: Option<usize>,
        /// DtN solver [default: per-mode]
        #[arg(long, value_enum)]
        dtn_method: Option<DtnMethodArg>,
    },
    /// Linear-order domain profile rho(t) (CSV)
    Profile {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Period of the profile [default: the computed T_star]
        #[arg(long)]
        t_star: Option<f64>,
        /// Write CSV here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run the property suites on (n, k) in {2, 3} x {-1, +1}
    Verify {
        /// Comma-separated suite names [default: all]
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Output format [default: table]
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the results here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DtnMethodArg {
    PerMode,
    Coupled,
}
