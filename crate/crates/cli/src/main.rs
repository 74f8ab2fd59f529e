//! `beamwave`: parameter checks, resonance scans, travelling-wave solves,
//! branch continuation and time integration from the command line.
//!
//! Exit codes: 0 success, 1 negative result, 2 usage or configuration error,
//! 3 exact method refused, 4 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use beamwave_core::params::SetId;
use beamwave_core::solver::PathKind;
use beamwave_core::QuadraticSurd;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Overrides;

#[derive(Parser, Debug)]
#[command(name = "beamwave", version, about = "Quasi-periodic travelling waves of damped beam equations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Run configuration (JSON); flags below override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Digits after the point for exact critical frequencies.
    #[arg(long, global = true, default_value_t = 50)]
    pub precision: u32,
    /// Suppress everything on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Fourier truncation N.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub tol_inner: Option<f64>,
    #[arg(long, global = true)]
    pub tol_outer: Option<f64>,
    #[arg(long, global = true)]
    pub varrho: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// μ as `q`, `sqrt(d)` or `q*sqrt(d)`.
    #[arg(long, global = true)]
    pub mu: Option<QuadraticSurd>,
    /// m as `q`, `sqrt(d)` or `q*sqrt(d)`.
    #[arg(long, global = true)]
    pub m: Option<QuadraticSurd>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true, num_args = 2, value_names = ["J1", "J2"])]
    pub jstar: Option<Vec<i64>>,
}

impl Global {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            n: self.n,
            tol_inner: self.tol_inner,
            tol_outer: self.tol_outer,
            varrho: self.varrho,
            seed: self.seed,
            mu: self.mu.clone(),
            m: self.m.clone(),
            lambda: self.lambda,
            p: self.p,
            jstar: self.jstar.as_ref().map(|v| [v[0], v[1]]),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Membership checks and dense sampling of admissible parameters.
    Params {
        #[command(subcommand)]
        action: ParamsCmd,
    },
    /// Lattice scan for zeros of the symbol at the critical frequencies.
    Resonance {
        /// Scan |j|∞ ≤ R.
        #[arg(long, default_value_t = 200)]
        radius: i64,
        /// Use the floating-point scan instead of exact arithmetic.
        #[arg(long)]
        floating: bool,
    },
    /// Travelling wave at fixed amplitudes.
    Solve {
        #[arg(long, num_args = 2, value_names = ["RHO1", "RHO2"], required = true)]
        rho: Vec<f64>,
        #[arg(long)]
        plot_data: bool,
    },
    /// Branch of travelling waves along a straight amplitude path.
    Continue {
        #[arg(long, value_enum)]
        path: PathArg,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        plot_data: bool,
    },
    /// Time integration from a solved wave or an explicit state.
    Evolve {
        /// Solution file written by `solve`.
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        from: Option<PathBuf>,
        /// State file (`u`, `ut`, `t`).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Run length in periods 2π/min(ω) (wave input only).
        #[arg(long, conflicts_with = "t_end")]
        periods: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100)]
        sample_every: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        plot_data: bool,
    },
    /// Energy and its rate for a solved wave or an explicit state.
    Energy {
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        from: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ParamsCmd {
    Check {
        /// Restrict to one set; by default S is tried, then S'.
        #[arg(long)]
        set: Option<SetId>,
    },
    Sample {
        #[arg(long, num_args = 2, value_names = ["MU", "M"], required = true)]
        target: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value = "S")]
        set: SetId,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PathArg {
    Axis1,
    Axis2,
    Diagonal,
}

impl From<PathArg> for PathKind {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Axis1 => PathKind::Axis1,
            PathArg::Axis2 => PathKind::Axis2,
            PathArg::Diagonal => PathKind::Diagonal,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match commands::run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("beamwave: {e:#}");
            commands::exit_code(&e)
        }
    };
    ExitCode::from(code)
}
