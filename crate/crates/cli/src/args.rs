//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Format, GridSpec};

#[derive(Debug, Parser)]
#[command(name = "spherepack", version, about = "Reproducible reports on the E8 packing certificate")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "SPHEREPACK_THREADS")]
    pub threads: Option<usize>,
    /// Grid `lo:hi:n` for commands that sample one.
    #[arg(long, global = true, value_name = "LO:HI:N")]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasimodular forms.
    #[command(subcommand)]
    Forms(FormsCommand),
    /// The E8 lattice.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Packing densities.
    #[command(subcommand)]
    Packing(PackingCommand),
    /// The eigenfunctions and the magic function.
    #[command(subcommand)]
    Magic(MagicCommand),
    /// The linear-programming bound from the magic function.
    Bound,
    /// Imaginary-axis inequalities.
    #[command(subcommand)]
    Axis(AxisCommand),
}

#[derive(Debug, Subcommand)]
pub enum FormsCommand {
    /// Evaluate one form at a point of the upper half-plane.
    Eval {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        re: f64,
        #[arg(long)]
        im: f64,
    },
    /// Exact identities between the expansions.
    Identities {
        #[arg(long)]
        order: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    /// Shell counts up to a squared norm.
    Shells {
        #[arg(long, default_value_t = 8)]
        max_norm2: i64,
    },
    /// Nearest lattice point to a point of R^8.
    Decode {
        /// Eight comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Vec<f64>,
    },
    /// Basis, Gram matrix and invariants.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeArg {
    E8,
    Integer,
}

#[derive(Debug, Subcommand)]
pub enum PackingCommand {
    /// Closed-form density of a periodic packing.
    Density {
        #[arg(long, value_enum, default_value_t = LatticeArg::E8)]
        lattice: LatticeArg,
    },
    /// Monte Carlo density of the packing inside a ball.
    Mc {
        #[arg(long, value_enum, default_value_t = LatticeArg::E8)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long, default_value_t = 2_000_000)]
        samples: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    A,
    B,
    G,
    Ghat,
}

#[derive(Debug, Subcommand)]
pub enum MagicCommand {
    /// `a`, `b`, `g` and `g_hat` at one radius.
    Eval {
        #[arg(long)]
        r: f64,
    },
    /// One function on a radial grid.
    Table {
        #[arg(long, value_enum, default_value_t = WhichArg::G)]
        which: WhichArg,
    },
    /// Sign conditions and the bound on a radial grid.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Direct,
    Sweighted,
}

#[derive(Debug, Subcommand)]
pub enum AxisCommand {
    /// `phi0 +- (36 / pi^2) psi_S` on a logarithmic grid.
    Check {
        /// Report one convention only; both by default.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
}
