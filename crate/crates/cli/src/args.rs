use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spcodes_core::symp::Which;

#[derive(Parser, Debug, Clone)]
#[command(name = "spcodes", version, about = "Verification suites for ternary symplectic-group codes and Kloosterman moments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Directory for the Sp(4,3) element cache. Without it the group is recomputed.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Seed for randomized spot checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupArg {
    Sp2,
    Sp4,
}

impl From<GroupArg> for Which {
    fn from(g: GroupArg) -> Which {
        match g {
            GroupArg::Sp2 => Which::Sp2,
            GroupArg::Sp4 => Which::Sp4,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RouteArg {
    #[default]
    SmallWeight,
    Macwilliams,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Extension degree, q = 3^r.
    #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
    pub r: u32,

    /// Monic modulus as comma-separated coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Field parameters, trace table and square classes.
    Field(FieldArgs),
    /// Kloosterman table, power moments, delta identity and GL(t) sums.
    Kloosterman {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(0..=12))]
        hmax: u32,
    },
    /// Group order, trace histogram, Gauss sums and Bruhat counts.
    Group {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        which: GroupArg,
    },
    /// Dual weights, low-weight counts and power-moment identities of a code.
    Code {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        which: GroupArg,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(0..=12))]
        jmax: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(0..=10))]
        hmax: u32,
    },
    /// Recursive moment formulas against brute force.
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(0..=10))]
        hmax: u32,
        #[arg(long, value_enum, default_value_t)]
        weights_route: RouteArg,
    },
    /// Every suite above, with one aggregated verdict.
    VerifyAll(FieldArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Field(_) => "field",
            Command::Kloosterman { .. } => "kloosterman",
            Command::Group { .. } => "group",
            Command::Code { .. } => "code",
            Command::Moments { .. } => "moments",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    pub fn field(&self) -> &FieldArgs {
        match self {
            Command::Field(f) | Command::VerifyAll(f) => f,
            Command::Kloosterman { field, .. }
            | Command::Group { field, .. }
            | Command::Code { field, .. }
            | Command::Moments { field, .. } => field,
        }
    }
}
