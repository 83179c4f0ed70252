use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thirdbvp_core::QuadratureMethod;

/// Solve third-order two-point boundary value problems
/// u''' = f(t, u, u', u'') on [0, 1] with u(0) = c1, u'(0) = c2, u'(1) = c3.
#[derive(Parser, Debug)]
#[command(name = "thirdbvp", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve once and write the grid solution as CSV
    Solve(SolveArgs),
    /// Run a grid-refinement study and print an error/order table
    Study(StudyArgs),
    /// Check the contraction hypothesis q < 1
    Check(CheckArgs),
    /// Solve once and draw u as an SVG plot
    Plot(PlotArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Composite trapezium rule (second order)
    Trap,
    /// Modified Simpson rule (third order)
    Simpson,
    /// Simpson weights without the odd-node correction (diagnostic)
    SimpsonPlain,
}

impl From<MethodArg> for QuadratureMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Trap => QuadratureMethod::Trapezium,
            MethodArg::Simpson => QuadratureMethod::ModifiedSimpson,
            MethodArg::SimpsonPlain => QuadratureMethod::Simpson,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
}

/// Options shared by every command that runs the iteration.
#[derive(Args, Debug, Clone)]
pub struct SolveOptions {
    /// Problem file
    pub file: PathBuf,

    /// Number of subintervals
    #[arg(long, default_value_t = 64)]
    pub n: usize,

    /// Stopping tolerance on successive iterates of phi
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Iteration cap
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value_t = MethodArg::Simpson)]
    pub method: MethodArg,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub opts: SolveOptions,

    /// Write `t,u,y,z,phi` rows here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StudyArgs {
    /// Problem file
    pub file: PathBuf,

    /// Comma-separated grid sizes, each double the previous
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "8,16,32,64,128,256,512,1024"
    )]
    pub n_list: Vec<usize>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,

    /// Methods to tabulate, in column order
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "trap,simpson"
    )]
    pub methods: Vec<MethodArg>,

    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,

    /// Write the table here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Problem file
    pub file: PathBuf,

    /// Estimate sup|f| and the Lipschitz constants on a lattice with this
    /// many intervals per axis instead of trusting the file
    #[arg(long)]
    pub samples: Option<usize>,

    /// Box radius M for the estimate (defaults to the file's M)
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub opts: SolveOptions,

    /// Output SVG path
    #[arg(long)]
    pub svg: PathBuf,
}
