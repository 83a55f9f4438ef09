use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "toepfactor", version, about = "Factor matrices into products of Toeplitz matrices")]
pub struct Cli {
    /// Print a single JSON object instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Constructive decomposition of an exact matrix.
    Factor(FactorArgs),
    /// Check a decomposition against a matrix.
    Verify(VerifyArgs),
    /// Minimal number of Toeplitz factors of diag(d, e, f).
    #[command(name = "classify-diag3")]
    ClassifyDiag3(ClassifyArgs),
    /// Check the polynomial identity that rules out two factors for diag(d, e, f).
    #[command(name = "certify-diag3")]
    CertifyDiag3(CertifyArgs),
    /// Write the polynomial system of `A = T_1 ⋯ T_s`.
    #[command(name = "emit-system")]
    EmitSystem(EmitArgs),
    /// Decide with a Gröbner basis whether `A` is a product of s Toeplitz matrices.
    Decide(DecideArgs),
    /// Numerical search for a factorization.
    Search(SearchArgs),
    /// Solve `M x = b` through a decomposition of `M`.
    Solve(SolveArgs),
    /// Levinson versus dense elimination multiplication counts.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    /// Matrix in `toepmat v1` format.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Write the decomposition as a `toepdecomp v1` stream.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the decomposition as a directory of `toepmat v1` files.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// `toepdecomp v1` file, or a directory written by `--out-dir`.
    #[arg(long, value_name = "PATH")]
    pub decomp: PathBuf,
    /// Max-norm tolerance for float decompositions, relative to the largest entry.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(allow_hyphen_values = true)]
    pub d: String,
    #[arg(allow_hyphen_values = true)]
    pub e: String,
    #[arg(allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Also specialize to a point and print the scaled multipliers.
    #[arg(long, num_args = 3, value_names = ["D", "E", "F"], allow_hyphen_values = true)]
    pub at: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CasFlavor {
    Sage,
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also write a script for an external computer algebra system.
    #[arg(long, value_enum)]
    pub cas: Option<CasFlavor>,
    /// Path of the script (default: `<out>.sage`, or stdout).
    #[arg(long, value_name = "FILE")]
    pub cas_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Degrevlex,
    Lex,
}

#[derive(Args, Debug)]
pub struct DecideArgs {
    /// Target matrix in `toepmat v1` format (exact).
    #[arg(long = "in", value_name = "FILE", conflicts_with = "system", required_unless_present = "system")]
    pub input: Option<PathBuf>,
    /// A `toepsys v1` file instead of a matrix.
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
    #[arg(long, required_unless_present = "system")]
    pub s: Option<usize>,
    #[arg(long, value_enum, default_value_t = OrderArg::Degrevlex)]
    pub order: OrderArg,
    /// Minimal polynomial of an adjoined element, in the system's variables
    /// (repeatable), e.g. `w^2 + 3`.
    #[arg(long, value_name = "POLY")]
    pub adjoin: Vec<String>,
    /// For matrix input with entries in ℚ(i): work over ℚ with `z^2 + 1`.
    #[arg(long)]
    pub realify: bool,
    /// Reduction step budget (overrides TOEPFACTOR_BUDGET).
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 24)]
    pub max_degree: u32,
    /// Write the reduced basis as `toepgb v1`.
    #[arg(long, value_name = "FILE")]
    pub gb_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    FixLeading,
    Free,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual (Frobenius norm) counted as converged.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-15)]
    pub tol_step: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub damping: f64,
    #[arg(long, default_value_t = 0.3)]
    pub damping_decay: f64,
    #[arg(long, value_enum, default_value_t = GaugeArg::FixLeading)]
    pub gauge: GaugeArg,
    /// Try to round the factors to Gaussian rationals (denominators up to
    /// this bound) and verify exactly.
    #[arg(long, value_name = "MAXDEN")]
    pub rationalize: Option<u64>,
    /// Directory for the best decomposition.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_name = "PATH")]
    pub decomp: PathBuf,
    /// Right-hand side as an `n x 1` `toepmat v1` matrix.
    #[arg(long, value_name = "FILE")]
    pub rhs: PathBuf,
    /// Original matrix; when given, the residual `M x - b` is reported.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
