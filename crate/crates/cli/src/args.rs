use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tribvp", version, about = "Solve and verify combined boundary value problems of ∂z̄³ω = f on the unit disc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the solution formula on a grid and write it as CSV.
    Solve(SolveArgs),
    /// Sweep the solvability conditions of a data set.
    Check(CheckArgs),
    /// Check the integral identity catalog by quadrature.
    Identities(IdentitiesArgs),
    /// Residual diagnostics of the solution, optionally against a saved field.
    Verify(VerifyArgs),
    /// Derive problem data from a polynomial solution.
    Manufacture(ManufactureArgs),
}

/// Problem data, either as a JSON document or as inline expressions.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Problem document (JSON).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Problem kind for inline data: dcr, ncr, bdn, ndn or dnd.
    #[arg(long, value_name = "KIND")]
    pub problem: Option<String>,
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub gamma0: Option<String>,
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub gamma1: Option<String>,
    /// Constant as `re,im` (or `re`).
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    pub c1: Option<String>,
}

/// Quadrature budget overrides.
#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long)]
    pub boundary_n: Option<usize>,
    #[arg(long)]
    pub area_nr: Option<usize>,
    #[arg(long)]
    pub area_ntheta: Option<usize>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Compensated summation in every area rule.
    #[arg(long)]
    pub compensated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Composed,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub rules: RuleArgs,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    /// `polar:NR,NTHETA,RMAX` or `spiral:N,RMAX`.
    #[arg(long, default_value = "polar:7,16,0.7")]
    pub grid: String,
    /// CSV output; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// JSON sidecar; defaults to the CSV path with a `.json` extension.
    #[arg(long, value_name = "PATH")]
    pub sidecar: Option<PathBuf>,
    /// Condition tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub rules: RuleArgs,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Report output; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = tribvp::identities::DEFAULT_SEED)]
    pub seed: u64,
    /// Restrict to these ids (repeatable).
    #[arg(long, value_name = "ID")]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Use doubled area budgets.
    #[arg(long)]
    pub doubled: bool,
    #[command(flatten)]
    pub rules: RuleArgs,
    /// Report output; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub rules: RuleArgs,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    /// Grid for the residual checks.
    #[arg(long, default_value = "polar:3,8,0.7")]
    pub grid: String,
    /// Saved solution CSV to compare against the data.
    #[arg(long, value_name = "PATH")]
    pub field: Option<PathBuf>,
    /// Field comparison tolerance.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Diagnostics output; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ManufactureArgs {
    /// Polynomial solution in z and conj(z).
    #[arg(long, allow_hyphen_values = true)]
    pub omega: String,
    #[arg(long)]
    pub kind: String,
    /// Problem document output; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Reference field CSV.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value = "polar:7,16,0.7")]
    pub grid: String,
}
