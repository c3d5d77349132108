use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "lattes", version, about = "Lattès maps, canonical heights, Tate curves and skeleton valuations")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    pub output: Output,

    /// Worker threads for batch items; output order does not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Lattès map f with f(x(P)) = x([m]P).
    Lattes(MapArgs),
    /// Canonical height of one or more points of P¹(Q).
    Height(HeightArgs),
    /// Exact orbit data or a wandering certificate.
    Preperiodic(PointArgs),
    /// Skeleton valuations val(t) of x on the Tate curve.
    Skeleton(SkeletonArgs),
    /// Evaluate Tate's series at ζ and check the curve equation.
    TateVerify(TateVerifyArgs),
    /// Tate parameter q with j(q) = j.
    QFromJ(QFromJArgs),
    /// Preimage tower f^n(q_n) = q0 at a good-reduction prime.
    Tower(TowerArgs),
    /// Newton-polygon valuation spectrum of an integer polynomial.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Coefficients a1,a2,a3,a4,a6 (integers or fractions) or a fixture name.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Multiplier m, |m| ≥ 2.
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Points of P¹(Q) as n/d, n, or inf; comma-separated or repeated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub point: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct HeightArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Largest integer size, in bits, the iteration may hold.
    #[arg(long, default_value_t = lattes_core::heights::DEFAULT_BIT_BUDGET)]
    pub bit_budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SkeletonArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    #[arg(long)]
    pub p: u64,
    /// Comma-separated log-radii t, e.g. 1/5,1/3,1/2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<String>,
    #[arg(long, default_value_t = 40)]
    pub precision: i64,
    /// Initial truncation K; escalated automatically.
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TateVerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    #[arg(long)]
    pub p: u64,
    /// Comma-separated ζ values (rationals).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub zeta: Vec<String>,
    #[arg(long, default_value_t = 40)]
    pub precision: i64,
}

#[derive(Args, Debug, Clone)]
pub struct QFromJArgs {
    /// j-invariant as a rational, e.g. -1/15558.
    #[arg(long, allow_hyphen_values = true)]
    pub j: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 40)]
    pub precision: i64,
}

#[derive(Args, Debug, Clone)]
pub struct TowerArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub q0: String,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    /// Integer coefficients, constant term first, e.g. -3,0,1.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub poly: Vec<String>,
    #[arg(long)]
    pub p: u64,
    /// Ramification index for the membership test in (1/e)Z.
    #[arg(long, default_value_t = 1)]
    pub e: u64,
}
