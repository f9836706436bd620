use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "curvtool", version, about = "IP curvature tensors: checks, identities and searches")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// RNG seed; the CURVTOOL_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a curvature tensor: IP verdict, eigenvalue structure, Ricci.
    Tensor(TensorArgs),
    /// Curvature checks for a named three-dimensional metric.
    Metric(MetricArgs),
    /// Operator identities on synthetic families.
    Identity(IdentityArgs),
    /// Arithmetic in Q[Y, t]/(t² + ‖Y‖²).
    Ring(RingArgs),
    /// Descent search for IP tensors with a rank census.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// `C(δ_ik δ_jl − δ_il δ_jk)`.
    Constant,
    /// `R_φ` for a reflection with `--minus` negative eigenvalues.
    Rphi,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    /// Tensor file (JSON with `dim` and `entries`).
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[arg(long, default_value_t = 7)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub minus: usize,
    /// Conjugate the builtin involution by a random rotation.
    #[arg(long)]
    pub conjugate: bool,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Exit with status 2 unless the tensor is IP.
    #[arg(long)]
    pub expect_ip: bool,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long)]
    pub name: String,
    /// Comma-separated `key=value` pairs.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub params: String,
    /// `x,y,z`.
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    pub point: String,
    /// Any of ricci, bianchi, h, trace, area, phi, cotton.
    #[arg(long, default_value = "ricci")]
    pub checks: String,
    #[arg(long, default_value_t = curvtool_core::metrics3::DEFAULT_FD_STEP)]
    pub fd_step: f64,
    /// Residual bound for the frame identities.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Ricci eigenvalues with `|ρ| ≤ rank-tol` count as zero.
    #[arg(long, default_value_t = 1e-9)]
    pub rank_tol: f64,
    /// Residual bound for the `φ²` quadratic fit.
    #[arg(long, default_value_t = 1e-6)]
    pub phi_tol: f64,
    /// Cotton residual below which the metric is reported conformally flat.
    #[arg(long, default_value_t = 1e-4)]
    pub cotton_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    /// Four Gaussian 4×3 matrices.
    Random,
    /// The three model blocks plus one Gaussian matrix.
    Model,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// w-rank1, m-identity, cubic-pencil, cc0-probe or minor-div.
    #[arg(long)]
    pub name: String,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Fixed family scale; cycles through 0.5, 1, 2 when absent.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Comma-separated values of t for m-identity.
    #[arg(long, default_value = "-1,0,0.7,2", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
    /// `‖Z‖`; defaults to `√(a² + b²)`.
    #[arg(long)]
    pub z: Option<f64>,
    /// Random combinations tried per space in cc0-probe.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = BasisKind::Random)]
    pub basis: BasisKind,
    /// Rows separated by `;`, entries by `,`, each of degree ≤ 1 in t.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub vars: usize,
    /// Overrides the identity's default tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long, default_value_t = 3)]
    pub vars: usize,
    /// Polynomial literal such as `3/2*y1^2*t - y3 + t^2`.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    /// Second operand; the report then includes the product.
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<String>,
    /// Largest valuation probed.
    #[arg(long, default_value_t = 16)]
    pub cap: usize,
    /// Exit with status 2 unless the valuation equals this.
    #[arg(long)]
    pub expect_valuation: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 7)]
    pub dim: usize,
    #[arg(long, default_value_t = 50)]
    pub seeds: usize,
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    /// Residual below which a candidate counts as converged.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 24)]
    pub batch: usize,
    #[arg(long, default_value_t = 500)]
    pub verify_planes: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub rank_tol: f64,
    #[arg(long, default_value_t = 0.5)]
    pub anchored_fraction: f64,
}
