use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pointpair_core::geometry::{DomainShape, Point};
use pointpair_core::search::RefineOptions;

#[derive(Debug, Parser)]
#[command(
    name = "pointpair",
    version,
    about = "Point pair function bounds, searches and campaigns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one metric at a pair of points.
    Eval(EvalArgs),
    /// Sample bound records over seeded pairs and report margins.
    Verify(VerifyArgs),
    /// Compare extremal quotients with the sharp constants.
    Sharpness(SharpnessArgs),
    /// Estimate the quasi-metric constant from sampled triples.
    Quasi(QuasiArgs),
    /// Scan the distortion of p under disk automorphisms.
    Conjecture(ConjectureArgs),
    /// Elliptic integrals, the Grötzsch capacity and lambda_2.
    Specfun(SpecfunArgs),
    /// Check the Schwarz-type bounds for radial stretches of the disk.
    Qr(QrArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Halfspace,
    Ball,
    Punctured,
    Strip,
    Boxminusball,
}

#[derive(Debug, Clone, Args)]
pub struct DomainArgs {
    #[arg(long, value_enum, default_value = "halfspace")]
    pub domain: DomainKind,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Strip `0 < x_1 < 2r`: the half-width r.
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    /// Box `(-L, L)^n`: the half-side L.
    #[arg(long, default_value_t = 2.0)]
    pub half_side: f64,
    /// Radius of the ball removed from the box.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// A puncture, `x1,x2,...`; repeatable. Defaults to the origin.
    #[arg(long = "puncture", value_parser = parse_point, allow_hyphen_values = true)]
    pub punctures: Vec<Point>,
}

impl DomainArgs {
    pub fn build(&self) -> pointpair_core::Result<DomainShape> {
        let n = self.dim;
        match self.domain {
            DomainKind::Halfspace => DomainShape::half_space(n),
            DomainKind::Ball => DomainShape::unit_ball(n),
            DomainKind::Punctured if self.punctures.is_empty() => DomainShape::punctured_at_origin(n),
            DomainKind::Punctured => DomainShape::punctured(n, self.punctures.clone()),
            DomainKind::Strip => DomainShape::strip(n, self.half_width),
            DomainKind::Boxminusball => DomainShape::ball_complement_in_box(n, self.half_side, self.radius),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Report,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "report")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RefineArgs {
    /// Refine the sampled extremum with simplex searches.
    #[arg(long)]
    pub refine: bool,
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Sampled configurations ranked before choosing the starts.
    #[arg(long, default_value_t = 2048)]
    pub pool: usize,
}

impl RefineArgs {
    pub fn options(&self, seed: u64) -> RefineOptions {
        RefineOptions {
            starts: self.starts,
            pool: self.pool,
            ..RefineOptions::with_seed(seed)
        }
    }
}

/// `--alpha 4` or `--alphas 0.5,1,4`; both may be given.
#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Vec<f64>,
}

impl AlphaArgs {
    pub fn grid(&self, default: &[f64]) -> Vec<f64> {
        let g: Vec<f64> = self.alpha.iter().chain(&self.alphas).copied().collect();
        if g.is_empty() {
            default.to_vec()
        } else {
            g
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// gpp, p, j, jstar, s, t, rho (hyperbolic distance of the domain) or th.
    #[arg(long, default_value = "gpp")]
    pub metric: String,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Point,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: Point,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Bound id or family (e.g. `lem4.1`); repeatable. `cor3.4` checks the
    /// quasi-metric constant.
    #[arg(long, value_delimiter = ',', required_unless_present = "all")]
    pub bound: Vec<String>,
    #[arg(long, conflicts_with = "bound")]
    pub all: bool,
    #[command(flatten)]
    pub alphas: AlphaArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Bound id or family; defaults to every record with a sharpness claim.
    #[arg(long, value_delimiter = ',')]
    pub bound: Vec<String>,
    #[command(flatten)]
    pub alphas: AlphaArgs,
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    #[arg(long, default_value_t = 2048)]
    pub pool: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuasiArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    pub alphas: AlphaArgs,
    /// Sampled triples per alpha.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub alphas: AlphaArgs,
    /// The automorphism parameter, `re` or `re,im`; repeatable.
    #[arg(long = "a", value_parser = parse_complex, allow_hyphen_values = true, required = true)]
    pub a: Vec<Complex64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Also check the two-sided conformal distortion factors.
    #[arg(long)]
    pub conformal: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpecfunArgs {
    /// Estimate lambda_2 from the capacity asymptotics.
    #[arg(long)]
    pub lambda2: bool,
    #[arg(long, default_value_t = 1e8)]
    pub tmax: f64,
    /// Moduli r in [0, 1) at which to tabulate K(r).
    #[arg(long = "ell-k", value_delimiter = ',')]
    pub ell_k: Vec<f64>,
    /// Arguments t > 1 at which to tabulate gamma_2(t).
    #[arg(long, value_delimiter = ',')]
    pub gamma2: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QrArgs {
    /// Dilatations of the radial stretches.
    #[arg(long = "k", value_delimiter = ',', default_values_t = vec![1.0, 2.0, 4.0])]
    pub k: Vec<f64>,
    #[command(flatten)]
    pub alphas: AlphaArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Capacity limit parameter for lambda_2.
    #[arg(long, default_value_t = 1e8)]
    pub tmax: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("`{c}`: {e}")))
        .collect()
}

pub fn parse_point(s: &str) -> Result<Point, String> {
    Point::new(parse_floats(s)?).map_err(|e| e.to_string())
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match parse_floats(s)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}
