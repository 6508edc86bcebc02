use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use quatspin_core::{parse_rational, ResourceCap, DEFAULT_MAX_M};

use crate::error::CliError;

pub const MAX_M_ENV: &str = "QUATSPIN_MAX_M";

#[derive(Parser, Debug)]
#[command(name = "quatspin", version)]
#[command(
    about = "Exact verification of spinor identities on quaternionic model spaces and the resulting Dirac eigenvalue bounds"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every structural, spectral and operator-identity check
    Verify,
    /// Tabulate the block constants A^{±±}_{r,k}, computed and closed form
    Constants,
    /// Case A/B bound coefficients, the universal bound and comparison bounds
    Bounds(BoundsArgs),
    /// The (r, k) block lattice with dimensions and eigenvalues
    Decompose,
    /// Commutators, rotated spectra and the top-weight search for sl(2) modules
    So3Check(So3Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Single quaternionic dimension m
    #[arg(long, global = true, conflicts_with = "m_range")]
    pub m: Option<usize>,

    /// Inclusive range of m, written a..b
    #[arg(long, global = true)]
    pub m_range: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,

    /// Residual tolerance of the float backend
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Corrupt one entry of this gamma matrix before verifying
    #[arg(long, global = true, hide = true)]
    pub corrupt_gamma: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Scalar curvature, e.g. "4" or "5/2"
    #[arg(long, default_value = "4")]
    pub kappa: String,

    /// Complex dimension for the Kähler comparison bounds (default 2m)
    #[arg(long)]
    pub complex_dim: Option<usize>,

    /// Largest m for the enumerated monotonicity and dominance properties
    #[arg(long, default_value_t = 50)]
    pub property_max_m: usize,
}

#[derive(Args, Debug)]
pub struct So3Args {
    /// Largest highest weight for commutator and Casimir checks
    #[arg(long, default_value_t = 50)]
    pub max_r_commutators: usize,

    /// Largest highest weight for the rotation checks
    #[arg(long, default_value_t = 10)]
    pub max_r: usize,

    #[arg(long, default_value_t = 10)]
    pub rotations: usize,

    #[arg(long, default_value_t = 100)]
    pub vectors: usize,

    #[arg(long, default_value_t = 1000)]
    pub budget: usize,

    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
}

/// Validated settings shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m_range: RangeInclusive<usize>,
    pub backend: Backend,
    pub tolerance: f64,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub corrupt_gamma: Option<usize>,
    pub cap: ResourceCap,
}

pub fn parse_m_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid m range {text:?}, expected a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn parse_kappa(text: &str) -> Result<BigRational, CliError> {
    let kappa = parse_rational(text).map_err(|e| CliError::Usage(e.to_string()))?;
    if kappa <= BigRational::from_integer(0.into()) {
        return Err(CliError::Usage(format!(
            "kappa must be positive, got {text}"
        )));
    }
    Ok(kappa)
}

/// Cap from the environment value, or the default.
pub fn resource_cap(env_value: Option<&str>) -> Result<ResourceCap, CliError> {
    match env_value {
        None => Ok(ResourceCap {
            max_m: DEFAULT_MAX_M,
        }),
        Some(v) => v
            .trim()
            .parse()
            .map(|max_m| ResourceCap { max_m })
            .map_err(|_| {
                CliError::Usage(format!("{MAX_M_ENV}={v:?} is not a nonnegative integer"))
            }),
    }
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs, env_cap: Option<&str>) -> Result<Self, CliError> {
        let m_range = match (&args.m, &args.m_range) {
            (Some(0), _) => return Err(CliError::Usage("m must be positive".into())),
            (Some(m), _) => *m..=*m,
            (None, Some(text)) => parse_m_range(text)?,
            (None, None) => 1..=2,
        };
        if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
            return Err(CliError::Usage(format!(
                "tolerance must be positive, got {}",
                args.tolerance
            )));
        }
        Ok(RunConfig {
            m_range,
            backend: args.backend,
            tolerance: args.tolerance,
            format: args.format,
            seed: args.seed,
            out: args.out.clone(),
            corrupt_gamma: args.corrupt_gamma,
            cap: resource_cap(env_cap)?,
        })
    }

    /// Refuses ranges that reach past the resource cap.
    pub fn check_cap(&self) -> Result<(), CliError> {
        let top = *self.m_range.end();
        if top > self.cap.max_m {
            return Err(CliError::Resource(format!(
                "m = {top} exceeds the resource cap {} (raise it with {MAX_M_ENV})",
                self.cap.max_m
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_m_range("1..3").unwrap(), 1..=3);
        assert_eq!(parse_m_range("2..=2").unwrap(), 2..=2);
        assert!(parse_m_range("3..1").is_err());
        assert!(parse_m_range("0..2").is_err());
        assert!(parse_m_range("x").is_err());
    }

    #[test]
    fn kappa() {
        assert_eq!(
            parse_kappa("5/2").unwrap(),
            BigRational::new(5.into(), 2.into())
        );
        assert!(parse_kappa("0").is_err());
        assert!(parse_kappa("-1").is_err());
        assert!(parse_kappa("abc").is_err());
    }

    #[test]
    fn cap_from_env() {
        assert_eq!(resource_cap(None).unwrap().max_m, DEFAULT_MAX_M);
        assert_eq!(resource_cap(Some("6")).unwrap().max_m, 6);
        assert!(resource_cap(Some("six")).is_err());
    }
}
