use std::path::{Path, PathBuf};

use clap::Args;
use signstab::io::{load_path, load_point, parse_point, read_json};
use signstab::{catalog, ArithError, Error, ExactCone, ExactPoint, MutationPath, Scalar, SignSeq};

/// Failure of one invocation, mapped to the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{kind}: {source}")]
    Domain { kind: &'static str, source: Error },
    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> CliError {
        let kind = match &source {
            Error::Arith(_) => "ArithError",
            Error::Matrix(_) => "MatrixError",
            Error::Seed(_) => "SeedError",
            Error::Trop(_) => "TropError",
            Error::Stability(_) => "StabilityError",
            Error::Reduction(_) => "ReductionError",
            Error::Track(_) => "TrackError",
            Error::Io(_) => "IoError",
        };
        CliError::Domain { kind, source }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                Error::from(e).into()
            }
        })*
    };
}

domain_from!(
    signstab::ArithError,
    signstab::MatrixError,
    signstab::SeedError,
    signstab::TropError,
    signstab::StabilityError,
    signstab::ReductionError,
    signstab::TrackError,
    signstab::IoError
);

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Where the mutation path comes from.
#[derive(Debug, Args)]
pub struct PathArgs {
    /// Path file with a seed (inline, by file or as a triangulation) and steps.
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// Seed file; the path is given by --flips.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Flip indices applied to --seed-file, e.g. 0,1,0.
    #[arg(long, value_delimiter = ',', requires = "seed_file")]
    pub flips: Vec<usize>,
    /// Bundled example: a2, sphere, annulus or kronecker<l>.
    #[arg(long)]
    pub example: Option<String>,
}

impl PathArgs {
    pub fn load(&self) -> Result<MutationPath, CliError> {
        match (&self.path, &self.seed_file, &self.example) {
            (Some(p), None, None) => Ok(load_path(p)?),
            (None, Some(s), None) => {
                let seed = signstab::io::load_seed(s)?;
                Ok(MutationPath::flips(seed, &self.flips)?)
            }
            (None, None, Some(name)) => {
                catalog::by_name(name).ok_or_else(|| usage(format!("unknown example {name:?}")))
            }
            _ => Err(usage("give exactly one of --path, --seed-file and --example")),
        }
    }
}

/// `--point` is either an inline JSON array or a point file.
pub fn point(arg: &str) -> Result<ExactPoint, CliError> {
    if arg.trim_start().starts_with('[') {
        Ok(parse_point(arg)?)
    } else {
        Ok(load_point(Path::new(arg))?)
    }
}

pub fn sign(arg: &str) -> Result<SignSeq, CliError> {
    arg.parse::<SignSeq>()
        .map_err(|e| usage(format!("bad sign sequence {arg:?}: {e}")))
}

pub fn scalar(arg: &str) -> Result<Scalar, CliError> {
    arg.parse::<Scalar>()
        .map_err(|e| usage(format!("bad scalar {arg:?}: {e}")))
}

pub fn cone(file: &Path) -> Result<ExactCone, CliError> {
    Ok(read_json(file)?)
}

/// The common radicand of the inputs; all irrational values must share one
/// field, which must match `expected` when given.
pub fn check_field<'a>(
    values: impl IntoIterator<Item = &'a Scalar>,
    expected: Option<u64>,
) -> Result<Option<u64>, CliError> {
    let mut found = expected;
    for v in values {
        if let Some(d) = v.radicand() {
            match found {
                Some(e) if e != d => return Err(ArithError::RadicandMismatch(e, d).into()),
                _ => found = Some(d),
            }
        }
    }
    Ok(found)
}
