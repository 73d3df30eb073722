//! JSON file formats for seeds, paths, points, cones and train tracks.
//!
//! A path file holds the initial seed in one of three ways and a list of
//! steps:
//!
//! ```json
//! { "seed": { "n": 2, "unfrozen": [0, 1], "B": [[0, 1], [-1, 0]] },
//!   "steps": [{ "flip": 0 }, { "perm": [1, 0] }, { "cycles": [[0, 1]] }] }
//! ```
//!
//! Instead of `"seed"` a file may give `"seed_file"` (resolved relative to
//! the path file) or a `"triangulation"`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::arith::Scalar;
use crate::seed::{b_from_triangulation, MutationPath, PathStep, Permutation, Seed, SeedError, Triangulation};
use crate::trop::TropPoint;

/// Version tag written into every report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("malformed JSON in {source_name}: {reason}")]
    Json { source_name: String, reason: String },
    #[error("path file must give exactly one of \"seed\", \"seed_file\" and \"triangulation\"")]
    SeedSource,
    #[error("a seed file reference needs a base directory")]
    NoBaseDir,
    #[error(transparent)]
    Seed(#[from] SeedError),
}

/// A step as written in files; `cycles` is a permutation in cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StepSpec {
    Flip(usize),
    Perm(Vec<usize>),
    Cycles(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Seed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<Triangulation>,
    #[serde(default)]
    pub steps: Vec<StepSpec>,
}

impl PathSpec {
    /// Builds the path; `base` resolves a relative `seed_file`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<MutationPath, IoError> {
        let seed = match (&self.seed, &self.seed_file, &self.triangulation) {
            (Some(s), None, None) => s.clone(),
            (None, Some(f), None) => {
                let f = if f.is_absolute() {
                    f.clone()
                } else {
                    base.ok_or(IoError::NoBaseDir)?.join(f)
                };
                load_seed(&f)?
            }
            (None, None, Some(t)) => b_from_triangulation(t)?,
            _ => return Err(IoError::SeedSource),
        };
        let n = seed.n();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(match s {
                    StepSpec::Flip(k) => PathStep::Flip(*k),
                    StepSpec::Perm(images) => PathStep::Permute(Permutation::new(images.clone())?),
                    StepSpec::Cycles(c) => PathStep::Permute(Permutation::from_cycles(n, c)?),
                })
            })
            .collect::<Result<Vec<_>, SeedError>>()?;
        Ok(MutationPath::new(seed, steps)?)
    }
}

/// The explicit form of a path, suitable for embedding in a report.
pub fn path_spec(path: &MutationPath) -> PathSpec {
    PathSpec {
        seed: Some(path.initial().clone()),
        seed_file: None,
        triangulation: None,
        steps: path
            .steps()
            .iter()
            .map(|s| match s {
                PathStep::Flip(k) => StepSpec::Flip(*k),
                PathStep::Permute(p) => StepSpec::Perm(p.images().to_vec()),
            })
            .collect(),
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        source_name: source_name.to_string(),
        reason: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(file: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(file).map_err(|e| IoError::Read {
        path: file.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_json(&text, &file.display().to_string())
}

pub fn load_seed(file: &Path) -> Result<Seed, IoError> {
    read_json(file)
}

pub fn load_path(file: &Path) -> Result<MutationPath, IoError> {
    let spec: PathSpec = read_json(file)?;
    spec.resolve(file.parent())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointFile {
    Bare(Vec<Scalar>),
    Wrapped { coords: Vec<Scalar> },
}

impl PointFile {
    fn into_point(self) -> TropPoint<Scalar> {
        match self {
            PointFile::Bare(c) | PointFile::Wrapped { coords: c } => TropPoint::new(c),
        }
    }
}

/// A point given inline as a JSON array such as `[1, "-1/2", "sqrt(5)"]`.
pub fn parse_point(text: &str) -> Result<TropPoint<Scalar>, IoError> {
    parse_json::<Vec<Scalar>>(text, "point").map(TropPoint::new)
}

/// A point file: `{"coords": [...]}` or a bare array.
pub fn load_point(file: &Path) -> Result<TropPoint<Scalar>, IoError> {
    read_json::<PointFile>(file).map(PointFile::into_point)
}
