//! Plain-text tables of zeta zero ordinates.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Environment variable consulted when no `--zeros-file` is given.
pub const ZEROS_ENV: &str = "EULER_HORIZON_ZEROS";

/// Fewest ordinates a table may hold.
pub const MIN_ZEROS: usize = 100;

#[derive(Debug, Error)]
pub enum ZerosFileError {
    #[error("no zeros file given and {ZEROS_ENV} is unset")]
    Missing,
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: expected a positive decimal ordinate, found {text:?}")]
    Malformed { path: PathBuf, line: usize, text: String },
    #[error("{path} holds {count} ordinates; at least {MIN_ZEROS} are required")]
    TooFew { path: PathBuf, count: usize },
}

/// The explicit path, else the environment default.
pub fn resolve(path: Option<&Path>) -> Option<PathBuf> {
    path.map(Path::to_path_buf).or_else(|| std::env::var_os(ZEROS_ENV).map(PathBuf::from))
}

/// One ordinate per line; `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str, path: &Path) -> Result<Vec<f64>, ZerosFileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(g) if g > 0.0 && g.is_finite() => out.push(g),
            _ => {
                return Err(ZerosFileError::Malformed { path: path.to_path_buf(), line: i + 1, text: line.to_string() })
            }
        }
    }
    if out.len() < MIN_ZEROS {
        return Err(ZerosFileError::TooFew { path: path.to_path_buf(), count: out.len() });
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<f64>, ZerosFileError> {
    let text = fs::read_to_string(path).map_err(|source| ZerosFileError::Io { path: path.to_path_buf(), source })?;
    parse(&text, path)
}

pub fn load(path: Option<&Path>) -> Result<Vec<f64>, ZerosFileError> {
    read(&resolve(path).ok_or(ZerosFileError::Missing)?)
}

/// Number of ordinates strictly below `t`.
pub fn count_below(zeros: &[f64], t: f64) -> usize {
    zeros.partition_point(|g| *g < t)
}
