//! Sweep files.
//!
//! ```toml
//! base = "builtin:angpuang"   # or a scenario file, relative to this file
//! parameter = "risk-slope"
//! grid = [0.5, 1.0, 2.0, 4.0]
//! replications = 100          # optional
//! seed = 0                    # optional
//! ```

use std::path::{Path, PathBuf};

use reservoir_core::scenarios::{SweepConfig, SweepError};

#[derive(Debug, thiserror::Error)]
pub enum SweepFileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: SweepError },
}

pub fn load_sweep(path: &Path) -> Result<SweepConfig, SweepFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| SweepFileError::Read {
        path: path.into(),
        source,
    })?;
    parse_sweep(&text, path)
}

pub fn parse_sweep(text: &str, path: &Path) -> Result<SweepConfig, SweepFileError> {
    let config: SweepConfig = toml::from_str(text).map_err(|e| SweepFileError::Parse {
        path: path.into(),
        message: e.to_string(),
    })?;
    config.check().map_err(|source| SweepFileError::Config {
        path: path.into(),
        source,
    })?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use reservoir_core::scenarios::SweepParameter;

    #[test]
    fn defaults_apply() {
        let c = parse_sweep(
            "base = \"builtin:simple1\"\nparameter = \"risk-slope\"\ngrid = [1.0, 2.0]\n",
            Path::new("s.toml"),
        )
        .unwrap();
        assert_eq!(c.parameter, SweepParameter::RiskSlope);
        assert_eq!(c.replications, 100);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn bad_grid_is_reported() {
        let e = parse_sweep(
            "base = \"x\"\nparameter = \"initial-volume-fraction\"\ngrid = [1.5]\n",
            Path::new("s.toml"),
        )
        .unwrap_err();
        assert!(e.to_string().contains("index 0"), "{e}");
        let e = parse_sweep(
            "base = \"x\"\nparameter = \"speed\"\ngrid = [1.0]\n",
            Path::new("s.toml"),
        )
        .unwrap_err();
        assert!(matches!(e, SweepFileError::Parse { .. }));
    }
}
