use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::output::Format;
use crate::CliError;

/// Defaults for sweeps, read from a TOML file. Command-line flags win.
///
/// ```toml
/// cmax = 12
/// charmax = 2
/// levels = [2, 3, 4]
/// format = "csv"
/// jobs = 4
/// seed = 7
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub cmax: Option<i64>,
    pub charmax: Option<i64>,
    pub levels: Option<Vec<i64>>,
    pub d1: Option<Vec<i64>>,
    pub d2: Option<Vec<i64>>,
    pub f: Option<Vec<i64>>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Self =
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(c) = self.cmax {
            positive("cmax", c)?;
        }
        if let Some(r) = self.charmax {
            if r < 0 {
                return Err(CliError::Usage(format!("charmax must be nonnegative, got {r}")));
            }
        }
        for (name, v) in [("levels", &self.levels), ("d1", &self.d1), ("d2", &self.d2), ("f", &self.f)] {
            if let Some(v) = v {
                if v.is_empty() {
                    return Err(CliError::Usage(format!("{name} must be nonempty")));
                }
                for &x in v {
                    positive(name, x)?;
                }
            }
        }
        Ok(())
    }
}

pub fn positive(name: &str, x: i64) -> Result<(), CliError> {
    if x <= 0 {
        return Err(CliError::Usage(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}
