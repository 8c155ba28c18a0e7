use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexes::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::finhom::{BarBudget, DEFAULT_GROUP_CUTOFF};
use crate::rings::FiniteRing;

use super::checks::CHECK_IDS;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SCISSORS_CACHE_DIR";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(Error::invalid(format!("unknown format `{s}` (json, csv, md)"))),
        }
    }
}

/// What to run and with which limits. Every field has a default, so an
/// empty TOML document is a valid config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Rings for the per-ring checks. Empty means each check uses its own list.
    pub rings: Vec<String>,
    /// Enabled check ids, `c01` to `c11`. Empty means all.
    pub checks: Vec<String>,
    /// Highest homology degree computed for the complexes.
    pub max_degree: usize,
    /// Cap on the total number of tuples in a complex.
    pub complex_budget: u64,
    /// Largest group order for bar homology in degrees 0 to 3.
    pub bar_max_order: [usize; 4],
    /// Cap on the chain rank used for explicit cycles.
    pub bar_max_dense: usize,
    /// Largest `PGL_2` that is enumerated.
    pub group_cutoff: usize,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let bar = BarBudget::default();
        SuiteConfig {
            rings: Vec::new(),
            checks: Vec::new(),
            max_degree: 3,
            complex_budget: DEFAULT_BUDGET,
            bar_max_order: bar.max_order,
            bar_max_dense: bar.max_dense,
            group_cutoff: DEFAULT_GROUP_CUTOFF,
            threads: 0,
            cache_dir: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<SuiteConfig> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<SuiteConfig> {
        SuiteConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Ring specs must parse and check ids must be known. A zero bar budget
    /// is allowed and makes the bar homology checks skip.
    pub fn validate(&self) -> Result<()> {
        for s in &self.rings {
            s.parse::<crate::rings::RingSpec>()?;
        }
        for id in &self.checks {
            if !CHECK_IDS.contains(&id.as_str()) {
                return Err(Error::invalid(format!("unknown check id `{id}`")));
            }
        }
        if self.max_degree == 0 || self.max_degree > 3 {
            return Err(Error::invalid(format!("max_degree must be in 1..=3, got {}", self.max_degree)));
        }
        if self.complex_budget == 0 || self.group_cutoff == 0 {
            return Err(Error::invalid("complex_budget and group_cutoff must be positive"));
        }
        Ok(())
    }

    pub fn bar_budget(&self) -> BarBudget {
        BarBudget {
            max_order: self.bar_max_order,
            max_dense: self.bar_max_dense,
        }
    }

    pub fn enabled(&self, id: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|c| c == id)
    }

    /// The config directory, falling back to the environment variable.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub(crate) fn ring(&self, spec: &str) -> Result<FiniteRing> {
        FiniteRing::from_spec(&spec.parse()?, crate::rings::DEFAULT_CUTOFF)
    }
}
