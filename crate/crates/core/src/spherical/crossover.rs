//! Crossover constants for the hybrid radial evaluator.
//!
//! R*(n) is the smallest |s|r on a geometric grid where escalated quadrature
//! and the leading asymptotic term agree to the table tolerance. The default
//! table is compiled in; `MH_CONSTANTS_PATH` names a replacement JSON file
//! of the same shape.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming an alternative constants file.
pub const CONSTANTS_ENV: &str = "MH_CONSTANTS_PATH";
/// Schema version understood by this build.
pub const CONSTANTS_VERSION: u32 = 1;

const EMBEDDED: &str = include_str!("../../data/crossover.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossoverTable {
    pub version: u32,
    /// Relative agreement that defines R*(n).
    pub tolerance: f64,
    /// The asymptotic branch also needs |Re s|·r at least this large.
    pub min_real_product: f64,
    /// |s|r up to which the default node heuristic is trusted without
    /// escalation.
    pub plain_quadrature_max: f64,
    /// R*(n) keyed by n. Dimensions without an entry always use quadrature.
    pub crossover: BTreeMap<usize, f64>,
}

impl CrossoverTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let table: CrossoverTable =
            serde_json::from_str(text).map_err(|e| Error::Constants(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        if self.version != CONSTANTS_VERSION {
            return Err(Error::Constants(format!(
                "version {} not supported (expected {CONSTANTS_VERSION})",
                self.version
            )));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.tolerance)
            || !positive(self.min_real_product)
            || !positive(self.plain_quadrature_max)
        {
            return Err(Error::Constants(
                "tolerances and thresholds must be positive".into(),
            ));
        }
        for (&n, &r) in &self.crossover {
            if n < 2 || !positive(r) {
                return Err(Error::Constants(format!(
                    "bad crossover entry n = {n}: {r}"
                )));
            }
        }
        Ok(())
    }

    /// The compiled-in table.
    pub fn embedded() -> &'static CrossoverTable {
        static TABLE: OnceLock<CrossoverTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            CrossoverTable::from_json(EMBEDDED).expect("embedded constants are valid")
        })
    }

    /// Load from a file path.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Constants(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The table in effect for this process: the file named by
    /// `MH_CONSTANTS_PATH` if set, otherwise the embedded one. Read once.
    pub fn current() -> Result<&'static CrossoverTable> {
        static CURRENT: OnceLock<std::result::Result<CrossoverTable, Error>> = OnceLock::new();
        let loaded = CURRENT.get_or_init(|| match std::env::var_os(CONSTANTS_ENV) {
            Some(path) if !path.is_empty() => CrossoverTable::load(path.as_ref()),
            _ => Ok(CrossoverTable::embedded().clone()),
        });
        loaded.as_ref().map_err(Clone::clone)
    }

    pub fn crossover(&self, n: usize) -> Option<f64> {
        self.crossover.get(&n).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}
