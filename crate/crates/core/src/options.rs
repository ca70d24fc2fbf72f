//! Computation limits shared by enumeration and entropy code.

use serde::{Deserialize, Serialize};

use crate::entropy::norm::DEFAULT_PRECISION_BITS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    /// Starting precision for mixed unit/log comparisons.
    pub precision_bits: u32,
    /// Cap on enumerated sets: module elements, submodule lattices, `End(M)`.
    pub max_order: u64,
    /// Cap on the support window of shift submodules.
    pub max_window: usize,
    /// Largest candidate window `s` for shift-module suprema.
    pub s_max: usize,
    /// Number of equal trailing differences required for a slope.
    pub fekete_window: usize,
    /// Coordinate bound for sampling submodules of modules with free part.
    pub coordinate_bound: i64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision_bits: DEFAULT_PRECISION_BITS,
            max_order: 4096,
            max_window: 64,
            s_max: 6,
            fekete_window: 4,
            coordinate_bound: 2,
        }
    }
}

fn env_number<T: std::str::FromStr>(key: &str) -> Result<Option<T>> {
    match std::env::var(key) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidOption(format!("{key}={v}"))),
        Err(_) => Ok(None),
    }
}

impl Options {
    /// Defaults overridden by `ENTROFLOW_PRECISION_BITS`, `ENTROFLOW_MAX_ORDER`
    /// and `ENTROFLOW_MAX_WINDOW`.
    pub fn from_env() -> Result<Self> {
        let mut o = Options::default();
        if let Some(v) = env_number("ENTROFLOW_PRECISION_BITS")? {
            o.precision_bits = v;
        }
        if let Some(v) = env_number("ENTROFLOW_MAX_ORDER")? {
            o.max_order = v;
        }
        if let Some(v) = env_number("ENTROFLOW_MAX_WINDOW")? {
            o.max_window = v;
        }
        Ok(o)
    }

    pub(crate) fn cap(&self) -> u128 {
        self.max_order as u128
    }
}
