//! The two shipped invariants: `log |M|` and the free rank.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::norm::NormValue;
use crate::error::{Error, Result};
use crate::module::{Cardinality, ModuleObject};
use crate::submodule::{Submodule, Support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantTag {
    Log,
    Rank,
}

impl fmt::Display for InvariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantTag::Log => write!(f, "log"),
            InvariantTag::Rank => write!(f, "rank"),
        }
    }
}

impl FromStr for InvariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(InvariantTag::Log),
            "rank" | "rk" => Ok(InvariantTag::Rank),
            _ => Err(Error::InvalidOption(format!("unknown invariant `{s}`"))),
        }
    }
}

fn log_of(card: Cardinality) -> NormValue {
    match card {
        Cardinality::Finite(n) => NormValue::log_of(n),
        Cardinality::Infinite => NormValue::Infinite,
    }
}

/// `i(M)`.
pub fn invariant_of_module(tag: InvariantTag, m: &ModuleObject) -> Result<NormValue> {
    match tag {
        InvariantTag::Log => Ok(log_of(m.cardinality())),
        // Shift blocks are finite, so shift modules are torsion.
        InvariantTag::Rank if m.is_shift() => Ok(NormValue::zero()),
        InvariantTag::Rank => Ok(NormValue::units(m.free_rank()? as i64)),
    }
}

/// `i(N)` for a submodule viewed as a module.
pub fn invariant(tag: InvariantTag, n: &Submodule) -> Result<NormValue> {
    match tag {
        InvariantTag::Log => Ok(log_of(n.cardinality()?)),
        InvariantTag::Rank => match n.support() {
            Support::Full => Ok(NormValue::units(n.free_rank()? as i64)),
            Support::Window(_) | Support::Uniform => Ok(NormValue::zero()),
        },
    }
}
