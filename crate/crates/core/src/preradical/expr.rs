use std::fmt;

use crate::module::ModuleObject;
use crate::submodule::Submodule;

/// A named pair `N ≤ M` indexing `α_N^M` or `ω_N^M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratingPair {
    pub module_name: String,
    pub submodule_name: String,
    pub submodule: Submodule,
}

impl GeneratingPair {
    pub fn new(module_name: &str, submodule_name: &str, submodule: Submodule) -> Self {
        GeneratingPair {
            module_name: module_name.to_string(),
            submodule_name: submodule_name.to_string(),
            submodule,
        }
    }

    pub fn module(&self) -> &ModuleObject {
        self.submodule.parent()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PreradicalExpr {
    Zero,
    Identity,
    Torsion,
    PTorsion(i64),
    Alpha(Box<GeneratingPair>),
    Omega(Box<GeneratingPair>),
    Meet(Box<PreradicalExpr>, Box<PreradicalExpr>),
    Join(Box<PreradicalExpr>, Box<PreradicalExpr>),
    Product(Box<PreradicalExpr>, Box<PreradicalExpr>),
    Coproduct(Box<PreradicalExpr>, Box<PreradicalExpr>),
}

impl PreradicalExpr {
    pub fn meet(l: PreradicalExpr, r: PreradicalExpr) -> Self {
        PreradicalExpr::Meet(Box::new(l), Box::new(r))
    }

    pub fn join(l: PreradicalExpr, r: PreradicalExpr) -> Self {
        PreradicalExpr::Join(Box::new(l), Box::new(r))
    }

    pub fn product(l: PreradicalExpr, r: PreradicalExpr) -> Self {
        PreradicalExpr::Product(Box::new(l), Box::new(r))
    }

    pub fn coproduct(l: PreradicalExpr, r: PreradicalExpr) -> Self {
        PreradicalExpr::Coproduct(Box::new(l), Box::new(r))
    }

    pub fn alpha(pair: GeneratingPair) -> Self {
        PreradicalExpr::Alpha(Box::new(pair))
    }

    pub fn omega(pair: GeneratingPair) -> Self {
        PreradicalExpr::Omega(Box::new(pair))
    }

    pub fn children(&self) -> Option<(&PreradicalExpr, &PreradicalExpr)> {
        match self {
            PreradicalExpr::Meet(l, r)
            | PreradicalExpr::Join(l, r)
            | PreradicalExpr::Product(l, r)
            | PreradicalExpr::Coproduct(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// No `alpha`/`omega` leaves; such expressions evaluate on shift modules.
    pub fn is_builtin_closure(&self) -> bool {
        match self {
            PreradicalExpr::Alpha(_) | PreradicalExpr::Omega(_) => false,
            _ => self.children().is_none_or(|(l, r)| l.is_builtin_closure() && r.is_builtin_closure()),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().map_or(0, |(l, r)| l.node_count() + r.node_count())
    }

    fn precedence(&self) -> u8 {
        match self {
            PreradicalExpr::Coproduct(..) => 0,
            PreradicalExpr::Join(..) => 1,
            PreradicalExpr::Meet(..) => 2,
            PreradicalExpr::Product(..) => 3,
            _ => 4,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &PreradicalExpr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for PreradicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self {
            PreradicalExpr::Zero => return write!(f, "zero"),
            PreradicalExpr::Identity => return write!(f, "id"),
            PreradicalExpr::Torsion => return write!(f, "tor"),
            PreradicalExpr::PTorsion(p) => return write!(f, "ptor({p})"),
            PreradicalExpr::Alpha(g) => return write!(f, "alpha({},{})", g.module_name, g.submodule_name),
            PreradicalExpr::Omega(g) => return write!(f, "omega({},{})", g.module_name, g.submodule_name),
            PreradicalExpr::Coproduct(..) => ":",
            PreradicalExpr::Join(..) => "|",
            PreradicalExpr::Meet(..) => "&",
            PreradicalExpr::Product(..) => ".",
        };
        let (l, r) = self.children().expect("binary node");
        let p = self.precedence();
        // Left associative: a right operand of equal precedence needs parentheses.
        write_operand(f, l, p)?;
        write!(f, " {op} ")?;
        write_operand(f, r, p + 1)
    }
}
