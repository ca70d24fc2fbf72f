//! Preradicals as evaluable expressions.

pub mod check;
pub mod eval;
pub mod expr;
pub mod parse;

pub use check::{check_assignment, check_naturality, compare_preradicals, NaturalityReport, Order, OrderVerdict, Violation};
pub use eval::eval_preradical;
pub use expr::{GeneratingPair, PreradicalExpr};
pub use parse::{parse_preradical, parse_with, NameScope, NameTable};
