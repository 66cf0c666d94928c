//! Formulas, their concrete syntax, and finite adequate sets.

mod closure;
mod formula;
mod parse;

pub use closure::{adequate_closure, box_disjunction, closure_box_count, predicted_rhd_operands, AdequateContext};
pub use formula::{Formula, Unicode};
pub(crate) use parse::parse_pattern;
pub use parse::{parse, ParseError};
