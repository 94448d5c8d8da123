//! The function field K = Q(t): exact elements, places, valuations,
//! absolute values and the product formula.

mod local;
mod parse;
mod place;
mod ratfunc;

pub use local::{Chart, LocalRing};
pub use parse::parse_rational_function;
pub use place::{log_abs, ord_at, product_formula_check, support, LogAbs, Place};
pub use ratfunc::RationalFunction;
