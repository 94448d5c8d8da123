//! Exact heights over the rational function field Q(t): places and the
//! product formula, Weil and local heights, dynamical escape rates and
//! Arakelov-Green's functions with good bases, elliptic curves with their
//! reduction theory and canonical heights, and closed-form effective bounds.
//!
//! Everything is exact: rational numbers are `BigRational`, logarithms of
//! absolute values are carried as rational multiples of `log e = 1`, and the
//! only approximations are escape rates, which come with certified intervals.

pub mod arith;
pub mod budget;
pub mod constants;
pub mod dynsys;
pub mod elliptic;
pub mod error;
pub mod funcfield;
pub mod goodbasis;
pub mod green;
pub mod interval;
pub mod mpoly;
pub mod projheights;

pub use arith::{Poly, Q};
pub use error::{Error, Result};
pub use funcfield::{Place, RationalFunction};
