pub mod linalg;
pub mod modp;
pub mod poly;
pub mod zpoly;

pub use poly::{fmt_q, q, qi, Poly, Q};
