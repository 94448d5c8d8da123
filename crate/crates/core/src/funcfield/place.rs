use super::RationalFunction;
use crate::arith::zpoly::{factor_over_q, is_irreducible, poly_order};
use crate::arith::{q, Poly, Q};
use crate::error::{Error, Result};
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A place of Q(t): a monic irreducible polynomial, or the degree valuation at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

/// log|f|_v as an exact rational in units of log e.
pub type LogAbs = Q;

impl Place {
    /// Validates monicity and irreducibility over Q.
    pub fn finite(p: Poly) -> Result<Place> {
        if !p.is_monic() || p.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(format!("place polynomial {p} must be monic of degree >= 1")));
        }
        if !is_irreducible(&p) {
            return Err(Error::InvalidInput(format!("{p} is not irreducible over Q")));
        }
        Ok(Place::Finite(p))
    }

    /// The place t = c.
    pub fn at(c: i64) -> Place {
        Place::Finite(Poly::linear_root(q(c)))
    }

    /// Local degree N_v.
    pub fn local_degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }

    pub fn local_degree_q(&self) -> Q {
        q(self.local_degree() as i64)
    }

    /// ord_v of a nonzero polynomial.
    pub fn ord_poly(&self, f: &Poly) -> i64 {
        debug_assert!(!f.is_zero());
        match self {
            Place::Infinity => -(f.degree().unwrap() as i64),
            Place::Finite(p) => {
                let mut k = 0;
                let mut g = f.clone();
                while let Some(h) = g.exact_div(p) {
                    g = h;
                    k += 1;
                }
                k
            }
        }
    }

    /// ord_v(f), or `None` for f = 0.
    pub fn ord(&self, f: &RationalFunction) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        Some(self.ord_poly(f.num()) - self.ord_poly(f.den()))
    }

    /// A uniformizer: p for finite places, 1/t at infinity.
    pub fn uniformizer(&self) -> RationalFunction {
        match self {
            Place::Finite(p) => RationalFunction::from_poly(p.clone()),
            Place::Infinity => RationalFunction::new(Poly::one(), Poly::t()).unwrap(),
        }
    }

    /// Parses `inf` or a polynomial expression such as `t-3` or `(t^2+1)`.
    pub fn parse(s: &str) -> Result<Place> {
        let st = s.trim();
        if st == "inf" || st == "infinity" || st == "oo" {
            return Ok(Place::Infinity);
        }
        let f: RationalFunction = st.parse()?;
        if !f.is_polynomial() {
            return Err(Error::InvalidInput(format!("place {st} is not a polynomial")));
        }
        Place::finite(f.num().monic())
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            // degree-one places sort by their root, so (t) comes before (t-1)
            (Place::Finite(a), Place::Finite(b)) if a.degree() == Some(1) && b.degree() == Some(1) => {
                b.coeff(0).cmp(&a.coeff(0))
            }
            (Place::Finite(a), Place::Finite(b)) => poly_order(a, b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place{self}")
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn ord_at(f: &RationalFunction, v: &Place) -> Result<i64> {
    v.ord(f).ok_or(Error::ValuationOfZero)
}

/// log|f|_v = -N_v ord_v(f).
pub fn log_abs(f: &RationalFunction, v: &Place) -> Result<LogAbs> {
    Ok(q(-(v.local_degree() as i64) * ord_at(f, v)?))
}

/// All places where some element has nonzero order.
pub fn support(fs: &[RationalFunction]) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    for f in fs {
        if f.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        for part in [f.num(), f.den()] {
            if part.degree().unwrap_or(0) > 0 {
                for (p, _) in factor_over_q(part) {
                    out.insert(Place::Finite(p));
                }
            }
        }
        if f.num().degree() != f.den().degree() {
            out.insert(Place::Infinity);
        }
    }
    Ok(out)
}

/// Sum over the support of log|f|_v; always exactly zero.
pub fn product_formula_check(f: &RationalFunction) -> Result<Q> {
    let mut s = Q::zero();
    for v in support(std::slice::from_ref(f))? {
        s += log_abs(f, &v)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(ord_at(&rf("t"), &Place::at(0)).unwrap(), 1);
        assert_eq!(ord_at(&rf("t"), &Place::Infinity).unwrap(), -1);
        assert_eq!(ord_at(&rf("(t^2+1)/(t-3)^2"), &Place::at(3)).unwrap(), -2);
        assert_eq!(ord_at(&RationalFunction::zero(), &Place::at(0)), Err(Error::ValuationOfZero));
    }

    #[test]
    fn log_abs_weights_by_local_degree() {
        let v = Place::parse("t^2+1").unwrap();
        assert_eq!(log_abs(&rf("t^2+1"), &v).unwrap(), q(-2));
        assert_eq!(log_abs(&rf("1"), &v).unwrap(), q(0));
        assert_eq!(log_abs(&rf("5/7"), &Place::Infinity).unwrap(), q(0));
    }

    #[test]
    fn supports() {
        let s: Vec<_> = support(&[rf("t")]).unwrap().into_iter().collect();
        assert_eq!(s, vec![Place::at(0), Place::Infinity]);
        let s: Vec<_> = support(&[rf("t*(t-1)")]).unwrap().into_iter().collect();
        assert_eq!(s, vec![Place::at(0), Place::at(1), Place::Infinity]);
        assert!(support(&[rf("3")]).unwrap().is_empty());
    }

    #[test]
    fn product_formula_examples() {
        for s in ["t", "(t^3-2)/(t+5)^4", "42"] {
            assert_eq!(product_formula_check(&rf(s)).unwrap(), q(0));
        }
    }

    #[test]
    fn rejects_reducible_place() {
        assert!(Place::parse("t^2-1").is_err());
        assert!(Place::parse("t^2-2").is_ok());
    }
}
