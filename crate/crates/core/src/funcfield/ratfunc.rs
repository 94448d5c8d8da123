use crate::arith::{Poly, Q};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// An element of Q(t) in canonical form: `num / den` with `den` monic and
/// `gcd(num, den) = 1`. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = d.lc();
        let inv = Q::one() / lc;
        RationalFunction { num: n.scale(&inv), den: d.scale(&inv) }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Self {
        RationalFunction { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_q(crate::arith::q(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True when the element lies in Q.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }.normalize_sign())
    }

    fn normalize_sign(self) -> Self {
        // den already monic when raised from a monic den
        self
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitute a rational value for t; `None` when t0 is a pole.
    pub fn eval(&self, t0: &Q) -> Option<Q> {
        let d = self.den.eval(t0);
        (!d.is_zero()).then(|| self.num.eval(t0) / d)
    }

    /// f(t + c).
    pub fn shift_var(&self, c: &Q) -> Self {
        let s = Poly::from_coeffs(vec![c.clone(), Q::one()]);
        Self::reduce(self.num.compose(&s), self.den.compose(&s))
    }

    /// Crude size measure: total count of coefficient digits.
    pub fn digit_size(&self) -> usize {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.numer().bits() as usize + c.denom().bits() as usize)
            .sum::<usize>()
            * 30103
            / 100000
    }

    /// Degree as a map P^1 -> P^1: max(deg num, deg den).
    pub fn height_degree(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::reduce(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction { num: &self.num * &o.num, den: Poly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = o.den.exact_div(&g1).unwrap();
        let c = o.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        let num = &a * &c;
        let den = &b * &d;
        let inv = Q::one() / den.lc();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self * &o.inv().expect("division by zero in Q(t)")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RF({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse_rational_function(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = rf("(2*t+2)/(4*t^2-4)");
        assert_eq!(a.den(), &Poly::from_ints(&[-1, 1]));
        assert_eq!(a.to_string(), "(1/2)/(t-1)");
        assert_eq!(rf("t/2").to_string(), "1/2*t");
    }

    #[test]
    fn field_ops() {
        let a = rf("(t^2+1)/(t-3)^2");
        let b = rf("t-3");
        assert_eq!(&(&a * &b) * &b, rf("t^2+1"));
        assert_eq!(&(&a - &a), &RationalFunction::zero());
        assert_eq!(&a / &a, RationalFunction::one());
        assert_eq!(a.pow(-2).unwrap(), rf("(t-3)^4/(t^2+1)^2"));
    }
}
