//! Truncated completions of Q(t) at a place: the valuation ring modulo
//! pi^prec. Degree-one places and infinity use power series in a shifted
//! variable; higher-degree places work in Q[t]/(p^prec).

use super::{Place, RationalFunction};
use crate::arith::{Poly, Q};
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub enum Chart {
    /// t = s + c, uniformizer s.
    Shift(Q),
    /// t = 1/s, uniformizer s.
    Inf,
    /// uniformizer p(t) of degree >= 2.
    General(Poly),
}

/// The ring O_v / pi^prec with a fixed chart.

#[derive(Clone, Debug)]
pub struct LocalRing {
    chart: Chart,
    prec: usize,
    modulus: Option<Poly>,
}

impl Chart {
    pub fn for_place(v: &Place) -> Chart {
        match v {
            Place::Infinity => Chart::Inf,
            Place::Finite(p) if p.degree() == Some(1) => Chart::Shift(-p.coeff(0)),
            Place::Finite(p) => Chart::General(p.clone()),
        }
    }
}

fn series_inverse(u: &Poly, prec: usize) -> Poly {
    let u0 = u.coeff(0);
    debug_assert!(!u0.is_zero());
    let inv0 = Q::one() / &u0;
    let mut out = vec![Q::zero(); prec];
    if prec == 0 {
        return Poly::zero();
    }
    out[0] = inv0.clone();
    for n in 1..prec {
        let mut acc = Q::zero();
        for k in 1..=n.min(u.coeffs().len().saturating_sub(1)) {
            acc += u.coeff(k) * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    Poly::from_coeffs(out)
}

impl LocalRing {
    pub fn new(v: &Place, prec: usize) -> Self {
        let chart = Chart::for_place(v);
        let modulus = match &chart {
            Chart::General(p) => Some(p.pow(prec as u32)),
            _ => None,
        };
        LocalRing { chart, prec, modulus }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        match &self.modulus {
            None => a.truncate(self.prec),
            Some(m) => a.rem(m),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        match &self.modulus {
            None => {
                // truncated product
                if a.is_zero() || b.is_zero() {
                    return Poly::zero();
                }
                let n = self.prec.min(a.coeffs().len() + b.coeffs().len() - 1);
                let mut v = vec![Q::zero(); n];
                for (i, x) in a.coeffs().iter().enumerate().take(n) {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs().iter().enumerate().take(n - i) {
                        v[i + j] += x * y;
                    }
                }
                Poly::from_coeffs(v)
            }
            Some(m) => (a * b).rem(m),
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }

    /// ord of a representative; `None` when it vanishes to the working precision.
    pub fn ord(&self, a: &Poly) -> Option<usize> {
        if a.is_zero() {
            return None;
        }
        let k = match &self.chart {
            Chart::General(p) => {
                let mut k = 0;
                let mut g = a.clone();
                while let Some(h) = g.exact_div(p) {
                    g = h;
                    k += 1;
                }
                k
            }
            _ => a.low_degree().unwrap(),
        };
        (k < self.prec).then_some(k)
    }

    /// Exact division by pi^m of a representative divisible by it.
    pub fn div_pi(&self, a: &Poly, m: usize) -> Poly {
        if m == 0 || a.is_zero() {
            return a.clone();
        }
        match &self.chart {
            Chart::General(p) => a.exact_div(&p.pow(m as u32)).expect("not divisible by pi^m"),
            _ => Poly::from_coeffs(a.coeffs()[m..].to_vec()),
        }
    }

    /// (ord_v f, unit part of f mod pi^prec) for nonzero f.
    pub fn expand(&self, f: &RationalFunction) -> Option<(i64, Poly)> {
        if f.is_zero() {
            return None;
        }
        match &self.chart {
            Chart::Shift(c) => {
                let s = Poly::from_coeffs(vec![c.clone(), Q::one()]);
                let n = f.num().compose(&s);
                let d = f.den().compose(&s);
                let a = n.low_degree().unwrap();
                let b = d.low_degree().unwrap();
                let n = Poly::from_coeffs(n.coeffs()[a..].to_vec());
                let d = Poly::from_coeffs(d.coeffs()[b..].to_vec());
                let u = self.mul(&n, &series_inverse(&d, self.prec));
                Some((a as i64 - b as i64, u))
            }
            Chart::Inf => {
                let dn = f.num().degree().unwrap();
                let dd = f.den().degree().unwrap();
                let n = f.num().reversed(dn);
                let d = f.den().reversed(dd);
                let u = self.mul(&n, &series_inverse(&d, self.prec));
                Some((dd as i64 - dn as i64, u))
            }
            Chart::General(p) => {
                let v = Place::Finite(p.clone());
                let a = v.ord_poly(f.num());
                let b = v.ord_poly(f.den());
                let n = f.num().exact_div(&p.pow(a as u32)).unwrap();
                let d = f.den().exact_div(&p.pow(b as u32)).unwrap();
                let m = self.modulus.as_ref().unwrap();
                let dinv = d.inverse_mod(m).expect("unit denominator");
                Some((a - b, (&n.rem(m) * &dinv).rem(m)))
            }
        }
    }

    /// Representative of an element of the valuation ring; `None` if f has a pole.
    pub fn integral(&self, f: &RationalFunction) -> Option<Poly> {
        match self.expand(f) {
            None => Some(Poly::zero()),
            Some((o, _)) if o < 0 => None,
            Some((o, u)) => Some(self.times_pi(&u, o as usize)),
        }
    }

    pub fn times_pi(&self, u: &Poly, k: usize) -> Poly {
        match &self.chart {
            Chart::General(p) => self.reduce(&(u * &p.pow(k as u32))),
            _ => u.shift(k).truncate(self.prec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn orders_match_global_valuation() {
        for (s, v) in [
            ("(t^2+1)/(t-3)^2", Place::at(3)),
            ("t^5/(t+1)", Place::Infinity),
            ("(t^2+1)^3*(t-1)/(t^2+1)", Place::parse("t^2+1").unwrap()),
        ] {
            let r = LocalRing::new(&v, 6);
            let f = rf(s);
            assert_eq!(r.expand(&f).unwrap().0, v.ord(&f).unwrap(), "{s} at {v}");
        }
    }

    #[test]
    fn multiplication_is_compatible() {
        let v = Place::parse("t^2+2").unwrap();
        let r = LocalRing::new(&v, 5);
        let a = rf("(t+3)/(t-1)");
        let b = rf("(t^2+2)*t/(t+7)");
        let lhs = r.integral(&(&a * &b)).unwrap();
        let rhs = r.mul(&r.integral(&a).unwrap(), &r.integral(&b).unwrap());
        assert_eq!(lhs, rhs);
        assert_eq!(r.ord(&lhs), Some(1));
        let v = Place::at(2);
        let r = LocalRing::new(&v, 5);
        let lhs = r.integral(&(&a * &b)).unwrap();
        let rhs = r.mul(&r.integral(&a).unwrap(), &r.integral(&b).unwrap());
        assert_eq!(lhs, rhs);
    }
}
