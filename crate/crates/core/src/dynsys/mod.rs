//! Endomorphisms of projective space over Q(t) given by homogeneous lifts.

mod escape;
mod localp;
pub mod resultant;

pub use escape::{canonical_height, escape_rate, EscapeRateResult, HeightResult};
pub use resultant::{macaulay_formula, macaulay_resultant, sylvester};

use crate::arith::{q, Q};
use crate::budget;
use crate::error::{Error, Result};
use crate::funcfield::{log_abs, support, Place, RationalFunction};
use crate::mpoly::MPoly;
use crate::projheights::ProjPoint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

/// A lift F = (F_0, ..., F_N) of a morphism of P^N, with its resultant cached.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousMap {
    forms: Vec<MPoly>,
    n: usize,
    d: u32,
    resultant: RationalFunction,
}

impl HomogeneousMap {
    /// Builds the map and scales it so that its graded-lex leading
    /// coefficient in the first nonzero form is 1.
    pub fn new(forms: Vec<MPoly>) -> Result<Self> {
        let lead = forms
            .iter()
            .find_map(|f| f.leading().map(|(_, c)| c.clone()))
            .ok_or_else(|| Error::InvalidInput("all forms are zero".into()))?;
        let inv = lead.inv()?;
        Self::from_lift(forms.iter().map(|f| f.scale(&inv)).collect())
    }

    /// Keeps the given lift as is.
    pub fn from_lift(forms: Vec<MPoly>) -> Result<Self> {
        let (n, d) = resultant::shape(&forms)?;
        if d < 2 {
            return Err(Error::InvalidInput(format!("degree {d} < 2")));
        }
        let resultant = macaulay_resultant(&forms)?;
        if resultant.is_zero() {
            return Err(Error::DegenerateMap);
        }
        Ok(HomogeneousMap { forms, n, d, resultant })
    }

    pub fn forms(&self) -> &[MPoly] {
        &self.forms
    }

    /// N, the dimension of the projective space.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn resultant(&self) -> &RationalFunction {
        &self.resultant
    }

    /// The lift u F; the resultant scales by u^((N+1) d^N).
    pub fn scaled(&self, u: &RationalFunction) -> Result<Self> {
        let e = (self.n as i64 + 1) * (self.d as i64).pow(self.n as u32);
        Ok(HomogeneousMap {
            forms: self.forms.iter().map(|f| f.scale(u)).collect(),
            n: self.n,
            d: self.d,
            resultant: &self.resultant * &u.pow(e)?,
        })
    }

    /// Places where some coefficient or the resultant is not a unit, plus infinity.
    pub fn support(&self) -> BTreeSet<Place> {
        let mut els: Vec<RationalFunction> = self.forms.iter().flat_map(|f| f.coeffs().cloned()).collect();
        els.push(self.resultant.clone());
        let mut s = support(&els).expect("nonzero coefficients");
        s.insert(Place::Infinity);
        s
    }

    pub fn apply(&self, x: &[RationalFunction]) -> Vec<RationalFunction> {
        self.forms.iter().map(|f| f.eval(x)).collect()
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(self.apply(&p.canonical()))
    }

    /// log||F||_v, the max of log|c|_v over the coefficients.
    pub fn log_norm(&self, v: &Place) -> Q {
        self.forms
            .iter()
            .flat_map(|f| f.coeffs())
            .map(|c| log_abs(c, v).unwrap())
            .max()
            .unwrap()
    }

    /// lambda_v(f) = -log|Res F|_v + (N+1) d^(2N) log||F||_v.
    pub fn boundary_height(&self, v: &Place) -> Result<Q> {
        let c = (self.n as i64 + 1) * (self.d as i64).pow(2 * self.n as u32);
        Ok(-log_abs(&self.resultant, v)? + q(c) * self.log_norm(v))
    }

    /// r_v(F) = log|Res F|_v^{-1} / (d^N (N+1) (d-1)).
    pub fn r_of_f(&self, v: &Place) -> Result<Q> {
        let den = (self.d as i64).pow(self.n as u32) * (self.n as i64 + 1) * (self.d as i64 - 1);
        Ok(-log_abs(&self.resultant, v)? / q(den))
    }

    /// (lambda_v + log||F||_v) / (d-1), a bound for log||P|| on the filled Julia set.
    pub fn julia_radius_bound(&self, v: &Place) -> Result<Q> {
        Ok((self.boundary_height(v)? + self.log_norm(v)) / q(self.d as i64 - 1))
    }

    /// Forms of the l-th iterate, with content removed after each composition.
    pub fn iterate_forms(&self, l: u32) -> Result<Vec<MPoly>> {
        let n = self.n + 1;
        let mut cur: Vec<MPoly> = (0..n).map(|i| MPoly::var(n, i)).collect();
        for _ in 0..l {
            cur = self.forms.iter().map(|f| f.compose(&cur)).collect();
            let size: usize = cur.iter().flat_map(|f| f.coeffs()).map(|c| c.digit_size()).sum();
            budget::check(size, "iterate coefficients")?;
        }
        Ok(cur)
    }

    pub fn escape_rate(&self, lift: &[RationalFunction], v: &Place, k: usize) -> Result<EscapeRateResult> {
        escape_rate(self, lift, v, k)
    }

    pub fn canonical_height(&self, p: &ProjPoint, k: usize) -> Result<HeightResult> {
        canonical_height(self, p, k)
    }
}

impl Serialize for HomogeneousMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.forms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let forms = Vec::<MPoly>::deserialize(d)?;
        HomogeneousMap::from_lift(forms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn binary(a: &[&str], b: &[&str]) -> Vec<MPoly> {
        let f = |cs: &[&str]| {
            let d = cs.len() - 1;
            MPoly::from_terms(2, cs.iter().enumerate().map(|(i, c)| (vec![(d - i) as u32, i as u32], rf(c))))
                .unwrap()
        };
        vec![f(a), f(b)]
    }

    #[test]
    fn r_of_f_and_boundary_height() {
        let f = HomogeneousMap::from_lift(binary(&["t", "0", "0"], &["0", "0", "1"])).unwrap();
        assert_eq!(f.resultant(), &rf("t^2"));
        let v = Place::at(0);
        assert_eq!(f.r_of_f(&v).unwrap(), Q::new(1.into(), 2.into()));
        assert_eq!(f.boundary_height(&v).unwrap(), q(2));
        let total: Q = f.support().iter().map(|w| f.r_of_f(w).unwrap()).sum();
        assert!(total.is_zero());
    }

    #[test]
    fn good_reduction_shortcut() {
        let f = HomogeneousMap::new(binary(&["1", "0", "0"], &["0", "0", "1"])).unwrap();
        let r = f.escape_rate(&[rf("t"), rf("1")], &Place::at(0), 5).unwrap();
        assert_eq!((r.approx, r.error_bound), (Q::zero(), Q::zero()));
        let r = f.escape_rate(&[rf("t"), rf("1")], &Place::Infinity, 5).unwrap();
        assert_eq!(r.approx, q(1));
    }

    #[test]
    fn escape_intervals_nest() {
        let f = HomogeneousMap::new(binary(&["1", "0", "t"], &["0", "1", "0"])).unwrap();
        let v = Place::at(0);
        let lift = [rf("1"), rf("1")];
        let r4 = f.escape_rate(&lift, &v, 4).unwrap().interval();
        let r10 = f.escape_rate(&lift, &v, 10).unwrap().interval();
        assert!(r4.contains_interval(&r10), "{r4:?} vs {r10:?}");
    }

    #[test]
    fn functional_equation_on_p1() {
        let f = HomogeneousMap::new(binary(&["1", "0", "t"], &["0", "1", "0"])).unwrap();
        let p = ProjPoint::parse(&["t+2", "1"]).unwrap();
        let h = f.canonical_height(&p, 10).unwrap();
        let h2 = f.canonical_height(&f.apply_point(&p).unwrap(), 10).unwrap();
        let lhs = h2.interval();
        let rhs = h.interval().scale(&q(2));
        assert!(lhs.overlaps(&rhs), "{lhs:?} {rhs:?}");
    }

    #[test]
    fn preperiodic_point_has_zero_height() {
        let f = HomogeneousMap::new(binary(&["1", "0", "0"], &["0", "0", "1"])).unwrap();
        let h = f.canonical_height(&ProjPoint::parse(&["1", "0"]).unwrap(), 6).unwrap();
        assert_eq!(h.approx, Q::zero());
        let h = f.canonical_height(&ProjPoint::parse(&["t", "1"]).unwrap(), 6).unwrap();
        assert_eq!(h.approx, q(1));
    }
}
