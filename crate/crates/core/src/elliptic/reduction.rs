//! Minimal models place by place, reduction types and the stable Faltings height.
//!
//! Residue characteristic is 0 everywhere, so minimality is decided on the
//! short model y^2 = x^3 + A x + B with A = -27 c4, B = -54 c6 alone: the model
//! is minimal at v iff ord A < 4 or ord B < 6 after integral rescaling.

use super::curve::{CurvePoint, WeierstrassCurve};
use crate::arith::{q, Q};
use crate::constants::deligne_bound;
use crate::error::{Error, Result};
use crate::funcfield::{support, Place, RationalFunction};
use serde::Serialize;
use std::collections::BTreeSet;

type K = RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "m")]
pub enum ReductionKind {
    Good,
    Multiplicative(u32),
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialType {
    Good,
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    pub place: Place,
    pub kind: ReductionKind,
    pub ord_delta_min: i64,
    pub ord_j: i64,
    pub potential_type: PotentialType,
}

/// The minimal short model at one place.
#[derive(Clone, Debug)]
pub struct ShortModel {
    pub place: Place,
    /// exponent of the uniformizer used for rescaling
    pub k: i64,
    pub a: K,
    pub b: K,
    /// ord of the minimal discriminant
    pub n: i64,
    pi: K,
    b2: K,
    a1: K,
    a3: K,
}

fn ord_or_inf(v: &Place, x: &K) -> Option<i64> {
    v.ord(x)
}

impl ShortModel {
    pub fn new(e: &WeierstrassCurve, v: &Place) -> Self {
        let a = &K::from_int(-27) * &e.c4;
        let b = &K::from_int(-54) * &e.c6;
        let ka = ord_or_inf(v, &a).map(|o| o.div_euclid(4));
        let kb = ord_or_inf(v, &b).map(|o| o.div_euclid(6));
        let k = match (ka, kb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("nonsingular curve has c4 or c6 nonzero"),
        };
        let pi = v.uniformizer();
        let s = pi.pow(-k).unwrap();
        let a = &a * &s.pow(4).unwrap();
        let b = &b * &s.pow(6).unwrap();
        let n = v.ord(&e.disc).unwrap() - 12 * k;
        ShortModel { place: v.clone(), k, a, b, n, pi, b2: e.b2.clone(), a1: e.a1.clone(), a3: e.a3.clone() }
    }

    /// Image of an affine point on the minimal short model.
    pub fn map_point(&self, x: &K, y: &K) -> (K, K) {
        let s = self.pi.pow(-self.k).unwrap();
        let xs = &(&(&K::from_int(36) * x) + &(&K::from_int(3) * &self.b2)) * &s.pow(2).unwrap();
        let t = &(&(&K::from_int(2) * y) + &(&self.a1 * x)) + &self.a3;
        let ys = &(&K::from_int(108) * &t) * &s.pow(3).unwrap();
        (xs, ys)
    }

    pub fn map(&self, p: &CurvePoint) -> Option<(K, K)> {
        match p {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, y) => Some(self.map_point(x, y)),
        }
    }

    pub fn ord_a(&self) -> Option<i64> {
        self.place.ord(&self.a)
    }
}

pub fn reduction_type(e: &WeierstrassCurve, v: &Place) -> ReductionData {
    let m = ShortModel::new(e, v);
    let ord_j = v.ord(&e.j).unwrap_or(i64::MAX);
    let kind = if m.n == 0 {
        ReductionKind::Good
    } else if m.ord_a() == Some(0) {
        ReductionKind::Multiplicative(m.n as u32)
    } else {
        ReductionKind::Additive
    };
    let potential_type = if ord_j < 0 { PotentialType::Multiplicative } else { PotentialType::Good };
    ReductionData { place: v.clone(), kind, ord_delta_min: m.n, ord_j: if e.j.is_zero() { 0 } else { ord_j }, potential_type }
}

/// Places where the model could fail to be smooth after minimalization.
pub fn candidate_places(e: &WeierstrassCurve) -> BTreeSet<Place> {
    let els: Vec<K> = [&e.disc, &e.c4, &e.c6].into_iter().filter(|x| !x.is_zero()).cloned().collect();
    let mut s = support(&els).unwrap();
    s.insert(Place::Infinity);
    s
}

/// Reduction data at every place of bad reduction, place-sorted.
pub fn bad_places(e: &WeierstrassCurve) -> Vec<ReductionData> {
    candidate_places(e)
        .iter()
        .map(|v| reduction_type(e, v))
        .filter(|r| r.kind != ReductionKind::Good)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaltingsReport {
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub stable_height: Q,
    /// (1/12) sum N_v ord(Delta_min); reported when every bad place is semistable.
    #[serde(serialize_with = "crate::interval::ser_opt_q")]
    pub semistable_sum: Option<Q>,
    pub semistable: bool,
}

/// (1/12) sum_v N_v max(0, -ord_v j).
pub fn faltings_height(e: &WeierstrassCurve) -> Result<FaltingsReport> {
    if e.is_isotrivial() {
        return Err(Error::Isotrivial);
    }
    let poles = support(std::slice::from_ref(&e.j))?;
    let mut total = Q::from_integer(0.into());
    for v in &poles {
        let o = v.ord(&e.j).unwrap();
        if o < 0 {
            total += q(v.local_degree() as i64 * -o);
        }
    }
    let bad = bad_places(e);
    let semistable = bad.iter().all(|r| matches!(r.kind, ReductionKind::Multiplicative(_)));
    let semistable_sum = semistable.then(|| {
        bad.iter().map(|r| q(r.place.local_degree() as i64 * r.ord_delta_min)).sum::<Q>() / q(12)
    });
    Ok(FaltingsReport { stable_height: total / q(12), semistable_sum, semistable })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArakelovCheck {
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub height: Q,
    #[serde(serialize_with = "crate::interval::ser_opt_q")]
    pub bound: Option<Q>,
    pub bad_place_count: usize,
    pub holds: bool,
    pub equality: bool,
}

/// h_Fal(E) <= (1/2)(2 g(B) - 2 + |S|) with B = P^1 and S the bad places.
pub fn arakelov_check(e: &WeierstrassCurve) -> Result<ArakelovCheck> {
    let h = faltings_height(e)?.stable_height;
    let s = bad_places(e).len();
    let bound = deligne_bound(1, 0, s as u64);
    let (holds, equality) = match &bound {
        Some(b) => (&h <= b, &h == b),
        None => (false, false),
    };
    Ok(ArakelovCheck { height: h, bound, bad_place_count: s, holds, equality })
}
