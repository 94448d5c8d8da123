//! Exact local Néron heights in residue characteristic 0, component indices
//! at multiplicative places and the pairwise local-height average.
//!
//! Local heights are normalized so that sum_v N_v lambda_v is the canonical
//! height for the divisor (O); the global route multiplies that sum by 3 to
//! match the plane-cubic embedding bundle.

use super::curve::{CurvePoint, WeierstrassCurve};
use super::reduction::{reduction_type, ReductionKind, ShortModel};
use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::funcfield::{support, Place, RationalFunction};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;

type K = RationalFunction;

/// Valuation with zero sent to +infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Val {
    Fin(i64),
    Inf,
}

fn val(v: &Place, x: &K) -> Val {
    v.ord(x).map(Val::Fin).unwrap_or(Val::Inf)
}

/// Which branch of the local algorithm applies; used by both the height
/// and the component index.
enum Branch {
    /// reduces to a smooth point on the identity component
    Smooth,
    Multiplicative { m: Q },
    ThreeDivides { v2y: i64 },
    Other { vpsi3: i64 },
}

fn branch(model: &ShortModel, x: &K, y: &K) -> Branch {
    let v = &model.place;
    let (xs, ys) = model.map_point(x, y);
    let two_y = &K::from_int(2) * &ys;
    let dx = &(&K::from_int(3) * &(&xs * &xs)) + &model.a;
    let v2y = val(v, &two_y);
    if val(v, &dx) <= Val::Fin(0) || v2y <= Val::Fin(0) {
        return Branch::Smooth;
    }
    let n = model.n;
    if model.ord_a() == Some(0) {
        let half = Q::new(n.into(), 2.into());
        let m = match v2y {
            Val::Fin(e) => q(e).min(half),
            Val::Inf => half,
        };
        return Branch::Multiplicative { m };
    }
    let x2 = &xs * &xs;
    let psi3 = &(&(&(&K::from_int(3) * &(&x2 * &x2)) + &(&(&K::from_int(6) * &model.a) * &x2))
        + &(&(&K::from_int(12) * &model.b) * &xs))
        - &(&model.a * &model.a);
    let vpsi3 = val(v, &psi3);
    match (vpsi3, v2y) {
        (Val::Inf, Val::Fin(e)) => Branch::ThreeDivides { v2y: e },
        (Val::Fin(a), Val::Fin(e)) if a >= 3 * e => Branch::ThreeDivides { v2y: e },
        (Val::Fin(a), _) => Branch::Other { vpsi3: a },
        (Val::Inf, Val::Inf) => unreachable!("a point of order 2 and 3 is O"),
    }
}

/// lambda_v(P) for P != O, without the factor N_v.
pub fn local_height(e: &WeierstrassCurve, p: &CurvePoint, v: &Place) -> Result<Q> {
    let CurvePoint::Affine(x, y) = p else { return Err(Error::PointAtInfinity) };
    let model = ShortModel::new(e, v);
    let n = model.n;
    let base = match branch(&model, x, y) {
        Branch::Smooth => {
            let (xs, _) = model.map_point(x, y);
            match val(v, &xs) {
                Val::Fin(o) if o < 0 => Q::new((-o).into(), 2.into()),
                _ => Q::zero(),
            }
        }
        Branch::Multiplicative { m } => -(&m * (q(n) - &m)) / q(2 * n),
        Branch::ThreeDivides { v2y } => q(-v2y) / q(3),
        Branch::Other { vpsi3 } => q(-vpsi3) / q(8),
    };
    Ok(base + q(n) / q(12))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalHeight {
    pub place: Place,
    /// lambda_v(P), before weighting by N_v
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub value: Q,
}

/// Places where a local height can be nonzero for this point.
fn height_places(e: &WeierstrassCurve, p: &CurvePoint) -> BTreeSet<Place> {
    let mut els: Vec<K> = [&e.disc, &e.c4, &e.c6].into_iter().cloned().collect();
    els.extend(e.a_invariants().into_iter().cloned());
    if let CurvePoint::Affine(x, y) = p {
        els.push(x.clone());
        els.push(y.clone());
    }
    els.retain(|x| !x.is_zero());
    let mut s = support(&els).unwrap();
    s.insert(Place::Infinity);
    s
}

/// Nonzero local heights, place-sorted.
pub fn local_heights(e: &WeierstrassCurve, p: &CurvePoint) -> Result<Vec<LocalHeight>> {
    if p.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    let mut out = Vec::new();
    for v in height_places(e, p) {
        let value = local_height(e, p, &v)?;
        if !value.is_zero() {
            out.push(LocalHeight { place: v, value });
        }
    }
    Ok(out)
}

/// 3 sum_v N_v lambda_v(P): the canonical height for O(1) on the plane cubic.
pub fn canonical_height_local(e: &WeierstrassCurve, p: &CurvePoint) -> Result<Q> {
    let total: Q = local_heights(e, p)?
        .iter()
        .map(|h| q(h.place.local_degree() as i64) * &h.value)
        .sum();
    Ok(q(3) * total)
}

/// Component of the special fiber met by P at a multiplicative place, folded
/// so that P and -P give the same value; 0 is the identity component.
pub fn component_index(e: &WeierstrassCurve, p: &CurvePoint, v: &Place) -> Result<u32> {
    let r = reduction_type(e, v);
    let ReductionKind::Multiplicative(m) = r.kind else {
        return Err(Error::NonMultiplicativePlace { place: v.to_string() });
    };
    let CurvePoint::Affine(x, y) = p else { return Ok(0) };
    let model = ShortModel::new(e, v);
    Ok(match branch(&model, x, y) {
        Branch::Smooth => 0,
        _ => {
            let (_, ys) = model.map_point(x, y);
            let half = (m / 2) as i64;
            match val(v, &(&K::from_int(2) * &ys)) {
                Val::Fin(o) => o.min(half) as u32,
                Val::Inf => half as u32,
            }
        }
    })
}

/// Whether P meets the identity component at v: always at good places, the
/// folded index at multiplicative ones, and the smooth branch at additive ones.
fn on_identity_component(e: &WeierstrassCurve, p: &CurvePoint, v: &Place) -> bool {
    let CurvePoint::Affine(x, y) = p else { return true };
    match reduction_type(e, v).kind {
        ReductionKind::Good => true,
        ReductionKind::Multiplicative(_) => component_index(e, p, v).unwrap() == 0,
        ReductionKind::Additive => matches!(branch(&ShortModel::new(e, v), x, y), Branch::Smooth),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HindrySilvermanReport {
    pub place: Place,
    pub points: usize,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub average: Q,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub bound: Q,
    pub pass: bool,
}

/// Average of N_v lambda_v(P_i - P_j) over ordered pairs i != j, against
/// (1/12) max(0, -N_v ord_v j).
pub fn hindry_silverman_check(e: &WeierstrassCurve, points: &[CurvePoint], v: &Place) -> Result<HindrySilvermanReport> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("at least two points are needed".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if !e.contains(p) {
            return Err(Error::PointOffTarget);
        }
        if points[..i].contains(p) {
            return Err(Error::RepeatedPoints);
        }
        if !on_identity_component(e, p, v) {
            return Err(Error::NonzeroComponentIndex { place: v.to_string() });
        }
    }
    let nv = q(v.local_degree() as i64);
    let n = points.len();
    let mut total = Q::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = e.sub(&points[i], &points[j]);
                total += &nv * local_height(e, &d, v)?;
            }
        }
    }
    let average = total / q((n * (n - 1)) as i64);
    let ord_j = v.ord(&e.j).unwrap_or(0);
    let bound = (&nv * q((-ord_j).max(0))) / q(12);
    let pass = average >= bound;
    Ok(HindrySilvermanReport { place: v.clone(), points: n, average, bound, pass })
}
