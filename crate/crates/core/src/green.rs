//! Arakelov-Green's functions of point tuples attached to a good basis, and
//! the global identity linking their place sum to canonical heights.
//!
//! With c = c(n) sections eta_j and lifts P~_i,
//!
//!   g_v = (1/c) sum_i H_v(P~_i) - (1/(n c)) log|det eta_j(P~_i)|_v + r_v(F).
//!
//! Rescaling one lift by u moves the escape term by log|u|_v / c and the
//! determinant term by n log|u|_v / (n c), so any lift gives the same value;
//! the coprime polynomial lift is used at every place.

use crate::arith::linalg::det_k;
use crate::arith::{q, Q};
use crate::dynsys::{canonical_height, escape_rate, HomogeneousMap};
use crate::error::{Error, Result};
use crate::funcfield::{log_abs, support, Place, RationalFunction};
use crate::goodbasis::GreenBasis;
use crate::interval::Interval;
use crate::projheights::{log_norm, ProjPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

fn ser_opt_interval<S: Serializer>(x: &Option<Interval>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(i) => i.serialize(s),
        None => s.serialize_str("inf"),
    }
}

fn ser_det<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::interval::ser_q(v, s),
        None => s.serialize_str("-inf"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenValue {
    /// `None` is +infinity: the evaluation determinant vanishes
    #[serde(serialize_with = "ser_opt_interval")]
    pub value: Option<Interval>,
    pub escape_sum: Interval,
    /// log|det|_v, `None` for log 0
    #[serde(serialize_with = "ser_det")]
    pub det_term: Option<Q>,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub r_f: Q,
}

fn check_tuple(basis: &GreenBasis, f: &HomogeneousMap, points: &[ProjPoint]) -> Result<()> {
    let c = basis.target.section_count(basis.n);
    if points.len() != c {
        return Err(Error::WrongTupleLength { expected: c, got: points.len() });
    }
    if basis.target.nvars() != f.dim() + 1 {
        return Err(Error::InvalidInput("map and basis live in different spaces".into()));
    }
    if points.iter().any(|p| !basis.target.contains(p)) {
        return Err(Error::PointOffTarget);
    }
    Ok(())
}

/// det(eta_j(P~_i)) with the coprime polynomial lifts.
pub fn evaluation_determinant(basis: &GreenBasis, points: &[ProjPoint]) -> RationalFunction {
    let rows: Vec<Vec<RationalFunction>> = points
        .iter()
        .map(|p| {
            let lift = p.canonical();
            basis.sections.iter().map(|s| s.form.eval(&lift)).collect()
        })
        .collect();
    det_k(&rows)
}

fn assemble(basis: &GreenBasis, escape_sum: Interval, det_term: Option<Q>, r_f: Q) -> GreenValue {
    let c = q(basis.target.section_count(basis.n) as i64);
    let value = det_term.as_ref().map(|dt| {
        let shift = &r_f - dt / (q(basis.n as i64) * &c);
        escape_sum.scale(&(Q::from_integer(1.into()) / &c)).shift(&shift)
    });
    GreenValue { value, escape_sum, det_term, r_f }
}

fn green_with_det(
    basis: &GreenBasis,
    f: &HomogeneousMap,
    points: &[ProjPoint],
    det: &RationalFunction,
    v: &Place,
    k: usize,
) -> Result<GreenValue> {
    let escape_sum: Interval = points
        .par_iter()
        .map(|p| escape_rate(f, &p.canonical(), v, k).map(|r| r.interval()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let det_term = if det.is_zero() { None } else { Some(log_abs(det, v)?) };
    Ok(assemble(basis, escape_sum, det_term, f.r_of_f(v)?))
}

/// g_v at one place with k escape-rate steps per point.
pub fn green_value(basis: &GreenBasis, f: &HomogeneousMap, points: &[ProjPoint], v: &Place, k: usize) -> Result<GreenValue> {
    check_tuple(basis, f, points)?;
    let det = evaluation_determinant(basis, points);
    green_with_det(basis, f, points, &det, v, k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceGreen {
    pub place: Place,
    pub green: GreenValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalGreenReport {
    /// false when the determinant vanishes and the identity says nothing
    pub applicable: bool,
    pub per_place: Vec<PlaceGreen>,
    /// sum_v g_v
    pub lhs: Option<Interval>,
    /// average canonical height of the tuple
    pub rhs: Interval,
    #[serde(serialize_with = "crate::interval::ser_opt_q")]
    pub det_place_sum: Option<Q>,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub r_sum: Q,
    pub overlap: bool,
}

/// Sum of g_v over every place where it can be nonzero, against the average
/// canonical height computed independently.
pub fn global_green_identity(basis: &GreenBasis, f: &HomogeneousMap, points: &[ProjPoint], k: usize) -> Result<GlobalGreenReport> {
    check_tuple(basis, f, points)?;
    let det = evaluation_determinant(basis, points);
    let c = q(points.len() as i64);
    let rhs: Interval = points
        .par_iter()
        .map(|p| canonical_height(f, p, k).map(|h| h.interval()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<Interval>()
        .scale(&(Q::from_integer(1.into()) / &c));
    let mut places = f.support();
    if !det.is_zero() {
        places.extend(support(std::slice::from_ref(&det))?);
    }
    let r_sum: Q = places.iter().map(|v| f.r_of_f(v)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    if det.is_zero() {
        return Ok(GlobalGreenReport {
            applicable: false,
            per_place: Vec::new(),
            lhs: None,
            rhs,
            det_place_sum: None,
            r_sum,
            overlap: false,
        });
    }
    let places: Vec<Place> = places.into_iter().collect();
    let per_place: Vec<PlaceGreen> = places
        .iter()
        .map(|v| Ok(PlaceGreen { place: v.clone(), green: green_with_det(basis, f, points, &det, v, k)? }))
        .collect::<Result<_>>()?;
    let det_place_sum: Q = per_place.iter().map(|p| p.green.det_term.clone().unwrap()).sum();
    let lhs: Interval = per_place.iter().map(|p| p.green.value.clone().unwrap()).sum();
    let overlap = lhs.overlaps(&rhs);
    Ok(GlobalGreenReport { applicable: true, per_place, lhs: Some(lhs), rhs, det_place_sum: Some(det_place_sum), r_sum, overlap })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonitorReport {
    pub n: u32,
    pub place: Place,
    pub samples: usize,
    /// tuples with vanishing determinant, skipped
    pub infinite: usize,
    /// log R, the filled-Julia radius bound at the place
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub log_r: Q,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub r_f: Q,
    /// min over finite samples of (lower end of g_v) - r_v(F)
    #[serde(serialize_with = "crate::interval::ser_opt_q")]
    pub min_deficit: Option<Q>,
    /// max(log R, 1) log(n) / n
    pub scale: f64,
    /// smallest B with g_v >= r_v(F) - B scale on every sample
    pub empirical_constant: f64,
}

/// Records how far below r_v(F) the sampled values of g_v go, relative to
/// max(log R, 1) log(n) / n. A monitor, not an assertion.
pub fn lower_bound_monitor(
    basis: &GreenBasis,
    f: &HomogeneousMap,
    v: &Place,
    tuples: &[Vec<ProjPoint>],
    k: usize,
) -> Result<MonitorReport> {
    use num_traits::ToPrimitive;
    let log_r = f.julia_radius_bound(v)?;
    let r_f = f.r_of_f(v)?;
    let mut min_deficit: Option<Q> = None;
    let mut infinite = 0;
    for t in tuples {
        let g = green_value(basis, f, t, v, k)?;
        match g.value {
            None => infinite += 1,
            Some(iv) => {
                let dfc = &iv.lo - &r_f;
                if min_deficit.as_ref().is_none_or(|m| &dfc < m) {
                    min_deficit = Some(dfc);
                }
            }
        }
    }
    let n = basis.n as f64;
    let scale = log_r.to_f64().unwrap_or(1.0).max(1.0) * n.ln().max(f64::MIN_POSITIVE) / n;
    let empirical_constant = match &min_deficit {
        Some(m) if m < &Q::from_integer(0.into()) => (-m).to_f64().unwrap() / scale,
        _ => 0.0,
    };
    Ok(MonitorReport {
        n: basis.n,
        place: v.clone(),
        samples: tuples.len(),
        infinite,
        log_r,
        r_f,
        min_deficit,
        scale,
        empirical_constant,
    })
}

/// Seeded tuples of points of P^N with polynomial coordinates of degree <= 1
/// and small integer coefficients, kept inside the polydisc log||P||_v <= max(log R, 0).
pub fn sample_projective_tuples(f: &HomogeneousMap, v: &Place, size: usize, count: usize, seed: u64) -> Result<Vec<Vec<ProjPoint>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = f.julia_radius_bound(v)?.max(Q::from_integer(0.into()));
    let n = f.dim() + 1;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let mut tuple = Vec::with_capacity(size);
        while tuple.len() < size {
            let coords: Vec<RationalFunction> = (0..n)
                .map(|_| {
                    let a: i64 = rng.gen_range(-3..=3);
                    let b: i64 = rng.gen_range(-3..=3);
                    RationalFunction::from_poly(crate::arith::Poly::from_ints(&[b, a]))
                })
                .collect();
            if let Ok(p) = ProjPoint::new(coords) {
                if log_norm(&p.canonical(), v) <= radius {
                    tuple.push(p);
                }
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goodbasis::{good_basis, Target};
    use crate::mpoly::MPoly;
    use num_traits::Zero;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn binary(a: &[&str], b: &[&str]) -> HomogeneousMap {
        let f = |cs: &[&str]| {
            let d = cs.len() - 1;
            MPoly::from_terms(2, cs.iter().enumerate().map(|(i, c)| (vec![(d - i) as u32, i as u32], rf(c)))).unwrap()
        };
        HomogeneousMap::new(vec![f(a), f(b)]).unwrap()
    }

    fn pt(a: &str, b: &str) -> ProjPoint {
        ProjPoint::parse(&[a, b]).unwrap()
    }

    #[test]
    fn vandermonde_example_is_zero() {
        let f = binary(&["1", "0", "0"], &["0", "0", "1"]);
        let b = good_basis(&f, 1, &Target::ProjectiveSpace(1)).unwrap();
        for v in [Place::at(0), Place::at(3), Place::Infinity] {
            let g = green_value(&b, &f, &[pt("0", "1"), pt("1", "1")], &v, 8).unwrap();
            assert_eq!(g.value, Some(Interval::zero()), "{v}");
        }
    }

    #[test]
    fn repeated_points_give_infinity() {
        let f = binary(&["1", "0", "t"], &["0", "1", "0"]);
        let b = good_basis(&f, 1, &Target::ProjectiveSpace(1)).unwrap();
        let g = green_value(&b, &f, &[pt("t", "1"), pt("t", "1")], &Place::at(0), 4).unwrap();
        assert_eq!(g.value, None);
        assert!(green_value(&b, &f, &[pt("t", "1")], &Place::at(0), 4).is_err());
    }

    #[test]
    fn lift_and_map_scaling_invariance() {
        let f = binary(&["1", "0", "t"], &["0", "1", "0"]);
        let b = good_basis(&f, 2, &Target::ProjectiveSpace(1)).unwrap();
        let pts = [pt("1", "1"), pt("t", "1"), pt("1", "t+1")];
        let v = Place::at(0);
        let g = green_value(&b, &f, &pts, &v, 8).unwrap();
        // rescaled input lifts are replaced by coprime lifts: identical values
        let scaled: Vec<ProjPoint> = pts.iter().map(|p| p.scale(&rf("t^3/(t+2)")).unwrap()).collect();
        assert_eq!(green_value(&b, &f, &scaled, &v, 8).unwrap(), g);
        // F -> uF: exact terms move, the value stays put up to the escape error
        let uf = f.scaled(&rf("t")).unwrap();
        let g2 = green_value(&b, &uf, &pts, &v, 8).unwrap();
        assert_ne!(g2.r_f, g.r_f);
        assert!(g2.value.unwrap().overlaps(&g.value.unwrap()));
    }

    #[test]
    fn global_identity_on_p1() {
        let f = binary(&["1", "0", "t"], &["0", "1", "0"]);
        let b = good_basis(&f, 2, &Target::ProjectiveSpace(1)).unwrap();
        let pts = [pt("1", "1"), pt("t", "1"), pt("1", "t+1")];
        let r = global_green_identity(&b, &f, &pts, 8).unwrap();
        assert!(r.applicable && r.overlap);
        assert_eq!(r.det_place_sum, Some(Q::zero()));
        assert!(r.r_sum.is_zero());
        let bad = global_green_identity(&b, &f, &[pts[0].clone(), pts[0].clone(), pts[1].clone()], 4).unwrap();
        assert!(!bad.applicable);
    }

    #[test]
    fn monitor_on_good_reduction_is_flat() {
        let f = binary(&["1", "0", "0"], &["0", "0", "1"]);
        let b = good_basis(&f, 1, &Target::ProjectiveSpace(1)).unwrap();
        let v = Place::at(0);
        let tuples = sample_projective_tuples(&f, &v, 2, 6, 7).unwrap();
        let r = lower_bound_monitor(&b, &f, &v, &tuples, 6).unwrap();
        assert_eq!(r.samples, 6);
        assert!(r.min_deficit.is_none_or(|m| m >= Q::zero()));
    }
}
