//! Multiplication by 2 as a degree-4 endomorphism of P^2 containing the
//! curve, and the canonical height read off from its escape rates.

use super::curve::{CurvePoint, WeierstrassCurve};
use crate::dynsys::{canonical_height, HeightResult, HomogeneousMap};
use crate::error::{Error, Result};
use crate::funcfield::RationalFunction;
use crate::mpoly::MPoly;

type K = RationalFunction;

/// How many (cubic * linear) corrections are tried before giving up.
pub const DEFAULT_RETRIES: usize = 24;

fn c(x: &K) -> MPoly {
    MPoly::constant(2, x.clone())
}

fn ci(n: i64) -> MPoly {
    c(&K::from_int(n))
}

/// The doubling formulas x(2P) = X/Z, y(2P) = Y/Z as affine polynomials in
/// (x, y), reduced modulo the cubic so that every term has degree <= 4.
fn affine_doubling(e: &WeierstrassCurve) -> [MPoly; 3] {
    let x = MPoly::var(2, 0);
    let y = MPoly::var(2, 1);
    let x2 = &x * &x;
    let t = &(&(&ci(2) * &y) + &(&c(&e.a1) * &x)) + &c(&e.a3);
    let l = &(&(&(&ci(3) * &x2) + &(&c(&(&K::from_int(2) * &e.a2)) * &x)) + &c(&e.a4)) - &(&c(&e.a1) * &y);
    let phi2 = &(&(&(&x2 * &x2) - &(&c(&e.b4) * &x2)) - &(&c(&(&K::from_int(2) * &e.b6)) * &x)) - &c(&e.b8);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    // x^3 - (y^2 + a1 xy + a3 y - a2 x^2 - a4 x - a6), leading monomial x^3
    let rel = &(&(&(&(&(&x2 * &x) - &(&y * &y)) - &(&c(&e.a1) * &(&x * &y))) - &(&c(&e.a3) * &y))
        + &(&(&c(&e.a2) * &x2) + &(&c(&e.a4) * &x)))
        + &c(&e.a6);
    let nf = |p: MPoly| p.reduce_by(&rel);
    let xx = nf(&phi2 * &t);
    let zz = nf(t3.clone());
    let yy = nf(&(&(-&(&l * &(&phi2 - &(&x * &t2)))) - &(&(&y + &c(&e.a3)) * &t3)) - &(&(&c(&e.a1) * &phi2) * &t));
    [xx, yy, zz]
}

fn homogenize(p: &MPoly, d: u32) -> MPoly {
    let terms = p.terms().map(|(m, c)| {
        let deg = m[0] + m[1];
        assert!(deg <= d, "doubling term of degree {deg} > {d}");
        (vec![m[0], m[1], d - deg], c.clone())
    });
    MPoly::from_terms(3, terms).unwrap()
}

/// Three quartic forms agreeing with [2] on the curve and without common
/// zeros in P^2. Common zeros off the curve are removed by adding multiples
/// of cubic * linear to one form at a time.
pub fn duplication_extension_with(e: &WeierstrassCurve, retries: usize) -> Result<HomogeneousMap> {
    let base: Vec<MPoly> = affine_doubling(e).iter().map(|p| homogenize(p, 4)).collect();
    let cubic = e.cubic_form();
    let vars: Vec<MPoly> = (0..3).map(|i| MPoly::var(3, i)).collect();
    let mut forms = base.clone();
    for attempt in 0..=retries {
        match HomogeneousMap::new(forms.clone()) {
            Ok(f) => return Ok(f),
            Err(Error::DegenerateMap) => {}
            Err(err) => return Err(err),
        }
        if attempt == retries {
            break;
        }
        // deterministic sweep over (form, linear form, coefficient)
        let which = attempt % 3;
        let lin = &vars[(attempt / 3) % 3];
        let coef = K::from_int((attempt / 9) as i64 + 1);
        forms = base.clone();
        forms[which] = &forms[which] + &(&cubic * lin).scale(&coef);
    }
    Err(Error::BudgetExceeded(format!(
        "no nondegenerate extension of [2] after {retries} corrections; the forms {} keep a common zero",
        forms.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
    )))
}

pub fn duplication_extension(e: &WeierstrassCurve) -> Result<HomogeneousMap> {
    duplication_extension_with(e, DEFAULT_RETRIES)
}

/// The canonical height for O(1) on the plane cubic, from k escape-rate steps.
pub fn canonical_height_dyn(e: &WeierstrassCurve, p: &CurvePoint, k: usize) -> Result<HeightResult> {
    if !e.contains(p) {
        return Err(Error::PointOffTarget);
    }
    let f = duplication_extension(e)?;
    canonical_height_on(&f, p, k)
}

/// Same as `canonical_height_dyn` with a precomputed extension.
pub fn canonical_height_on(f: &HomogeneousMap, p: &CurvePoint, k: usize) -> Result<HeightResult> {
    canonical_height(f, &p.projective(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::heights::canonical_height_local;
    use crate::arith::Q;
    use num_traits::Zero;

    fn rf(s: &str) -> K {
        s.parse().unwrap()
    }

    #[test]
    fn extension_restricts_to_doubling() {
        let e = WeierstrassCurve::short(rf("-1"), rf("t^2")).unwrap();
        let f = duplication_extension(&e).unwrap();
        assert_eq!(f.degree(), 4);
        assert!(!f.resultant().is_zero());
        let p = e.point(rf("0"), rf("t")).unwrap();
        let q = e.point(rf("1"), rf("-t")).unwrap();
        for pt in [p.clone(), q.clone(), e.add(&p, &q)] {
            assert_eq!(f.apply_point(&pt.projective()).unwrap(), e.double(&pt).projective());
        }
        let o = CurvePoint::Infinity.projective();
        assert_eq!(f.apply_point(&o).unwrap(), o);
    }

    #[test]
    fn dual_oracle_on_a_small_point() {
        let e = WeierstrassCurve::short(rf("-1"), rf("t^2")).unwrap();
        let p = e.point(rf("0"), rf("t")).unwrap();
        let exact = canonical_height_local(&e, &p).unwrap();
        let h = canonical_height_dyn(&e, &p, 6).unwrap();
        assert!(h.interval().contains(&exact), "{exact} vs {:?}", h.interval());
        let t = canonical_height_dyn(&WeierstrassCurve::legendre(), &CurvePoint::Affine(rf("0"), rf("0")), 6).unwrap();
        assert!(t.interval().contains(&Q::zero()));
    }
}
