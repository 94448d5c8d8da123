#![allow(dead_code)]

use ffht::arith::{q, Poly, Q};
use ffht::elliptic::{CurvePoint, WeierstrassCurve};
use ffht::RationalFunction;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type K = RationalFunction;

pub fn rf(s: &str) -> K {
    s.parse().unwrap()
}

pub fn rand_poly(rng: &mut ChaCha8Rng, deg: usize, c: i64) -> Poly {
    Poly::from_ints(&(0..=deg).map(|_| rng.gen_range(-c..=c)).collect::<Vec<_>>())
}

/// A nonzero rational function with small numerator and denominator.
pub fn rand_rf(rng: &mut ChaCha8Rng) -> K {
    loop {
        let dn = rng.gen_range(0..=4);
        let n = rand_poly(rng, dn, 9);
        let dd = rng.gen_range(0..=3);
        let d = rand_poly(rng, dd, 9);
        if !n.is_zero() && !d.is_zero() {
            return K::new(n, d).unwrap();
        }
    }
}

/// y^2 = x^3 + a4 x + a6 through (x0, y0) and (x1, y1) with constant x's and
/// linear y's; retried until the curve is smooth and non-isotrivial.
pub fn curve_through_two_points(rng: &mut ChaCha8Rng) -> (WeierstrassCurve, CurvePoint, CurvePoint) {
    loop {
        let x0 = rng.gen_range(-3..=3i64);
        let x1 = rng.gen_range(-3..=3i64);
        if x0 == x1 {
            continue;
        }
        let y0 = K::from_poly(rand_poly(rng, 1, 2));
        let y1 = K::from_poly(rand_poly(rng, 1, 2));
        let (kx0, kx1) = (K::from_int(x0), K::from_int(x1));
        let cube = |x: &K| x * &(x * x);
        let num = &(&(&y0 * &y0) - &(&y1 * &y1)) - &(&cube(&kx0) - &cube(&kx1));
        let a4 = num.scale(&(Q::from_integer(1.into()) / q(x0 - x1)));
        let a6 = &(&(&y0 * &y0) - &cube(&kx0)) - &(&a4 * &kx0);
        let Ok(e) = WeierstrassCurve::short(a4, a6) else { continue };
        if e.is_isotrivial() {
            continue;
        }
        let p = e.point(kx0, y0).unwrap();
        let qq = e.point(kx1, y1).unwrap();
        return (e, p, qq);
    }
}

/// A curve with all five a-invariants in play and one known point.
pub fn general_curve_with_point(rng: &mut ChaCha8Rng) -> (WeierstrassCurve, CurvePoint) {
    loop {
        let a1 = K::from_poly(rand_poly(rng, 0, 2));
        let a2 = K::from_poly(rand_poly(rng, 1, 2));
        let a3 = K::from_poly(rand_poly(rng, 1, 2));
        let a4 = K::from_poly(rand_poly(rng, 1, 2));
        let x0 = K::from_int(rng.gen_range(-2..=2));
        let y0 = K::from_poly(rand_poly(rng, 1, 2));
        // a6 = y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x at (x0, y0)
        let a6 = &(&(&(&(&y0 * &y0) + &(&(&a1 * &x0) * &y0)) + &(&a3 * &y0)) - &(&x0 * &(&x0 * &x0)))
            - &(&(&a2 * &(&x0 * &x0)) + &(&a4 * &x0));
        let Ok(e) = WeierstrassCurve::new(a1, a2, a3, a4, a6) else { continue };
        if e.is_isotrivial() {
            continue;
        }
        let p = e.point(x0, y0).unwrap();
        return (e, p);
    }
}

/// A random non-isotrivial curve with small coefficients and no chosen point.
pub fn random_curve(rng: &mut ChaCha8Rng) -> WeierstrassCurve {
    loop {
        let mut a: Vec<K> = (0..5)
            .map(|i| {
                if rng.gen_bool(0.4) && i < 3 {
                    K::zero()
                } else {
                    let deg = rng.gen_range(0..=2);
                    K::from_poly(rand_poly(rng, deg, 3))
                }
            })
            .collect();
        let a6 = a.pop().unwrap();
        let a4 = a.pop().unwrap();
        let Ok(e) = WeierstrassCurve::new(a[0].clone(), a[1].clone(), a[2].clone(), a4, a6) else { continue };
        if !e.is_isotrivial() {
            return e;
        }
    }
}
