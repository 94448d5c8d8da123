//! Division polynomials over Q(t) and the K-rational torsion subgroup.
//!
//! K-rational roots of a division polynomial are found by specializing t at a
//! rational t0 where the specialization stays squarefree, lifting each
//! rational root to a power series in s = t - t0 by Newton iteration, and
//! recovering a rational function by Padé reconstruction. Every candidate is
//! checked exactly, so the search can only miss roots, never invent them; a
//! miss can only happen past the degree bound, which is then flagged.

use super::curve::{CurvePoint, WeierstrassCurve};
use crate::arith::zpoly::rational_roots;
use crate::arith::{q, Poly, Q};
use crate::error::Result;
use crate::funcfield::RationalFunction;
use crate::mpoly::MPoly;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;

type K = RationalFunction;

/// Univariate polynomial in x over K.
fn xpoly(cs: &[K]) -> MPoly {
    MPoly::from_terms(1, cs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone()))).unwrap()
}

fn xdeg(f: &MPoly) -> usize {
    f.degree().unwrap_or(0) as usize
}

/// The division polynomials f_n, with psi_n = f_n for odd n and
/// psi_n = (2y + a1 x + a3) f_n for even n.
pub struct DivisionPolynomials {
    /// (2y + a1 x + a3)^2 as a polynomial in x
    psi2_sq: MPoly,
    memo: HashMap<u32, MPoly>,
}

impl DivisionPolynomials {
    pub fn new(e: &WeierstrassCurve) -> Self {
        let k = |c: i64| K::from_int(c);
        let psi2_sq = xpoly(&[e.b6.clone(), &k(2) * &e.b4, e.b2.clone(), k(4)]);
        let f3 = xpoly(&[e.b8.clone(), &k(3) * &e.b6, &k(3) * &e.b4, e.b2.clone(), k(3)]);
        let f4 = xpoly(&[
            &(&e.b4 * &e.b8) - &(&e.b6 * &e.b6),
            &(&e.b2 * &e.b8) - &(&e.b4 * &e.b6),
            &k(10) * &e.b8,
            &k(10) * &e.b6,
            &k(5) * &e.b4,
            e.b2.clone(),
            k(2),
        ]);
        let mut memo = HashMap::new();
        memo.insert(0, MPoly::zero(1));
        memo.insert(1, MPoly::one(1));
        memo.insert(2, MPoly::one(1));
        memo.insert(3, f3);
        memo.insert(4, f4);
        DivisionPolynomials { psi2_sq, memo }
    }

    /// 4x^3 + b2 x^2 + 2 b4 x + b6, whose roots are the x-coordinates of 2-torsion.
    pub fn two_torsion_poly(&self) -> &MPoly {
        &self.psi2_sq
    }

    pub fn get(&mut self, n: u32) -> MPoly {
        if let Some(f) = self.memo.get(&n) {
            return f.clone();
        }
        let m = n / 2;
        let f = if n % 2 == 1 {
            let (a, b, c, d) = (self.get(m + 2), self.get(m), self.get(m - 1), self.get(m + 1));
            let s = &self.psi2_sq * &self.psi2_sq;
            let left = &a * &b.pow(3);
            let right = &c * &d.pow(3);
            if m.is_multiple_of(2) {
                &(&s * &left) - &right
            } else {
                &left - &(&s * &right)
            }
        } else {
            let (fm, a, b, c, d) = (self.get(m), self.get(m + 2), self.get(m - 1), self.get(m - 2), self.get(m + 1));
            &fm * &(&(&a * &(&b * &b)) - &(&c * &(&d * &d)))
        };
        self.memo.insert(n, f.clone());
        f
    }
}

/// Coefficients of f in Q[t] after clearing denominators, low x-degree first.
fn integral_coeffs(f: &MPoly) -> Vec<Poly> {
    let n = xdeg(f);
    let cs: Vec<K> = (0..=n).map(|i| f.coeff(&[i as u32])).collect();
    let mut l = Poly::one();
    for c in &cs {
        let g = l.gcd(c.den());
        l = (&l * c.den()).exact_div(&g).unwrap();
    }
    cs.iter().map(|c| (c.num() * &l).exact_div(c.den()).unwrap()).collect()
}

fn eval_at(g: &[Poly], t0: &Q) -> Poly {
    Poly::from_coeffs(g.iter().map(|c| c.eval(t0)).collect())
}

fn series_inverse(u: &Poly, prec: usize) -> Poly {
    let u0 = u.coeff(0);
    let inv0 = Q::one() / &u0;
    let mut out = vec![Q::zero(); prec];
    out[0] = inv0.clone();
    for n in 1..prec {
        let mut acc = Q::zero();
        for k in 1..=n.min(u.coeffs().len().saturating_sub(1)) {
            acc += &u.coeff(k) * &out[n - k];
        }
        out[n] = -(acc * &inv0);
    }
    Poly::from_coeffs(out)
}

fn mul_trunc(a: &Poly, b: &Poly, prec: usize) -> Poly {
    (a * b).truncate(prec)
}

/// Rational reconstruction of a series known mod s^prec with deg num, deg den < prec/2.
fn pade(series: &Poly, prec: usize) -> Option<(Poly, Poly)> {
    let half = prec / 2;
    let mut r0 = Poly::monomial(Q::one(), prec);
    let mut r1 = series.truncate(prec);
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() && r1.deg_or_zero() >= half {
        let (qt, r) = r0.divrem(&r1);
        let t = &t0 - &(&qt * &t1);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if t1.is_zero() || t1.coeff(0).is_zero() || t1.deg_or_zero() >= half.max(1) {
        return None;
    }
    Some((r1, t1))
}

struct RootSearch {
    roots: Vec<K>,
    /// some candidate needed more precision than the degree bound allows
    overflow: bool,
}

/// K-rational roots of f, searched among rational functions whose
/// numerator and denominator degrees are at most twice the largest
/// coefficient degree.
fn k_rational_roots(f: &MPoly) -> RootSearch {
    let g = integral_coeffs(f);
    let n = g.len() - 1;
    let bound = 2 * g.iter().map(|c| c.deg_or_zero()).max().unwrap_or(0);
    let cap = 2 * bound + 2;
    // pick the specialization with the fewest rational roots among a few good ones
    let mut best: Option<(Q, Vec<Q>)> = None;
    let mut tried = 0;
    for i in 0..64i64 {
        let t0 = q(if i % 2 == 0 { i / 2 + 2 } else { -(i / 2) - 2 });
        let gt = eval_at(&g, &t0);
        if gt.degree() != Some(n) || !gt.gcd(&gt.derivative()).is_constant() {
            continue;
        }
        let rr = rational_roots(&gt);
        tried += 1;
        if best.as_ref().is_none_or(|(_, b)| rr.len() < b.len()) {
            best = Some((t0, rr));
        }
        if tried >= 3 || best.as_ref().is_some_and(|(_, b)| b.is_empty()) {
            break;
        }
    }
    let Some((t0, starts)) = best else {
        return RootSearch { roots: Vec::new(), overflow: true };
    };
    let shift = Poly::from_coeffs(vec![t0.clone(), Q::one()]);
    let gs: Vec<Poly> = g.iter().map(|c| c.compose(&shift)).collect();
    let back = Poly::from_coeffs(vec![-&t0, Q::one()]);
    let mut roots = Vec::new();
    let mut overflow = false;
    for r in starts {
        let mut x = Poly::constant(r);
        let mut prec = 1;
        let mut found = None;
        while prec < cap {
            prec = (2 * prec).min(cap);
            // Horner for G(x) and G'(x) modulo s^prec
            let mut gx = Poly::zero();
            let mut dgx = Poly::zero();
            for c in gs.iter().rev() {
                dgx = &mul_trunc(&dgx, &x, prec) + &gx;
                gx = &mul_trunc(&gx, &x, prec) + &c.truncate(prec);
            }
            x = &x - &mul_trunc(&gx, &series_inverse(&dgx, prec), prec);
            if let Some((a, b)) = pade(&x, prec) {
                let cand = K::new(a.compose(&back), b.compose(&back)).unwrap();
                if f.eval(std::slice::from_ref(&cand)).is_zero() {
                    found = Some(cand);
                    break;
                }
            }
        }
        match found {
            Some(c) => roots.push(c),
            None => overflow = true,
        }
    }
    RootSearch { roots, overflow }
}

/// Square root in K, if one exists.
fn k_sqrt(x: &K) -> Option<K> {
    if x.is_zero() {
        return Some(K::zero());
    }
    let n = x.num().sqrt()?;
    let d = x.den().sqrt()?;
    K::new(n, d).ok()
}

/// Points with the given x-coordinate, if any are K-rational.
fn lift_x(e: &WeierstrassCurve, x: &K) -> Vec<CurvePoint> {
    let b = &(&e.a1 * x) + &e.a3;
    let rhs = &(&(&(x * &(x * x)) + &(&e.a2 * &(x * x))) + &(&e.a4 * x)) + &e.a6;
    let disc = &(&b * &b) + &(&K::from_int(4) * &rhs);
    let Some(s) = k_sqrt(&disc) else { return Vec::new() };
    let half = K::from_q(Q::new(1.into(), 2.into()));
    let y1 = &(&(-&b) + &s) * &half;
    let y2 = &(&(-&b) - &s) * &half;
    let mut out = vec![CurvePoint::Affine(x.clone(), y1.clone())];
    if y2 != y1 {
        out.push(CurvePoint::Affine(x.clone(), y2));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionPoint {
    pub point: CurvePoint,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionReport {
    /// the whole subgroup found, O first, sorted by order
    pub points: Vec<TorsionPoint>,
    /// true when a root search hit its degree bound
    pub partial: bool,
    pub max_order: u32,
}

impl TorsionReport {
    pub fn group_order(&self) -> usize {
        self.points.len()
    }

    pub fn max_point_order(&self) -> u32 {
        self.points.iter().map(|p| p.order).max().unwrap_or(1)
    }
}

fn prime_powers_upto(n: u32) -> Vec<(u32, u32)> {
    // (prime, power) pairs in increasing power
    let mut out = Vec::new();
    for p in 2..=n {
        if (2..p).any(|d| p % d == 0) {
            continue;
        }
        let mut q = p;
        while q <= n {
            out.push((p, q));
            q *= p;
        }
    }
    out
}

/// Specializations t -> t0 with good reduction. Reduction at such a place
/// is injective on torsion (the residue field has characteristic 0), so a
/// K-point of order dividing q forces a Q-point of order dividing q on each.
fn good_specializations(e: &WeierstrassCurve, want: usize) -> Vec<WeierstrassCurve> {
    let mut out = Vec::new();
    for i in 0..64i64 {
        let t0 = q(if i % 2 == 0 { i / 2 + 2 } else { -(i / 2) - 2 });
        let Some(a) = e.a_invariants().iter().map(|c| c.eval(&t0).map(K::from_q)).collect::<Option<Vec<K>>>() else {
            continue;
        };
        if let Ok(s) = WeierstrassCurve::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()) {
            out.push(s);
            if out.len() == want {
                break;
            }
        }
    }
    out
}

/// Whether a constant curve has a rational point of order dividing q other than O.
fn has_rational_torsion(e0: &WeierstrassCurve, dp: &mut DivisionPolynomials, q: u32) -> bool {
    let poly = if q == 2 { dp.two_torsion_poly().clone() } else { dp.get(q) };
    let g = eval_at(&integral_coeffs(&poly), &Q::zero());
    rational_roots(&g).into_iter().any(|x| {
        lift_x(e0, &K::from_q(x)).iter().any(|pt| e0.order(pt, q).is_some_and(|o| q.is_multiple_of(o)))
    })
}

/// Torsion points of order dividing a prime power q <= max_order, closed
/// under addition.
pub fn torsion_points(e: &WeierstrassCurve, max_order: u32) -> Result<TorsionReport> {
    let mut dp = DivisionPolynomials::new(e);
    let mut found: Vec<CurvePoint> = vec![CurvePoint::Infinity];
    let mut partial = false;
    // p-power torsion is only searched further while the previous level was nontrivial
    let mut dead_primes: Vec<u32> = Vec::new();
    let mut special: Vec<(WeierstrassCurve, DivisionPolynomials)> = good_specializations(e, 2)
        .into_iter()
        .map(|s| {
            let d = DivisionPolynomials::new(&s);
            (s, d)
        })
        .collect();
    for (p, q) in prime_powers_upto(max_order) {
        if dead_primes.contains(&p) {
            continue;
        }
        if special.iter_mut().any(|(s, d)| !has_rational_torsion(s, d, q)) {
            dead_primes.push(p);
            continue;
        }
        let poly = if q == 2 { dp.two_torsion_poly().clone() } else { dp.get(q) };
        crate::budget::check(poly.coeffs().map(|c| c.digit_size()).sum(), "division polynomial")?;
        let search = k_rational_roots(&poly);
        partial |= search.overflow;
        let mut any = false;
        for x in &search.roots {
            for pt in lift_x(e, x) {
                if e.order(&pt, q).is_some_and(|o| q % o == 0) {
                    any = true;
                    if !found.contains(&pt) {
                        found.push(pt);
                    }
                }
            }
        }
        if !any {
            dead_primes.push(p);
        }
    }
    // close under addition; the group is finite and small
    let mut i = 0;
    while i < found.len() {
        for j in 0..=i {
            let s = e.add(&found[i], &found[j]);
            if !found.contains(&s) {
                found.push(s);
            }
        }
        i += 1;
    }
    let mut points: Vec<TorsionPoint> = found
        .into_iter()
        .map(|pt| {
            let order = e.order(&pt, 1000).expect("closure of torsion points is torsion");
            TorsionPoint { point: pt, order }
        })
        .collect();
    points.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.point.to_string().cmp(&b.point.to_string())));
    Ok(TorsionReport { points, partial, max_order })
}
