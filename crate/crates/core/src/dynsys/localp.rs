//! O_v / pi^prec with the residue field Q replaced by F_p.
//!
//! Orders of K-elements are computed exactly over Q; only the unit parts are
//! reduced mod p. A prime is "unlucky" for an element when the reduction
//! changes its order or kills the unit part, and such primes are rejected
//! (`None`) so the caller can move to the next one.

use crate::arith::modp::Fp;
use crate::arith::{Poly, Q};
use crate::funcfield::{Place, RationalFunction};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
enum Chart {
    Shift(u64),
    Inf,
    General { pbar: Vec<u64>, modulus: Vec<u64> },
}

#[derive(Clone, Debug)]
pub(crate) struct FpLocal {
    fp: Fp,
    chart: Chart,
    place: Place,
    prec: usize,
}

pub(crate) type Elt = Vec<u64>;

impl FpLocal {
    pub fn new(v: &Place, prec: usize, p: u64) -> Option<Self> {
        let fp = Fp::new(p);
        let chart = match v {
            Place::Infinity => Chart::Inf,
            Place::Finite(q) if q.degree() == Some(1) => Chart::Shift(reduce_q(&fp, &-q.coeff(0))?),
            Place::Finite(q) => {
                let pbar = reduce_poly(&fp, q)?;
                let mut modulus = vec![1u64];
                for _ in 0..prec {
                    modulus = fp.poly_mul(&modulus, &pbar);
                }
                Chart::General { pbar, modulus }
            }
        };
        Some(FpLocal { fp, chart, place: v.clone(), prec })
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        match &self.chart {
            Chart::General { modulus, .. } => self.fp.poly_rem(&self.fp.poly_mul(a, b), modulus),
            _ => {
                let n = self.prec.min(a.len() + b.len() - 1);
                let mut v = vec![0u64; n];
                for (i, &x) in a.iter().enumerate().take(n) {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate().take(n - i) {
                        v[i + j] = self.fp.add(v[i + j], self.fp.mul(x, y));
                    }
                }
                Fp::trim(&mut v);
                v
            }
        }
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        self.fp.poly_add(a, b)
    }

    /// ord of an element known modulo pi^r; `None` if it is zero to that precision.
    pub fn ord_known(&self, a: &Elt, r: usize) -> Option<usize> {
        match &self.chart {
            Chart::General { pbar, .. } => {
                let mut k = 0;
                let mut g = a.clone();
                while k < r {
                    if g.is_empty() {
                        return None;
                    }
                    let (q, rem) = self.fp.poly_divrem(&g, pbar);
                    if !rem.is_empty() {
                        return Some(k);
                    }
                    g = q;
                    k += 1;
                }
                None
            }
            _ => a.iter().take(r).position(|&x| x != 0),
        }
    }

    /// a / pi^m for a divisible by pi^m.
    pub fn div_pi(&self, a: &Elt, m: usize) -> Elt {
        if m == 0 {
            return a.clone();
        }
        match &self.chart {
            Chart::General { pbar, .. } => {
                let mut g = a.clone();
                for _ in 0..m {
                    g = self.fp.poly_divrem(&g, pbar).0;
                }
                g
            }
            _ => a.get(m..).map(|s| s.to_vec()).unwrap_or_default(),
        }
    }

    pub fn times_pi(&self, u: &Elt, k: usize) -> Elt {
        match &self.chart {
            Chart::General { pbar, modulus } => {
                let mut g = u.clone();
                for _ in 0..k {
                    g = self.fp.poly_rem(&self.fp.poly_mul(&g, pbar), modulus);
                }
                g
            }
            _ => {
                if u.is_empty() || k >= self.prec {
                    return Vec::new();
                }
                let mut v = vec![0u64; k];
                v.extend_from_slice(u);
                v.truncate(self.prec);
                Fp::trim(&mut v);
                v
            }
        }
    }

    fn series_inverse(&self, u: &Elt) -> Option<Elt> {
        let u0 = *u.first()?;
        if u0 == 0 {
            return None;
        }
        let inv0 = self.fp.inv(u0);
        let mut out = vec![0u64; self.prec];
        out[0] = inv0;
        for n in 1..self.prec {
            let mut acc = 0;
            for k in 1..=n.min(u.len().saturating_sub(1)) {
                acc = self.fp.add(acc, self.fp.mul(u[k], out[n - k]));
            }
            out[n] = self.fp.mul(self.fp.neg(acc), inv0);
        }
        Fp::trim(&mut out);
        Some(out)
    }

    /// Polynomial in the chart's local variable, with its exact order checked.
    fn local_poly(&self, f: &Poly) -> Option<(usize, Elt)> {
        let fm = reduce_poly(&self.fp, f)?;
        match &self.chart {
            Chart::Shift(c) => {
                // f(s + c)
                let mut acc: Elt = Vec::new();
                for &a in fm.iter().rev() {
                    let shifted = self.fp.poly_add(&shift1(&acc), &self.fp.poly_scale(&acc, *c));
                    acc = self.fp.poly_add(&shifted, &[a]);
                }
                let o = self.place.ord_poly(f) as usize;
                if acc.get(o).copied().unwrap_or(0) == 0 || acc.iter().take(o).any(|&x| x != 0) {
                    return None;
                }
                Some((o, acc[o..].to_vec()))
            }
            Chart::Inf => {
                let deg = f.degree()?;
                if fm.len() != deg + 1 {
                    return None;
                }
                let mut r = fm.clone();
                r.reverse();
                Some((0, r))
            }
            Chart::General { .. } => None,
        }
    }

    /// (ord_v f, unit part mod pi^prec) or `None` for an unlucky prime.
    pub fn expand(&self, f: &RationalFunction) -> Option<(i64, Elt)> {
        let o = self.place.ord(f)?;
        match &self.chart {
            Chart::General { pbar, modulus } => {
                let Place::Finite(q) = &self.place else { unreachable!() };
                let a = self.place.ord_poly(f.num());
                let b = self.place.ord_poly(f.den());
                let n = f.num().exact_div(&q.pow(a as u32)).unwrap();
                let d = f.den().exact_div(&q.pow(b as u32)).unwrap();
                let nm = self.fp.poly_rem(&reduce_poly(&self.fp, &n)?, modulus);
                let dm = self.fp.poly_rem(&reduce_poly(&self.fp, &d)?, modulus);
                if self.fp.poly_rem(&nm, pbar).is_empty() {
                    return None;
                }
                let (g, s, _) = self.fp.poly_xgcd(&dm, modulus);
                if g.len() != 1 {
                    return None;
                }
                let s = self.fp.poly_scale(&s, self.fp.inv(g[0]));
                Some((o, self.fp.poly_rem(&self.fp.poly_mul(&nm, &s), modulus)))
            }
            _ => {
                let (_, n) = self.local_poly(f.num())?;
                let (_, d) = self.local_poly(f.den())?;
                let dinv = self.series_inverse(&d)?;
                Some((o, self.mul(&n, &dinv)))
            }
        }
    }

    /// pi^shift * f for an element with ord f + shift >= 0.
    pub fn embed(&self, f: &RationalFunction, shift: i64) -> Option<Elt> {
        if f.is_zero() {
            return Some(Vec::new());
        }
        let (o, u) = self.expand(f)?;
        let k = o + shift;
        assert!(k >= 0, "element is not integral after shifting");
        Some(self.times_pi(&u, k as usize))
    }
}

fn shift1(a: &Elt) -> Elt {
    if a.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64];
    v.extend_from_slice(a);
    v
}

fn reduce_q(fp: &Fp, x: &Q) -> Option<u64> {
    let p = BigInt::from(fp.p);
    let d = x.denom().mod_floor(&p);
    if d.is_zero() {
        return None;
    }
    let n = x.numer().mod_floor(&p).to_u64().unwrap();
    Some(fp.mul(n, fp.inv(d.to_u64().unwrap())))
}

fn reduce_poly(fp: &Fp, f: &Poly) -> Option<Elt> {
    let mut v: Elt = f.coeffs().iter().map(|c| reduce_q(fp, c)).collect::<Option<_>>()?;
    Fp::trim(&mut v);
    Some(v)
}
