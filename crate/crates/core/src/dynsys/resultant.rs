//! Resultants of N+1 forms of degree d in N+1 variables.
//!
//! Binary forms go through an exact Sylvester determinant. For N >= 2 the
//! Macaulay quotient det M / det M' is evaluated multi-modularly: forms are
//! scaled into Z[t], both minors are evaluated at t = a modulo 31-bit primes,
//! the quotient is interpolated in t, and the images are combined by CRT until
//! one more prime leaves the lifted result unchanged.

use crate::arith::linalg::det_k;
use crate::arith::modp::primes_below;
use crate::arith::{Poly, Q};
use crate::error::{Error, Result};
use crate::funcfield::RationalFunction;
use crate::mpoly::{monomials, MPoly, Monomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

/// Common degree and variable count, checking homogeneity.
pub(crate) fn shape(forms: &[MPoly]) -> Result<(usize, u32)> {
    let n = forms.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two forms".into()));
    }
    let mut d = None;
    for f in forms {
        if f.nvars() != n {
            return Err(Error::InvalidInput(format!("form in {} variables, expected {n}", f.nvars())));
        }
        if !f.is_homogeneous() {
            return Err(Error::InvalidInput(format!("form {f} is not homogeneous")));
        }
        match (d, f.degree()) {
            (_, None) => {}
            (None, Some(e)) => d = Some(e),
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidInput("forms of different degrees".into()))
            }
            _ => {}
        }
    }
    let d = d.ok_or_else(|| Error::InvalidInput("all forms are zero".into()))?;
    Ok((n - 1, d))
}

/// Sylvester resultant of two binary forms, normalized so Res(X^d, Y^d) = 1.
pub fn sylvester(f: &MPoly, g: &MPoly, d: u32) -> RationalFunction {
    let d = d as usize;
    let size = 2 * d;
    let coeff = |h: &MPoly, i: usize| h.coeff(&[(d - i) as u32, i as u32]);
    let mut m = vec![vec![RationalFunction::zero(); size]; size];
    for r in 0..d {
        for i in 0..=d {
            m[r][r + i] = coeff(f, i);
            m[d + r][r + i] = coeff(g, i);
        }
    }
    det_k(&m)
}

/// The resultant of the forms; zero exactly when they share a projective zero.
pub fn macaulay_resultant(forms: &[MPoly]) -> Result<RationalFunction> {
    let (n, d) = shape(forms)?;
    if forms.iter().any(|f| f.is_zero()) {
        return Ok(RationalFunction::zero());
    }
    if n == 1 {
        return Ok(sylvester(&forms[0], &forms[1], d));
    }
    macaulay_formula(forms)
}

/// The Macaulay quotient det(M)/det(minor) for any number of variables,
/// including the binary case that `macaulay_resultant` hands to Sylvester.
pub fn macaulay_formula(forms: &[MPoly]) -> Result<RationalFunction> {
    let (n, d) = shape(forms)?;
    if forms.iter().any(|f| f.is_zero()) {
        return Ok(RationalFunction::zero());
    }
    // unimodular changes of variables leave the resultant unchanged
    let mut current = forms.to_vec();
    for attempt in 0..12u32 {
        if let Some(r) = macaulay_quotient(&current, n, d) {
            return Ok(r);
        }
        current = forms.iter().map(|f| f.compose(&unimodular_substitution(n + 1, attempt))).collect();
    }
    Err(Error::Precondition("extraneous Macaulay minor vanished after 12 changes of variables".into()))
}

/// A determinant-one change of variables: a lower unitriangular substitution
/// followed by an upper one, so every coefficient of the forms gets mixed.
fn unimodular_substitution(nv: usize, attempt: u32) -> Vec<MPoly> {
    let coef = |i: usize, k: usize, salt: i64| {
        RationalFunction::from_int(((attempt as i64 + 1) * (k as i64 + 2) + i as i64 + salt) % 7 + 1)
    };
    let lower: Vec<MPoly> = (0..nv)
        .map(|i| {
            (0..i).fold(MPoly::var(nv, i), |f, j| &f + &MPoly::var(nv, j).scale(&coef(i, j, 3)))
        })
        .collect();
    (0..nv)
        .map(|i| {
            let upper = (i + 1..nv).enumerate().fold(MPoly::var(nv, i), |f, (k, j)| {
                &f + &MPoly::var(nv, j).scale(&coef(i, k, 0))
            });
            upper.compose(&lower)
        })
        .collect()
}

struct IntForm {
    terms: Vec<(Monomial, Vec<BigInt>)>,
    tdeg: usize,
}

/// Scales a form into Z[t]; returns (scale in K, integral form).
fn integral_form(f: &MPoly) -> (RationalFunction, IntForm) {
    let (s, g) = f.primitive_integral();
    let l = g
        .coeffs()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.num().denominator_lcm()));
    let lq = Q::from_integer(l);
    let mut terms = Vec::new();
    let mut tdeg = 0;
    for (m, c) in g.terms() {
        // coefficients of g are polynomials after primitive_integral
        debug_assert!(c.den().is_one());
        let p = c.num().scale(&lq);
        tdeg = tdeg.max(p.deg_or_zero());
        terms.push((m.clone(), p.to_integer_coeffs().unwrap()));
    }
    let scale = s.scale(&lq);
    (scale, IntForm { terms, tdeg })
}

struct Template {
    size: usize,
    /// per row: (column, form index, term index)
    rows: Vec<Vec<(usize, usize, usize)>>,
    extraneous: Vec<usize>,
}

fn template(forms: &[IntForm], n: usize, d: u32) -> Template {
    let big_d = (n as u32 + 1) * (d - 1) + 1;
    let mons = monomials(n + 1, big_d);
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::with_capacity(mons.len());
    let mut extraneous = Vec::new();
    for (ri, m) in mons.iter().enumerate() {
        let i = m.iter().position(|&e| e >= d).unwrap();
        if m.iter().filter(|&&e| e >= d).count() >= 2 {
            extraneous.push(ri);
        }
        let mut base = m.clone();
        base[i] -= d;
        let row = forms[i]
            .terms
            .iter()
            .enumerate()
            .map(|(ti, (mu, _))| {
                let col: Monomial = base.iter().zip(mu).map(|(a, b)| a + b).collect();
                (index[&col], i, ti)
            })
            .collect();
        rows.push(row);
    }
    Template { size: mons.len(), rows, extraneous }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn det_small(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else { return 0 };
        if piv != k {
            m.swap(piv, k);
            det = (p - det) % p;
        }
        det = mulm(det, m[k][k], p);
        let inv = invm(m[k][k], p);
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mulm(row[k], inv, p);
            for j in k..n {
                row[j] = (row[j] + p - mulm(f, pivot_row[j], p)) % p;
            }
        }
    }
    det
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Newton interpolation through (xs[i], ys[i]), coefficients low degree first.
fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (c[i] + p - c[i - 1]) % p;
            let den = (xs[i] + p - xs[i - j]) % p;
            c[i] = mulm(num, invm(den, p), p);
        }
    }
    // expand the Newton form
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + c[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = (next[k + 1] + out[k]) % p;
            }
            next[k] = (next[k] + p - mulm(out[k], xs[i], p)) % p;
        }
        next[0] = (next[0] + c[i]) % p;
        out = next;
    }
    out
}

enum Image {
    Poly(Vec<u64>),
    /// M' vanished at every sampled point for this prime
    MinorVanishes,
}

fn image_mod_p(forms: &[IntForm], tpl: &Template, bound: usize, p: u64) -> Image {
    let reduced: Vec<Vec<Vec<u64>>> = forms
        .iter()
        .map(|f| f.terms.iter().map(|(_, c)| c.iter().map(|x| big_mod(x, p)).collect()).collect())
        .collect();
    let eval_at = |a: u64| -> Option<u64> {
        let vals: Vec<Vec<u64>> = reduced
            .iter()
            .map(|f| {
                f.iter()
                    .map(|c| c.iter().rev().fold(0u64, |acc, x| (mulm(acc, a, p) + x) % p))
                    .collect()
            })
            .collect();
        let mut m = vec![vec![0u64; tpl.size]; tpl.size];
        for (ri, row) in tpl.rows.iter().enumerate() {
            for &(col, fi, ti) in row {
                m[ri][col] = vals[fi][ti];
            }
        }
        let minor: Vec<Vec<u64>> =
            tpl.extraneous.iter().map(|&r| tpl.extraneous.iter().map(|&c| m[r][c]).collect()).collect();
        let dm = det_small(minor, p);
        if dm == 0 {
            return None;
        }
        Some(mulm(det_small(m, p), invm(dm, p), p))
    };
    let needed = bound + 1;
    let mut xs = Vec::with_capacity(needed);
    let mut ys = Vec::with_capacity(needed);
    let mut next = 0u64;
    let mut misses = 0usize;
    while xs.len() < needed {
        let batch: Vec<u64> = (next..next + (needed - xs.len()) as u64).collect();
        next += batch.len() as u64;
        let res: Vec<(u64, Option<u64>)> = batch.par_iter().map(|&a| (a, eval_at(a))).collect();
        for (a, r) in res {
            match r {
                Some(y) => {
                    xs.push(a);
                    ys.push(y);
                }
                None => misses += 1,
            }
        }
        if xs.is_empty() && misses > 24 {
            return Image::MinorVanishes;
        }
        if misses > needed + 64 {
            return Image::MinorVanishes;
        }
    }
    Image::Poly(interpolate(&xs, &ys, p))
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let h: BigInt = m >> 1;
    if x > &h {
        x - m
    } else {
        x.clone()
    }
}

fn macaulay_quotient(forms: &[MPoly], n: usize, d: u32) -> Option<RationalFunction> {
    let (scales, ints): (Vec<_>, Vec<_>) = forms.iter().map(integral_form).unzip();
    let dn = (d as usize).pow(n as u32);
    let bound = dn * ints.iter().map(|f| f.tdeg).sum::<usize>();
    let tpl = template(&ints, n, d);
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); bound + 1];
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigInt>> = None;
    let mut vanish_count = 0;
    for p in primes_below(1 << 31) {
        let img = match image_mod_p(&ints, &tpl, bound, p) {
            Image::Poly(v) => v,
            Image::MinorVanishes => {
                vanish_count += 1;
                if vanish_count >= 2 {
                    return None;
                }
                continue;
            }
        };
        let pb = BigInt::from(p);
        let minv = BigInt::from(invm(big_mod(&modulus, p), p));
        for (r, &y) in residues.iter_mut().zip(&img) {
            let diff = (BigInt::from(y) - &*r).mod_floor(&pb);
            let k = (diff * &minv).mod_floor(&pb);
            *r += &modulus * k;
        }
        modulus *= &pb;
        let lifted: Vec<BigInt> = residues.iter().map(|r| symmetric(r, &modulus)).collect();
        if last.as_ref() == Some(&lifted) {
            let res = Poly::from_bigints(&lifted);
            let denom = scales.iter().fold(RationalFunction::one(), |acc, s| &acc * &s.pow(dn as i64).unwrap());
            return Some(&RationalFunction::from_poly(res) / &denom);
        }
        last = Some(lifted);
    }
    None
}
