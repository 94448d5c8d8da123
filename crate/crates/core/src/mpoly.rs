//! Sparse multivariate polynomials with coefficients in Q(t).
//!
//! Monomials are exponent vectors; the map order on `Vec<u32>` is lex with
//! the first variable largest, so for homogeneous input the last key is the
//! graded-lex leading monomial.

use crate::error::{Error, Result};
use crate::funcfield::RationalFunction;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, RationalFunction>,
}

/// All monomials of total degree `d` in `n` variables, graded-lex descending
/// (x0^d first).
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn mono_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: RationalFunction) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RationalFunction::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m, RationalFunction::one())
    }

    pub fn monomial(m: Monomial, c: RationalFunction) -> Self {
        let nvars = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, RationalFunction)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            if m.len() != nvars {
                return Err(Error::InvalidInput(format!(
                    "monomial {m:?} has {} exponents, expected {nvars}",
                    m.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> RationalFunction {
        self.terms.get(m).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &RationalFunction> {
        self.terms.values()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| mono_degree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &RationalFunction)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &[RationalFunction]) -> RationalFunction {
        assert_eq!(x.len(), self.nvars);
        // cache powers per variable
        let mut powers: Vec<Vec<RationalFunction>> = vec![vec![RationalFunction::one()]; self.nvars];
        let mut acc = RationalFunction::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &x[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitutes `g[i]` for the i-th variable.
    pub fn compose(&self, g: &[MPoly]) -> MPoly {
        assert_eq!(g.len(), self.nvars);
        let n = g.first().map(|x| x.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MPoly>> = g.iter().map(|_| vec![MPoly::one(n)]).collect();
        let mut acc = MPoly::zero(n);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(n, c.clone());
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &g[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Remainder after eliminating every multiple of the leading monomial of `g`.
    pub fn reduce_by(&self, g: &MPoly) -> MPoly {
        let (lm, lc) = g.leading().expect("reduce by zero");
        let lc_inv = lc.inv().unwrap();
        let mut r = self.clone();
        loop {
            let hit = r.terms.iter().rev().find(|(m, _)| mono_divides(lm, m)).map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = hit else { return r };
            let q: Vec<u32> = m.iter().zip(lm).map(|(a, b)| a - b).collect();
            let f = &c * &lc_inv;
            r = &r - &g.mul_monomial(&q).scale(&f);
        }
    }

    /// Coefficient vector along a fixed monomial list.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<RationalFunction> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    /// Multiplies by the lcm of denominators and divides by the gcd of
    /// numerators over Q[t], making the coefficients coprime polynomials.
    pub fn primitive_integral(&self) -> (RationalFunction, MPoly) {
        use crate::arith::Poly;
        let mut l = Poly::one();
        let mut g = Poly::zero();
        for c in self.terms.values() {
            let h = l.gcd(c.den());
            l = (&l * c.den()).exact_div(&h).unwrap();
        }
        for c in self.terms.values() {
            let n = (c.num() * &l).exact_div(c.den()).unwrap();
            g = g.gcd(&n);
        }
        if g.is_zero() {
            return (RationalFunction::one(), self.clone());
        }
        let g = g.monic();
        let s = RationalFunction::new(l, g).unwrap();
        (s.clone(), self.scale(&s))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                let name = NAMES.get(i).map(|s| s.to_string()).unwrap_or(format!("X{i}"));
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars.max(o.nvars));
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                r.add_term(m, x * y);
            }
        }
        r
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    monomial: Vec<u32>,
    coeff: String,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.terms.iter().rev() {
            seq.serialize_element(&TermRecord { monomial: m.clone(), coeff: c.to_string() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs: Vec<TermRecord> = Vec::deserialize(d)?;
        let n = recs.first().map(|r| r.monomial.len()).unwrap_or(0);
        let mut terms = Vec::with_capacity(recs.len());
        for r in recs {
            let c: RationalFunction = r.coeff.parse().map_err(de::Error::custom)?;
            terms.push((r.monomial, c));
        }
        MPoly::from_terms(n, terms).map_err(de::Error::custom)
    }
}
