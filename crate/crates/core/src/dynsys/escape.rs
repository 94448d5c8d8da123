//! Certified escape rates at a single place.
//!
//! With P_0 the unit-normalized lift and P_{j+1} = F(P_j) / pi^{m_j}, one has
//!
//!   d^{-k} log||F^k(P)|| = log||P|| + sum_{j<k} d^{-(j+1)} tau_j,
//!   tau_j = log||F(P_j)||,
//!
//! and every tau lies in [log|Res| - ((N+1) d^N - 1) log||F||, log||F||]
//! because Res(F) x_i^D lies in the ideal of the F_j with coefficients of
//! degree (N+1) d^N - 1 in those of F. The tail after k steps is therefore at
//! most max|tau| / ((d-1) d^k), which is never larger than the contract
//! constant (lambda + max(0, log||F||)) / ((d-1) d^k) for a normalized lift.

use super::localp::{Elt, FpLocal};
use super::HomogeneousMap;
use crate::arith::modp::primes_below;
use crate::arith::{q, Q};
use crate::budget;
use crate::error::{Error, Result};
use crate::funcfield::{Place, RationalFunction};
use crate::interval::Interval;
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeRateResult {
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub approx: Q,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub error_bound: Q,
    pub iterations: usize,
}

impl EscapeRateResult {
    pub fn interval(&self) -> Interval {
        Interval::centered(&self.approx, &self.error_bound)
    }
}

/// Per-place constants of the map.
pub(crate) struct PlaceData {
    /// min ord of the coefficients
    pub coeff_ord: i64,
    pub res_ord: i64,
}

impl PlaceData {
    pub fn new(f: &HomogeneousMap, v: &Place) -> Self {
        let coeff_ord = f
            .forms()
            .iter()
            .flat_map(|g| g.coeffs())
            .map(|c| v.ord(c).unwrap())
            .min()
            .unwrap();
        let res_ord = v.ord(f.resultant()).unwrap();
        PlaceData { coeff_ord, res_ord }
    }
}

/// max(standard constant, sharp one-step bound); see the module comment.
pub(crate) fn error_constant(f: &HomogeneousMap, v: &Place, pd: &PlaceData) -> Q {
    let nv = v.local_degree() as i64;
    let n = f.dim() as u32;
    let d = f.degree() as i64;
    let log_f = q(-nv * pd.coeff_ord);
    let log_res = q(-nv * pd.res_ord);
    let dn = d.pow(n);
    let lambda = -&log_res + q((n as i64 + 1) * d.pow(2 * n)) * &log_f;
    let standard = &lambda + log_f.clone().max(Q::zero());
    let low = &log_res - q((n as i64 + 1) * dn - 1) * &log_f;
    let sharp = log_f.abs().max(low.abs());
    standard.max(sharp)
}

enum Attempt {
    Done(Vec<i64>),
    NeedPrecision,
    Unlucky,
}

/// The exponents m_j - e for j < k, computed in O_v/pi^prec over F_p.
fn run(f: &HomogeneousMap, lift: &[RationalFunction], v: &Place, k: usize, prec: usize, p: u64, e: i64) -> Attempt {
    let Some(ring) = FpLocal::new(v, prec, p) else { return Attempt::Unlucky };
    let min_ord = lift.iter().filter_map(|x| v.ord(x)).min().unwrap();
    let mut pt: Vec<Elt> = Vec::with_capacity(lift.len());
    for x in lift {
        match ring.embed(x, -min_ord) {
            Some(y) => pt.push(y),
            None => return Attempt::Unlucky,
        }
    }
    // coefficients of pi^e F
    let mut forms: Vec<Vec<(Vec<u32>, Elt)>> = Vec::new();
    for g in f.forms() {
        let mut terms = Vec::new();
        for (m, c) in g.terms() {
            match ring.embed(c, e) {
                Some(y) => terms.push((m.clone(), y)),
                None => return Attempt::Unlucky,
            }
        }
        forms.push(terms);
    }
    let d = f.degree() as usize;
    let mut known = prec;
    let mut taus = Vec::with_capacity(k);
    for _ in 0..k {
        let powers: Vec<Vec<Elt>> = pt
            .iter()
            .map(|x| {
                let mut ps = vec![vec![1u64]];
                for i in 0..d {
                    let next = ring.mul(&ps[i], x);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let vals: Vec<Elt> = forms
            .iter()
            .map(|terms| {
                let mut acc: Elt = Vec::new();
                for (m, c) in terms {
                    let mut term = c.clone();
                    for (i, &ex) in m.iter().enumerate() {
                        if ex > 0 {
                            term = ring.mul(&term, &powers[i][ex as usize]);
                        }
                    }
                    acc = ring.add(&acc, &term);
                }
                acc
            })
            .collect();
        let Some(m) = vals.iter().filter_map(|x| ring.ord_known(x, known)).min() else {
            return Attempt::NeedPrecision;
        };
        taus.push(m as i64 - e);
        pt = vals.iter().map(|x| ring.div_pi(x, m)).collect();
        known -= m;
    }
    Attempt::Done(taus)
}

/// Escape rate of the lift at v after k steps of the iteration.
pub fn escape_rate(f: &HomogeneousMap, lift: &[RationalFunction], v: &Place, k: usize) -> Result<EscapeRateResult> {
    if lift.len() != f.dim() + 1 {
        return Err(Error::WrongTupleLength { expected: f.dim() + 1, got: lift.len() });
    }
    if lift.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidInput("zero point".into()));
    }
    let nv = v.local_degree() as i64;
    let min_ord = lift.iter().filter_map(|x| v.ord(x)).min().unwrap();
    let log_p = q(-nv * min_ord);
    let pd = PlaceData::new(f, v);
    if pd.res_ord == 0 && pd.coeff_ord == 0 {
        return Ok(EscapeRateResult { approx: log_p, error_bound: Q::zero(), iterations: k });
    }
    let d = f.degree() as i64;
    let e = (-pd.coeff_ord).max(0);
    // worst-case precision loss per step, from the lower bound on tau
    let c = q((f.dim() as i64 + 1) * d.pow(f.dim() as u32) - 1);
    let low_ord = (Q::from_integer(pd.res_ord.into()) - c * q(pd.coeff_ord)).ceil().to_integer();
    let per_step: i64 = e + i64::try_from(low_ord).unwrap_or(i64::MAX / 4).max(0);
    let ceiling = (per_step as usize).saturating_mul(k) + 2;
    let mut prec = (2 * k + 4).min(ceiling).max(2);
    budget::check(prec.saturating_mul(v.local_degree()).saturating_mul(f.dim() + 1), "escape-rate precision")?;
    let taus = loop {
        let mut agreed: Option<Vec<i64>> = None;
        let mut prev: Option<Vec<i64>> = None;
        let mut need_more = false;
        for p in primes_below(1 << 62).take(8) {
            match run(f, lift, v, k, prec, p, e) {
                Attempt::Unlucky => continue,
                Attempt::NeedPrecision => {
                    need_more = true;
                    break;
                }
                Attempt::Done(t) => {
                    if prev.as_ref() == Some(&t) {
                        agreed = Some(t);
                        break;
                    }
                    prev = Some(t);
                }
            }
        }
        if let Some(t) = agreed {
            break t;
        }
        if !need_more {
            return Err(Error::Precondition(format!("no two primes agreed on the escape sequence at {v}")));
        }
        if prec >= ceiling {
            return Err(Error::Precondition(format!("precision bound exhausted at {v}")));
        }
        prec = (prec * 2).min(ceiling);
        budget::check(prec.saturating_mul(v.local_degree()).saturating_mul(f.dim() + 1), "escape-rate precision")?;
    };
    let mut approx = log_p;
    let mut scale = Q::from_integer(1.into());
    for t in &taus {
        scale /= q(d);
        approx += &scale * q(-nv * t);
    }
    let err = error_constant(f, v, &pd) * &scale / q(d - 1);
    Ok(EscapeRateResult { approx, error_bound: err, iterations: k })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightResult {
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub approx: Q,
    #[serde(serialize_with = "crate::interval::ser_q")]
    pub error_bound: Q,
}

impl HeightResult {
    pub fn interval(&self) -> Interval {
        Interval::centered(&self.approx, &self.error_bound)
    }
}

pub fn canonical_height(f: &HomogeneousMap, p: &crate::projheights::ProjPoint, k: usize) -> Result<HeightResult> {
    use rayon::prelude::*;
    if p.dim() != f.dim() {
        return Err(Error::WrongTupleLength { expected: f.dim() + 1, got: p.dim() + 1 });
    }
    let lift = p.canonical();
    let places: Vec<Place> = f.support().into_iter().collect();
    let parts: Vec<EscapeRateResult> =
        places.par_iter().map(|v| escape_rate(f, &lift, v, k)).collect::<Result<_>>()?;
    let mut approx = Q::zero();
    let mut err = Q::zero();
    for r in parts {
        approx += r.approx;
        err += r.error_bound;
    }
    Ok(HeightResult { approx, error_bound: err })
}
