//! Closed-form effective bounds: four-square decompositions and Zarhin's
//! matrix, polarization degrees, fixed-locus and regularity bounds, Gotzmann
//! numbers of Hilbert polynomials, Hilbert-scheme embedding sizes, the
//! Deligne-Arakelov bound and section dimensions on abelian varieties.

use crate::arith::{q, Poly, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

/// Lexicographically least (a1 <= a2 <= a3 <= a4) with sum of squares s.
pub fn four_square(s: u64) -> [u64; 4] {
    assert!(s >= 1);
    let isqrt = |n: u64| -> u64 {
        let mut r = (n as f64).sqrt() as u64;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        r
    };
    let mut a1 = 0;
    while 4 * a1 * a1 <= s {
        let r1 = s - a1 * a1;
        let mut a2 = a1;
        while 3 * a2 * a2 <= r1 {
            let r2 = r1 - a2 * a2;
            let mut a3 = a2;
            while 2 * a3 * a3 <= r2 {
                let r3 = r2 - a3 * a3;
                let a4 = isqrt(r3);
                if a4 * a4 == r3 && a4 >= a3 {
                    return [a1, a2, a3, a4];
                }
                a3 += 1;
            }
            a2 += 1;
        }
        a1 += 1;
    }
    unreachable!("every positive integer is a sum of four squares")
}

/// Least s >= 1 with s = -1 mod d.
pub fn least_s_minus_one(d: u64) -> u64 {
    assert!(d >= 1);
    let s = d - 1;
    if s == 0 {
        d
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZarhinMatrix {
    pub rows: [[i64; 4]; 4],
    pub s: i64,
}

impl ZarhinMatrix {
    pub fn gram(&self) -> [[i64; 4]; 4] {
        let mut g = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = (0..4).map(|k| self.rows[i][k] * self.rows[j][k]).sum();
            }
        }
        g
    }

    /// I I^t = s Id.
    pub fn is_orthogonal_scaled(&self) -> bool {
        let g = self.gram();
        (0..4).all(|i| (0..4).all(|j| g[i][j] == if i == j { self.s } else { 0 }))
    }

    pub fn det(&self) -> BigInt {
        let m: Vec<Vec<Q>> =
            self.rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        det_q(m).to_integer()
    }
}

fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return Q::zero() };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

pub fn zarhin_matrix(a: [i64; 4]) -> ZarhinMatrix {
    let [a1, a2, a3, a4] = a;
    let rows = [
        [a1, -a2, -a3, -a4],
        [a2, a1, a4, -a3],
        [a3, -a4, a1, a2],
        [a4, a3, -a2, a1],
    ];
    let z = ZarhinMatrix { rows, s: a.iter().map(|x| x * x).sum() };
    debug_assert!(z.is_orthogonal_scaled());
    z
}

fn factorial(g: u64) -> BigInt {
    (1..=g).fold(BigInt::one(), |acc, i| acc * i)
}

/// (2 d g!, (s+1) 2 d g!) with s the least positive integer = -1 mod d.
pub fn polarization_degrees(d: u64, g: u64) -> (BigInt, BigInt) {
    let base = BigInt::from(2 * d) * factorial(g);
    let s = least_s_minus_one(d);
    (base.clone(), base * (s + 1))
}

/// |G^ab| |G|^d deg_L(X).
pub fn fixed_locus_bound(order_g: u64, order_gab: u64, d: u32, deg_l: u64) -> BigInt {
    BigInt::from(order_gab) * BigInt::from(order_g).pow(d) * deg_l
}

/// deg_{L^3}(A) d^(g+1), the fixed-locus bound for the group of d-th roots of unity.
pub fn neron_degree_bound_roots(deg_l3: u64, d: u64, g: u32) -> BigInt {
    BigInt::from(deg_l3) * BigInt::from(d).pow(g + 1)
}

/// d^((n-1) 2^(r-1)).
pub fn regularity_bound(n: u32, r: u32, d: u64) -> Result<BigInt> {
    if n < 2 || r < 1 || d < 1 {
        return Err(Error::Precondition("need n >= 2, r >= 1, d >= 1".into()));
    }
    let e = (n - 1) as u64 * (1u64 << (r - 1));
    Ok(BigInt::from(d).pow(e as u32))
}

/// (g/2)(2 gB - 2 + S), or `None` when 2 gB - 2 + S < 0.
pub fn deligne_bound(g: u64, gb: u64, s: u64) -> Option<Q> {
    let k = 2 * gb as i64 - 2 + s as i64;
    (k >= 0).then(|| q(g as i64) * q(k) / q(2))
}

/// deg_L n^g / g!, which must be an integer.
pub fn abelian_section_dim(deg_l: u64, g: u64, n: u64) -> Result<BigInt> {
    let num = BigInt::from(deg_l) * BigInt::from(n).pow(g as u32);
    let f = factorial(g);
    let (quo, rem) = num.div_rem(&f);
    if !rem.is_zero() {
        return Err(Error::InvalidInput(format!(
            "deg_L = {deg_l} gives a non-integral section count for dimension {g}"
        )));
    }
    Ok(quo)
}

/// An integer-valued polynomial in T with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    p: Poly,
}

fn binom_poly(c: i64, b: u64) -> Poly {
    // binom(T + c, b) as a polynomial in T
    let mut acc = Poly::one();
    for k in 0..b as i64 {
        acc = &acc * &Poly::from_coeffs(vec![q(c - k), q(1)]);
    }
    acc.scale(&(Q::one() / Q::from_integer(factorial(b))))
}

pub fn binom(n: i64, k: u64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    let n = n as u64;
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl HilbertPolynomial {
    pub fn new(p: Poly) -> Result<Self> {
        if p.is_zero() || p.lc() <= Q::zero() {
            return Err(Error::NotHilbertPolynomial(format!("{p} must have positive leading coefficient")));
        }
        let deg = p.deg_or_zero() as i64;
        for t in 0..=deg + 1 {
            let v = p.eval(&q(100 + t));
            if !v.is_integer() || v <= Q::zero() {
                return Err(Error::NotHilbertPolynomial(format!("{p} is not a positive integer at T = {}", 100 + t)));
            }
        }
        Ok(HilbertPolynomial { p })
    }

    /// Accepts the rational-function grammar with `T` as the variable.
    pub fn parse(s: &str) -> Result<Self> {
        // "2T+1" is accepted as shorthand for 2*t+1
        let mut src = String::new();
        for c in s.chars() {
            if c == 'T' {
                if src.trim_end().ends_with(|p: char| p.is_ascii_digit() || p == ')') {
                    src.push('*');
                }
                src.push('t');
            } else {
                src.push(c);
            }
        }
        let f: crate::funcfield::RationalFunction = src.parse()?;
        if !f.is_polynomial() {
            return Err(Error::NotHilbertPolynomial(format!("{s} is not a polynomial")));
        }
        Self::new(f.num().clone())
    }

    pub fn poly(&self) -> &Poly {
        &self.p
    }

    pub fn eval(&self, t: i64) -> BigInt {
        self.p.eval(&q(t)).to_integer()
    }

    /// The Gotzmann decomposition P(T) = sum_i binom(T + b_i - i + 1, b_i).
    pub fn gotzmann_decomposition(&self) -> Result<Vec<u64>> {
        const CAP: usize = 1_000_000;
        let mut rest = self.p.clone();
        let mut bs: Vec<u64> = Vec::new();
        while !rest.is_zero() {
            let b = rest.deg_or_zero() as u64;
            if rest.lc() <= Q::zero() || bs.last().is_some_and(|&prev| b > prev) || bs.len() >= CAP {
                return Err(Error::NotHilbertPolynomial(format!(
                    "{} has no Gotzmann decomposition",
                    self.p
                )));
            }
            let i = bs.len() as i64 + 1;
            rest = &rest - &binom_poly(b as i64 - i + 1, b);
            bs.push(b);
        }
        Ok(bs)
    }

    pub fn from_decomposition(bs: &[u64]) -> Poly {
        bs.iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (i, &b)| &acc + &binom_poly(b as i64 - (i as i64 + 1) + 1, b))
    }
}

pub fn gotzmann_number(p: &HilbertPolynomial) -> Result<u64> {
    Ok(p.gotzmann_decomposition()?.len() as u64)
}

/// (binom(t+r, r) - P(t), binom(t+r+1, r) - P(t+1) + 1).
pub fn hilbert_embedding_sizes(t: i64, r: u64, p: &HilbertPolynomial) -> Result<(BigInt, BigInt)> {
    let g = gotzmann_number(p)?;
    if t < g as i64 {
        return Err(Error::Precondition(format!("t = {t} is below the Gotzmann number {g}")));
    }
    let rank = binom(t + r as i64, r) - p.eval(t);
    let deg = binom(t + r as i64 + 1, r) - p.eval(t + 1) + 1;
    Ok((rank, deg))
}

/// One row of the parameter-grid table.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsRow {
    pub d: u64,
    pub g: u64,
    pub s: u64,
    pub four_square: [u64; 4],
    pub deg_a: String,
    pub deg_at_bound: String,
    pub regularity_bound: String,
    pub deligne_bound: String,
}

pub fn constants_table(ds: &[u64], gs: &[u64]) -> Vec<ConstantsRow> {
    let mut out = Vec::new();
    for &d in ds {
        for &g in gs {
            let s = least_s_minus_one(d);
            let (a, b) = polarization_degrees(d, g);
            out.push(ConstantsRow {
                d,
                g,
                s,
                four_square: four_square(s),
                deg_a: a.to_string(),
                deg_at_bound: b.to_string(),
                regularity_bound: regularity_bound(3, g as u32, d).unwrap().to_string(),
                deligne_bound: deligne_bound(g, 0, d + 2).map(|x| crate::arith::fmt_q(&x)).unwrap_or("inapplicable".into()),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_squares() {
        assert_eq!(four_square(1), [0, 0, 0, 1]);
        assert_eq!(four_square(7), [1, 1, 1, 2]);
        assert_eq!(least_s_minus_one(5), 4);
        assert_eq!(least_s_minus_one(1), 1);
    }

    #[test]
    fn zarhin() {
        let z = zarhin_matrix([1, 0, 0, 0]);
        assert!(z.is_orthogonal_scaled());
        let z = zarhin_matrix([1, 1, 1, 2]);
        assert_eq!(z.s, 7);
        assert!(z.is_orthogonal_scaled());
        assert_eq!(z.det().pow(2u32), BigInt::from(7).pow(4u32));
    }

    #[test]
    fn polarization() {
        assert_eq!(polarization_degrees(1, 1).0, BigInt::from(2));
        assert_eq!(polarization_degrees(2, 3).0, BigInt::from(24));
    }

    #[test]
    fn simple_bounds() {
        assert_eq!(fixed_locus_bound(1, 1, 5, 9), BigInt::from(9));
        assert_eq!(fixed_locus_bound(2, 2, 1, 2), BigInt::from(8));
        assert_eq!(regularity_bound(3, 1, 2).unwrap(), BigInt::from(4));
        assert_eq!(regularity_bound(4, 2, 3).unwrap(), BigInt::from(729));
        assert_eq!(regularity_bound(5, 3, 1).unwrap(), BigInt::from(1));
        assert_eq!(deligne_bound(1, 0, 3), Some(Q::new(1.into(), 2.into())));
        assert_eq!(deligne_bound(1, 0, 1), None);
        assert_eq!(deligne_bound(2, 1, 0), Some(q(0)));
        assert_eq!(deligne_bound(2, 2, 0), Some(q(2)));
        assert_eq!(abelian_section_dim(3, 1, 2).unwrap(), BigInt::from(6));
        assert_eq!(abelian_section_dim(2, 2, 3).unwrap(), BigInt::from(9));
        assert!(abelian_section_dim(1, 2, 3).is_err());
    }

    #[test]
    fn gotzmann() {
        let g = |s: &str| gotzmann_number(&HilbertPolynomial::parse(s).unwrap()).unwrap();
        assert_eq!(g("1"), 1);
        assert_eq!(g("2T+1"), 2);
        assert_eq!(g("3T+1"), 4);
        let p = HilbertPolynomial::parse("1").unwrap();
        assert_eq!(hilbert_embedding_sizes(1, 2, &p).unwrap(), (BigInt::from(2), BigInt::from(6)));
        assert!(HilbertPolynomial::parse("-T").is_err());
    }

    #[test]
    fn decomposition_is_idempotent() {
        let p = HilbertPolynomial::parse("T^2/2+3*T/2+1").unwrap();
        let bs = p.gotzmann_decomposition().unwrap();
        let again = HilbertPolynomial::new(HilbertPolynomial::from_decomposition(&bs)).unwrap();
        assert_eq!(again.gotzmann_decomposition().unwrap(), bs);
    }
}
