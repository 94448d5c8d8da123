//! Exact linear algebra: fraction-free determinants over Q[t], incremental
//! echelon forms over Q(t), and determinants modulo word-size primes.

use super::modp::Fp;
use super::Poly;
use crate::funcfield::RationalFunction;

/// Bareiss elimination on a square polynomial matrix.
pub fn det_poly(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant over Q(t): clear row denominators, then Bareiss.
pub fn det_k(m: &[Vec<RationalFunction>]) -> RationalFunction {
    let mut scale = Poly::one();
    let rows: Vec<Vec<Poly>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(Poly::one(), |acc, x| {
                    let g = acc.gcd(x.den());
                    (&acc * x.den()).exact_div(&g).unwrap()
                });
            scale = &scale * &l;
            row.iter()
                .map(|x| (x.num() * &l).exact_div(x.den()).unwrap())
                .collect()
        })
        .collect();
    let d = det_poly(rows);
    RationalFunction::new(d, scale).unwrap()
}

/// Incremental row-echelon basis over Q(t) used for independence tests.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<RationalFunction>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the current rows; returns the residual.
    pub fn reduce(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = &*x - &(&c * r);
                    }
                }
            }
        }
        v
    }

    /// Adds v if independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, v: &[RationalFunction]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = r[p].inv().unwrap();
                let row: Vec<RationalFunction> = r.iter().map(|x| x * &inv).collect();
                self.rows.push((p, row));
                true
            }
        }
    }
}

/// Determinant of a matrix over F_p (consumes the matrix).
pub fn det_mod_p(mut m: Vec<Vec<u64>>, fp: &Fp) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for k in 0..n {
        let piv = match (k..n).find(|&i| m[i][k] != 0) {
            Some(i) => i,
            None => return 0,
        };
        if piv != k {
            m.swap(piv, k);
            det = fp.neg(det);
        }
        det = fp.mul(det, m[k][k]);
        let inv = fp.inv(m[k][k]);
        for i in k + 1..n {
            if m[i][k] == 0 {
                continue;
            }
            let f = fp.mul(m[i][k], inv);
            for j in k..n {
                let sub = fp.mul(f, m[k][j]);
                m[i][j] = fp.sub(m[i][j], sub);
            }
        }
    }
    det
}
