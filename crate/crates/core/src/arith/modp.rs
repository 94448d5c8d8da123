//! Word-size prime fields and dense univariate polynomials over them.
//!
//! Used as the modular layer underneath factorization over Q, rational root
//! search, and multi-modular determinant evaluation.

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        let r = a.rem_euclid(self.p as i64);
        r as u64
    }

    // --- polynomials, coefficient vectors low degree first ---

    pub fn trim(f: &mut Vec<u64>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn poly_add(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        let n = f.len().max(g.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| self.add(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
            .collect();
        Self::trim(&mut r);
        r
    }

    pub fn poly_sub(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        let n = f.len().max(g.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| self.sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
            .collect();
        Self::trim(&mut r);
        r
    }

    pub fn poly_mul(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u128; f.len() + g.len() - 1];
        let p = self.p as u128;
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                r[i + j] = (r[i + j] + a as u128 * b as u128) % p;
            }
        }
        let mut r: Vec<u64> = r.into_iter().map(|x| x as u64).collect();
        Self::trim(&mut r);
        r
    }

    pub fn poly_scale(&self, f: &[u64], c: u64) -> Vec<u64> {
        let mut r: Vec<u64> = f.iter().map(|&a| self.mul(a, c)).collect();
        Self::trim(&mut r);
        r
    }

    /// Quotient and remainder; `g` must be nonzero.
    pub fn poly_divrem(&self, f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!g.is_empty(), "division by zero polynomial");
        let mut r = f.to_vec();
        Self::trim(&mut r);
        if r.len() < g.len() {
            return (Vec::new(), r);
        }
        let lc_inv = self.inv(*g.last().unwrap());
        let dg = g.len() - 1;
        let mut q = vec![0u64; r.len() - dg];
        while r.len() > dg && !r.is_empty() {
            let k = r.len() - 1 - dg;
            let c = self.mul(*r.last().unwrap(), lc_inv);
            q[k] = c;
            for (i, &b) in g.iter().enumerate() {
                r[k + i] = self.sub(r[k + i], self.mul(c, b));
            }
            Self::trim(&mut r);
        }
        Self::trim(&mut q);
        (q, r)
    }

    pub fn poly_rem(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        self.poly_divrem(f, g).1
    }

    pub fn monic(&self, f: &[u64]) -> Vec<u64> {
        match f.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(f, self.inv(lc)),
        }
    }

    pub fn poly_gcd(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        let mut a = f.to_vec();
        let mut b = g.to_vec();
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended gcd: returns (g, s, t) with s f + t g = gcd (monic).
    pub fn poly_xgcd(&self, f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (f.to_vec(), g.to_vec());
        Self::trim(&mut r0);
        Self::trim(&mut r1);
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if let Some(&lc) = r0.last() {
            let li = self.inv(lc);
            (self.poly_scale(&r0, li), self.poly_scale(&s0, li), self.poly_scale(&t0, li))
        } else {
            (r0, s0, t0)
        }
    }

    pub fn derivative(&self, f: &[u64]) -> Vec<u64> {
        let mut r: Vec<u64> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| self.mul(a, i as u64 % self.p))
            .collect();
        Self::trim(&mut r);
        r
    }

    /// base^e mod m.
    pub fn poly_powmod(&self, base: &[u64], mut e: u128, m: &[u64]) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_rem(&self.poly_mul(&result, &b), m);
            }
            e >>= 1;
            if e > 0 {
                b = self.poly_rem(&self.poly_mul(&b, &b), m);
            }
        }
        self.poly_rem(&result, m)
    }

    pub fn eval(&self, f: &[u64], x: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn is_squarefree(&self, f: &[u64]) -> bool {
        let df = self.derivative(f);
        if df.is_empty() {
            return f.len() <= 1;
        }
        self.poly_gcd(f, &df).len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(usize, Vec<u64>)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut i = 0;
        while rest.len() > 1 {
            i += 1;
            if 2 * i > rest.len() - 1 {
                let deg = rest.len() - 1;
                out.push((deg, rest));
                break;
            }
            h = self.poly_powmod(&h, self.p as u128, &rest);
            let g = self.poly_gcd(&rest, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
                out.push((i, g));
            }
        }
        out
    }

    /// Splits a monic squarefree product of degree-`deg` irreducibles.
    pub fn equal_degree<R: Rng>(&self, f: &[u64], deg: usize, rng: &mut R) -> Vec<Vec<u64>> {
        let n = f.len() - 1;
        if n == deg {
            return vec![f.to_vec()];
        }
        assert!(self.p > 2, "equal-degree splitting needs odd p");
        loop {
            let a: Vec<u64> = {
                let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
                Self::trim(&mut a);
                a
            };
            if a.len() < 2 {
                continue;
            }
            let e = ((self.p as u128).pow(deg as u32) - 1) / 2;
            let b = self.poly_sub(&self.poly_powmod(&a, e, f), &[1]);
            let g = self.poly_gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, deg, rng);
                out.extend(self.equal_degree(&self.monic(&h), deg, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a squarefree polynomial.
    pub fn factor_squarefree<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for (deg, g) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, deg, rng));
        }
        out.sort();
        out
    }

    /// Distinct roots of f in F_p.
    pub fn roots<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<u64> {
        let f = self.monic(f);
        if f.len() <= 1 {
            return Vec::new();
        }
        let x = vec![0u64, 1];
        let xp = self.poly_powmod(&x, self.p as u128, &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&xp, &x));
        if g.len() <= 1 {
            return Vec::new();
        }
        let mut r: Vec<u64> = self
            .equal_degree(&g, 1, rng)
            .into_iter()
            .map(|lin| self.neg(lin[0]))
            .collect();
        r.sort();
        r
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes descending from `start`.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    let mut n = start;
    std::iter::from_fn(move || {
        while n > 2 {
            n -= 1;
            if is_prime_u64(n) {
                return Some(n);
            }
        }
        None
    })
}
