//! Weierstrass curves over Q(t), their invariants and the group law.

use crate::error::{Error, Result};
use crate::funcfield::RationalFunction;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

type K = RationalFunction;

fn k(c: i64) -> K {
    K::from_int(c)
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with its derived quantities.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: K,
    pub a2: K,
    pub a3: K,
    pub a4: K,
    pub a6: K,
    pub b2: K,
    pub b4: K,
    pub b6: K,
    pub b8: K,
    pub c4: K,
    pub c6: K,
    pub disc: K,
    pub j: K,
}

impl WeierstrassCurve {
    pub fn new(a1: K, a2: K, a3: K, a4: K, a6: K) -> Result<Self> {
        let b2 = &(&a1 * &a1) + &(&k(4) * &a2);
        let b4 = &(&k(2) * &a4) + &(&a1 * &a3);
        let b6 = &(&a3 * &a3) + &(&k(4) * &a6);
        let b8 = &(&(&(&(&a1 * &a1) * &a6) + &(&(&k(4) * &a2) * &a6)) - &(&(&a1 * &a3) * &a4))
            + &(&(&a2 * &(&a3 * &a3)) - &(&a4 * &a4));
        let c4 = &(&b2 * &b2) - &(&k(24) * &b4);
        let c6 = &(&(&(-&b2) * &(&b2 * &b2)) + &(&(&k(36) * &b2) * &b4)) - &(&k(216) * &b6);
        let disc = &(&(&(-&(&b2 * &b2)) * &b8) - &(&k(8) * &(&b4 * &(&b4 * &b4))))
            + &(&(&(&k(9) * &b2) * &(&b4 * &b6)) - &(&k(27) * &(&b6 * &b6)));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let j = &(&c4 * &(&c4 * &c4)) / &disc;
        let e = WeierstrassCurve { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc, j };
        debug_assert!(e.invariants_consistent());
        Ok(e)
    }

    pub fn parse(a: [&str; 5]) -> Result<Self> {
        let v: Vec<K> = a.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        Self::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone())
    }

    /// y^2 = x^3 + a x + b.
    pub fn short(a: K, b: K) -> Result<Self> {
        Self::new(K::zero(), K::zero(), K::zero(), a, b)
    }

    /// Legendre form y^2 = x(x-1)(x-t).
    pub fn legendre() -> Self {
        let t = K::t();
        Self::new(K::zero(), -&(&t + &k(1)), K::zero(), t, K::zero()).unwrap()
    }

    /// Kubert form y^2 + (1-t) xy - t y = x^3 - t x^2, on which (0,0) has order 5.
    pub fn kubert5() -> Self {
        let t = K::t();
        Self::new(&k(1) - &t, -&t, -&t, K::zero(), K::zero()).unwrap()
    }

    pub fn a_invariants(&self) -> [&K; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// c4^3 - c6^2 = 1728 disc and j disc = c4^3.
    pub fn invariants_consistent(&self) -> bool {
        let c43 = &self.c4 * &(&self.c4 * &self.c4);
        &c43 - &(&self.c6 * &self.c6) == &k(1728) * &self.disc && &self.j * &self.disc == c43
    }

    pub fn is_isotrivial(&self) -> bool {
        self.j.is_constant()
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => self.lhs_minus_rhs(x, y).is_zero(),
        }
    }

    fn lhs_minus_rhs(&self, x: &K, y: &K) -> K {
        let lhs = &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
        let rhs = &(&(&(x * &(x * x)) + &(&self.a2 * &(x * x))) + &(&self.a4 * x)) + &self.a6;
        &lhs - &rhs
    }

    pub fn point(&self, x: K, y: K) -> Result<CurvePoint> {
        let p = CurvePoint::Affine(x, y);
        if !self.contains(&p) {
            return Err(Error::PointOffTarget);
        }
        Ok(p)
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                CurvePoint::Affine(x.clone(), &(&(-y) - &(&self.a1 * x)) - &self.a3)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = &(&(&k(2) * y1) + &(&self.a1 * x1)) + &self.a3;
            if y1 != y2 || denom.is_zero() {
                return CurvePoint::Infinity;
            }
            let num = &(&(&(&k(3) * &(x1 * x1)) + &(&(&k(2) * &self.a2) * x1)) + &self.a4) - &(&self.a1 * y1);
            let nu_num = &(&(&(-&(x1 * &(x1 * x1))) + &(&self.a4 * x1)) + &(&k(2) * &self.a6)) - &(&self.a3 * y1);
            (&num / &denom, &nu_num / &denom)
        } else {
            let dx = x2 - x1;
            (&(y2 - y1) / &dx, &(&(y1 * x2) - &(y2 * x1)) / &dx)
        };
        let x3 = &(&(&(&lambda * &lambda) + &(&self.a1 * &lambda)) - &self.a2) - &(x1 + x2);
        let y3 = &(&(-&(&(&lambda + &self.a1) * &x3)) - &nu) - &self.a3;
        CurvePoint::Affine(x3, y3)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn mul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// Least n in 1..=max with nP = O.
    pub fn order(&self, p: &CurvePoint, max: u32) -> Option<u32> {
        let mut acc = p.clone();
        for n in 1..=max {
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }

    /// The substitution t -> t + c applied to every coefficient.
    pub fn shift_base(&self, c: &crate::arith::Q) -> Result<Self> {
        let f = |x: &K| x.shift_var(c);
        Self::new(f(&self.a1), f(&self.a2), f(&self.a3), f(&self.a4), f(&self.a6))
    }

    /// The homogeneous cubic Y^2 Z + a1 XYZ + a3 YZ^2 - X^3 - a2 X^2 Z - a4 XZ^2 - a6 Z^3.
    pub fn cubic_form(&self) -> crate::mpoly::MPoly {
        use crate::mpoly::MPoly;
        let terms = vec![
            (vec![0, 2, 1], k(1)),
            (vec![1, 1, 1], self.a1.clone()),
            (vec![0, 1, 2], self.a3.clone()),
            (vec![3, 0, 0], k(-1)),
            (vec![2, 0, 1], -&self.a2),
            (vec![1, 0, 2], -&self.a4),
            (vec![0, 0, 3], -&self.a6),
        ];
        MPoly::from_terms(3, terms).unwrap()
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[a1={}, a2={}, a3={}, a4={}, a6={}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Curve JSON: {"a1": "...", ..., "a6": "..."}; missing entries are zero.
#[derive(Serialize, Deserialize, Default)]
pub struct CurveSpec {
    #[serde(default)]
    pub a1: Option<String>,
    #[serde(default)]
    pub a2: Option<String>,
    #[serde(default)]
    pub a3: Option<String>,
    #[serde(default)]
    pub a4: Option<String>,
    #[serde(default)]
    pub a6: Option<String>,
}

impl CurveSpec {
    pub fn build(&self) -> Result<WeierstrassCurve> {
        let g = |s: &Option<String>| -> Result<K> { s.as_deref().unwrap_or("0").parse() };
        WeierstrassCurve::new(g(&self.a1)?, g(&self.a2)?, g(&self.a3)?, g(&self.a4)?, g(&self.a6)?)
    }
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeierstrassCurve", 5)?;
        st.serialize_field("a1", &self.a1.to_string())?;
        st.serialize_field("a2", &self.a2.to_string())?;
        st.serialize_field("a3", &self.a3.to_string())?;
        st.serialize_field("a4", &self.a4.to_string())?;
        st.serialize_field("a6", &self.a6.to_string())?;
        st.end()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(K, K),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&K> {
        match self {
            CurvePoint::Affine(x, _) => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&K> {
        match self {
            CurvePoint::Affine(_, y) => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    /// (x : y : 1), or (0 : 1 : 0) for O.
    pub fn projective(&self) -> crate::projheights::ProjPoint {
        let c = match self {
            CurvePoint::Infinity => vec![K::zero(), k(1), K::zero()],
            CurvePoint::Affine(x, y) => vec![x.clone(), y.clone(), k(1)],
        };
        crate::projheights::ProjPoint::new(c).unwrap()
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => s.serialize_str("O"),
            CurvePoint::Affine(x, y) => [x.to_string(), y.to_string()].serialize(s),
        }
    }
}
