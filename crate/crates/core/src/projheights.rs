//! Weil heights of points in projective space over Q(t) and local heights of
//! closed subschemes given by cutting functions in an affine chart.

use crate::arith::{Poly, Q};
use crate::dynsys::HomogeneousMap;
use crate::error::{Error, Result};
use crate::funcfield::{log_abs, support, Place, RationalFunction};
use crate::mpoly::MPoly;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A point of P^N(K). Equality is projective.
#[derive(Clone)]
pub struct ProjPoint {
    coords: Vec<RationalFunction>,
}

impl ProjPoint {
    pub fn new(coords: Vec<RationalFunction>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput("a projective point needs at least two coordinates".into()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput("all coordinates are zero".into()));
        }
        Ok(ProjPoint { coords })
    }

    pub fn parse(coords: &[&str]) -> Result<Self> {
        Self::new(coords.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    pub fn scale(&self, l: &RationalFunction) -> Result<Self> {
        if l.is_zero() {
            return Err(Error::InvalidInput("scaling by zero".into()));
        }
        Ok(ProjPoint { coords: self.coords.iter().map(|c| c * l).collect() })
    }

    /// Coprime polynomial coordinates, first nonzero one monic.
    pub fn canonical_polys(&self) -> Vec<Poly> {
        let mut l = Poly::one();
        for c in &self.coords {
            let g = l.gcd(c.den());
            l = (&l * c.den()).exact_div(&g).unwrap();
        }
        let polys: Vec<Poly> =
            self.coords.iter().map(|c| (c.num() * &l).exact_div(c.den()).unwrap()).collect();
        let g = polys.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        let polys: Vec<Poly> = polys.iter().map(|p| p.exact_div(&g).unwrap()).collect();
        let lead = polys.iter().find(|p| !p.is_zero()).unwrap().lc();
        let inv = Q::one() / lead;
        polys.iter().map(|p| p.scale(&inv)).collect()
    }

    /// The canonical integral representative as elements of K.
    pub fn canonical(&self) -> Vec<RationalFunction> {
        self.canonical_polys().into_iter().map(RationalFunction::from_poly).collect()
    }

    pub fn canonical_point(&self) -> ProjPoint {
        ProjPoint { coords: self.canonical() }
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, o: &Self) -> bool {
        self.coords.len() == o.coords.len() && self.canonical_polys() == o.canonical_polys()
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<RationalFunction>::deserialize(d)?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// max_i log|x_i|_v over the nonzero coordinates.
pub fn log_norm(xs: &[RationalFunction], v: &Place) -> Q {
    xs.iter()
        .filter(|x| !x.is_zero())
        .map(|x| log_abs(x, v).unwrap())
        .max()
        .expect("some coordinate is nonzero")
}

/// Weil height: sum over the support of the coordinates of the max log-norm.
pub fn weil_height(p: &ProjPoint) -> Q {
    let rep = p.canonical();
    let nonzero: Vec<RationalFunction> = rep.iter().filter(|x| !x.is_zero()).cloned().collect();
    let mut places = support(&nonzero).expect("nonzero coordinates");
    places.insert(Place::Infinity);
    places.iter().map(|v| log_norm(&rep, v)).fold(Q::zero(), |a, b| a + b)
}

/// A closed subscheme of an affine chart cut out by polynomials with
/// constant coefficients.
#[derive(Clone, Debug)]
pub struct AffineChartSubscheme {
    fs: Vec<MPoly>,
}

impl AffineChartSubscheme {
    pub fn new(fs: Vec<MPoly>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::InvalidInput("need at least one cutting function".into()));
        }
        let n = fs[0].nvars();
        for f in &fs {
            if f.is_zero() {
                return Err(Error::InvalidInput("cutting function is zero".into()));
            }
            if f.nvars() != n {
                return Err(Error::InvalidInput("cutting functions in different charts".into()));
            }
            if f.coeffs().any(|c| !c.is_constant()) {
                return Err(Error::InvalidInput("cutting functions must have constant coefficients".into()));
            }
        }
        Ok(AffineChartSubscheme { fs })
    }

    pub fn functions(&self) -> &[MPoly] {
        &self.fs
    }
}

/// min_i log|f_i(x)|_v^{-1}; `None` stands for +infinity (x lies on Y).
pub fn local_height_subscheme(y: &AffineChartSubscheme, x: &[RationalFunction], v: &Place) -> Result<Option<Q>> {
    if x.len() != y.fs[0].nvars() {
        return Err(Error::WrongTupleLength { expected: y.fs[0].nvars(), got: x.len() });
    }
    for c in x.iter().filter(|c| !c.is_zero()) {
        if log_abs(c, v)? > Q::zero() {
            return Err(Error::NotInUnitPolydisc { place: v.to_string() });
        }
    }
    let mut best: Option<Q> = None;
    for f in &y.fs {
        let val = f.eval(x);
        if val.is_zero() {
            continue;
        }
        let h = -log_abs(&val, v)?;
        best = Some(match best {
            None => h,
            Some(b) => b.min(h),
        });
    }
    Ok(best)
}

/// lambda_v(f) = -log|Res F|_v + (N+1) d^(2N) log||F||_v.
pub fn boundary_height_ratd(f: &HomogeneousMap, v: &Place) -> Result<Q> {
    f.boundary_height(v)
}
