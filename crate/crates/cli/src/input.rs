//! Input documents: a JSON object given inline or as a path, merged with
//! command-line flags (flags win).

use crate::CliError;
use ffht::dynsys::HomogeneousMap;
use ffht::elliptic::{CurvePoint, CurveSpec, WeierstrassCurve};
use ffht::goodbasis::Target;
use ffht::mpoly::MPoly;
use ffht::projheights::ProjPoint;
use ffht::{Place, RationalFunction};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpecDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    /// forms of a homogeneous lift, in the polynomial JSON layout
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<serde_json::Value>,
    /// dimension N of a projective-space target; omitted means the curve's cubic
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projective: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<u64>>,
    // a bare curve document: the a-invariants at top level
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a3: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a6: Option<String>,
}

/// A curve is an object of a-invariants or one of the names "legendre", "kubert5".
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CurveSpecDoc {
    Named(String),
    Coeffs {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a1: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a2: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a3: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a4: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a6: Option<String>,
    },
}

pub fn load(src: Option<&str>) -> Result<InputDoc, CliError> {
    let Some(src) = src else { return Ok(InputDoc::default()) };
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| CliError::new("io_error", format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::new("invalid_json", e.to_string()))
}

/// Parses a curve flag: inline JSON or a name.
pub fn curve_flag(s: &str) -> Result<CurveSpecDoc, CliError> {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| CliError::new("invalid_json", e.to_string()))
    } else {
        Ok(CurveSpecDoc::Named(s.trim().to_string()))
    }
}

/// Splits "a, b, c" at top-level commas.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    out.push(cur.trim().to_string());
    out
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, CliError> {
    split_list(s)
        .iter()
        .map(|x| x.parse().map_err(|_| CliError::new("invalid_input", format!("not a nonnegative integer: {x}"))))
        .collect()
}

impl InputDoc {
    fn curve_doc(&self) -> Option<CurveSpecDoc> {
        if let Some(c) = &self.curve {
            return Some(c.clone());
        }
        let bare = [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6];
        bare.iter().any(|a| a.is_some()).then(|| CurveSpecDoc::Coeffs {
            a1: self.a1.clone(),
            a2: self.a2.clone(),
            a3: self.a3.clone(),
            a4: self.a4.clone(),
            a6: self.a6.clone(),
        })
    }

    pub fn has_curve(&self) -> bool {
        self.curve_doc().is_some()
    }

    pub fn curve(&self) -> Result<WeierstrassCurve, CliError> {
        match self.curve_doc() {
            None => Err(CliError::new("missing_input", "a curve is required")),
            Some(CurveSpecDoc::Named(n)) => match n.as_str() {
                "legendre" => Ok(WeierstrassCurve::legendre()),
                "kubert5" => Ok(WeierstrassCurve::kubert5()),
                _ => Err(CliError::new("invalid_input", format!("unknown curve name {n}"))),
            },
            Some(CurveSpecDoc::Coeffs { a1, a2, a3, a4, a6 }) => Ok(CurveSpec { a1, a2, a3, a4, a6 }.build()?),
        }
    }

    pub fn place(&self) -> Result<Option<Place>, CliError> {
        Ok(self.place.as_deref().map(Place::parse).transpose()?)
    }

    pub fn curve_point(&self, e: &WeierstrassCurve) -> Result<CurvePoint, CliError> {
        let p = self.point.as_ref().ok_or_else(|| CliError::new("missing_input", "a point is required"))?;
        curve_point(e, p)
    }

    pub fn curve_points(&self, e: &WeierstrassCurve) -> Result<Vec<CurvePoint>, CliError> {
        let ps = self.points.as_ref().ok_or_else(|| CliError::new("missing_input", "a list of points is required"))?;
        ps.iter().map(|p| curve_point(e, p)).collect()
    }

    pub fn projective_point(&self) -> Result<ProjPoint, CliError> {
        let p = self.point.as_ref().ok_or_else(|| CliError::new("missing_input", "a point is required"))?;
        let refs: Vec<&str> = p.iter().map(String::as_str).collect();
        Ok(ProjPoint::parse(&refs)?)
    }

    /// Projective tuple for a Green computation: pairs are affine curve
    /// points, longer lists are homogeneous coordinates.
    pub fn tuple(&self, e: Option<&WeierstrassCurve>) -> Result<Vec<ProjPoint>, CliError> {
        let ps = self.points.as_ref().ok_or_else(|| CliError::new("missing_input", "a list of points is required"))?;
        ps.iter()
            .map(|p| match (p.len(), e) {
                (2, Some(e)) => Ok(curve_point(e, p)?.projective()),
                _ => {
                    let refs: Vec<&str> = p.iter().map(String::as_str).collect();
                    Ok(ProjPoint::parse(&refs)?)
                }
            })
            .collect()
    }

    pub fn map(&self) -> Result<Option<HomogeneousMap>, CliError> {
        let Some(m) = &self.map else { return Ok(None) };
        let forms: Vec<MPoly> =
            serde_json::from_value(m.clone()).map_err(|e| CliError::new("invalid_input", format!("map: {e}")))?;
        Ok(Some(HomogeneousMap::from_lift(forms)?))
    }

    pub fn target(&self, e: Option<&WeierstrassCurve>) -> Result<Target, CliError> {
        match (self.projective, e) {
            (Some(n), _) => Ok(Target::ProjectiveSpace(n)),
            (None, Some(e)) => Ok(Target::PlaneCubic(e.cubic_form())),
            (None, None) => Err(CliError::new("missing_input", "a target is required: a curve or \"projective\": N")),
        }
    }
}

fn curve_point(e: &WeierstrassCurve, p: &[String]) -> Result<CurvePoint, CliError> {
    match p {
        [o] if o == "O" => Ok(CurvePoint::Infinity),
        [x, y] => Ok(e.point(x.parse::<RationalFunction>()?, y.parse::<RationalFunction>()?)?),
        _ => Err(CliError::new("invalid_input", format!("a curve point is [x, y] or [\"O\"], got {} entries", p.len()))),
    }
}
