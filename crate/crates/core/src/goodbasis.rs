//! Good bases of degree-n sections: products of iterate coordinates with a
//! small residual monomial, and greedy extraction of a basis on P^N or on a
//! plane cubic.

use crate::arith::linalg::Echelon;
use crate::dynsys::HomogeneousMap;
use crate::error::{Error, Result};
use crate::mpoly::{monomials, MPoly, Monomial};
use serde::Serialize;
use std::collections::HashMap;

/// One factor (F_i^(l))^j of a section.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub i: usize,
    pub l: u32,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub monomial: Monomial,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub descriptor: Descriptor,
    pub form: MPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionFamily {
    pub n: u32,
    pub members: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "data")]
pub enum Target {
    ProjectiveSpace(usize),
    /// a plane cubic given by its homogeneous equation in (X, Y, Z)
    PlaneCubic(MPoly),
}

impl Target {
    pub fn nvars(&self) -> usize {
        match self {
            Target::ProjectiveSpace(n) => n + 1,
            Target::PlaneCubic(_) => 3,
        }
    }

    /// c(n), the dimension of the degree-n sections.
    pub fn section_count(&self, n: u32) -> usize {
        match self {
            Target::ProjectiveSpace(dim) => crate::constants::binom((n as usize + dim) as i64, *dim as u64)
                .try_into()
                .unwrap(),
            Target::PlaneCubic(_) => 3 * n as usize,
        }
    }

    /// Normal form of a form modulo the target's ideal.
    pub fn normal_form(&self, f: &MPoly) -> MPoly {
        match self {
            Target::ProjectiveSpace(_) => f.clone(),
            Target::PlaneCubic(c) => f.reduce_by(c),
        }
    }

    pub fn contains(&self, p: &crate::projheights::ProjPoint) -> bool {
        match self {
            Target::ProjectiveSpace(n) => p.dim() == *n,
            Target::PlaneCubic(c) => p.dim() == 2 && c.eval(p.coords()).is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenBasis {
    pub n: u32,
    pub sections: Vec<Section>,
    pub target: Target,
}

impl GreenBasis {
    pub fn forms(&self) -> Vec<&MPoly> {
        self.sections.iter().map(|s| &s.form).collect()
    }
}

fn ceil_log(d: u32, n: u32) -> u32 {
    let mut l = 0;
    let mut p = 1u64;
    while p < n as u64 {
        p *= d as u64;
        l += 1;
    }
    l
}

fn monomial_form(m: &Monomial) -> MPoly {
    MPoly::monomial(m.clone(), crate::funcfield::RationalFunction::one())
}

/// The spanning family of degree-n sections attached to F.
pub fn spanning_family(f: &HomogeneousMap, n: u32) -> Result<SectionFamily> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let nv = f.dim() + 1;
    let d = f.degree();
    let small = d * nv as u32;
    if n < small {
        let members = monomials(nv, n)
            .into_iter()
            .map(|m| Section { form: monomial_form(&m), descriptor: Descriptor { monomial: m, factors: vec![] } })
            .collect();
        return Ok(SectionFamily { n, members });
    }
    let depth = ceil_log(d, n);
    // one slot per (i, l); each slot takes an exponent j in 0..d
    let slots: Vec<(usize, u32)> = (1..=depth).rev().flat_map(|l| (0..nv).map(move |i| (i, l))).collect();
    let mut iterates: HashMap<u32, Vec<MPoly>> = HashMap::new();
    for l in 1..=depth {
        iterates.insert(l, f.iterate_forms(l)?);
    }
    let mut choices: Vec<Vec<Factor>> = Vec::new();
    let mut stack: Vec<Factor> = Vec::new();
    fn rec(
        slots: &[(usize, u32)],
        k: usize,
        d: u32,
        budget: u64,
        stack: &mut Vec<Factor>,
        out: &mut Vec<Vec<Factor>>,
    ) {
        if k == slots.len() {
            out.push(stack.clone());
            return;
        }
        let (i, l) = slots[k];
        let unit = (d as u64).pow(l);
        for j in (0..d).rev() {
            let deg = j as u64 * unit;
            if deg > budget {
                continue;
            }
            if j > 0 {
                stack.push(Factor { i, l, j });
            }
            rec(slots, k + 1, d, budget - deg, stack, out);
            if j > 0 {
                stack.pop();
            }
        }
    }
    rec(&slots, 0, d, n as u64, &mut stack, &mut choices);
    let mut members = Vec::new();
    for factors in choices {
        let fd: u32 = factors.iter().map(|x| x.j * d.pow(x.l)).sum();
        let rest = n - fd;
        if rest >= small {
            continue;
        }
        let mut prod = MPoly::one(nv);
        for x in &factors {
            prod = &prod * &iterates[&x.l][x.i].pow(x.j);
        }
        for m in monomials(nv, rest) {
            let form = prod.mul_monomial(&m);
            members.push(Section { form, descriptor: Descriptor { monomial: m, factors: factors.clone() } });
        }
        crate::budget::check(members.len(), "section family")?;
    }
    Ok(SectionFamily { n, members })
}

/// First-independent greedy selection of c(n) sections, independence taken
/// modulo the target's ideal.
pub fn extract_basis(fam: &SectionFamily, target: &Target) -> Result<GreenBasis> {
    let nv = target.nvars();
    let want = target.section_count(fam.n);
    let mons = monomials(nv, fam.n);
    let mut ech = Echelon::new();
    let mut sections = Vec::new();
    for s in &fam.members {
        if s.form.nvars() != nv {
            return Err(Error::InvalidInput("family and target live in different spaces".into()));
        }
        let nf = target.normal_form(&s.form);
        if ech.insert(&nf.coefficient_vector(&mons)) {
            sections.push(s.clone());
            if sections.len() == want {
                return Ok(GreenBasis { n: fam.n, sections, target: target.clone() });
            }
        }
    }
    Err(Error::SpanningFailure(format!(
        "rank {} < {want} in degree {}",
        sections.len(),
        fam.n
    )))
}

/// Convenience: family and basis in one step.
pub fn good_basis(f: &HomogeneousMap, n: u32, target: &Target) -> Result<GreenBasis> {
    extract_basis(&spanning_family(f, n)?, target)
}
