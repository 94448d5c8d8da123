mod common;

use common::{rf, K};
use ffht::arith::{q, Q};
use ffht::dynsys::HomogeneousMap;
use ffht::elliptic::{duplication_extension, WeierstrassCurve};
use ffht::funcfield::log_abs;
use ffht::goodbasis::{extract_basis, good_basis, spanning_family, GreenBasis, Target};
use ffht::green::{evaluation_determinant, global_green_identity, green_value, sample_projective_tuples};
use ffht::mpoly::MPoly;
use ffht::projheights::ProjPoint;
use ffht::Place;
use num_traits::{One, Zero};

fn p1_map() -> HomogeneousMap {
    let f0 = MPoly::from_terms(2, [(vec![2, 0], rf("1")), (vec![0, 2], rf("t"))]).unwrap();
    let f1 = MPoly::from_terms(2, [(vec![1, 1], rf("t+1")), (vec![0, 2], rf("1"))]).unwrap();
    HomogeneousMap::new(vec![f0, f1]).unwrap()
}

fn pt(cs: &[&str]) -> ProjPoint {
    ProjPoint::parse(cs).unwrap()
}

/// The same degree-n sections selected from the family in reverse order.
fn reversed_basis(f: &HomogeneousMap, n: u32, target: &Target) -> GreenBasis {
    let mut fam = spanning_family(f, n).unwrap();
    fam.members.reverse();
    extract_basis(&fam, target).unwrap()
}

#[test]
fn extraction_is_deterministic_and_cubic_counts_are_3n() {
    let e = WeierstrassCurve::legendre();
    let target = Target::PlaneCubic(e.cubic_form());
    let f = HomogeneousMap::new((0..3).map(|i| MPoly::var(3, i).pow(2)).collect()).unwrap();
    for n in 1..=8 {
        let b = good_basis(&f, n, &target).unwrap();
        assert_eq!(b.sections.len(), 3 * n as usize);
        assert_eq!(good_basis(&f, n, &target).unwrap(), b);
    }
}

#[test]
fn change_of_basis_determinant_is_a_nonzero_constant() {
    let f = p1_map();
    let target = Target::ProjectiveSpace(1);
    for n in [2u32, 4, 5] {
        let b = good_basis(&f, n, &target).unwrap();
        let b2 = reversed_basis(&f, n, &target);
        let c = target.section_count(n);
        let tuples = sample_projective_tuples(&f, &Place::at(0), c, 6, 40 + n as u64).unwrap();
        let mut ratio: Option<K> = None;
        for t in tuples {
            let (d1, d2) = (evaluation_determinant(&b, &t), evaluation_determinant(&b2, &t));
            if d1.is_zero() {
                assert!(d2.is_zero());
                continue;
            }
            let r = &d2 * &d1.inv().unwrap();
            assert!(!r.is_zero());
            match &ratio {
                None => ratio = Some(r),
                Some(r0) => assert_eq!(&r, r0, "n = {n}"),
            }
        }
        assert!(ratio.is_some());
    }
}

#[test]
fn basis_change_shifts_green_by_a_constant() {
    let f = p1_map();
    let target = Target::ProjectiveSpace(1);
    let n = 4u32;
    let (b, b2) = (good_basis(&f, n, &target).unwrap(), reversed_basis(&f, n, &target));
    let c = target.section_count(n);
    for v in [Place::at(0), Place::at(-1), Place::Infinity] {
        let mut shift: Option<Q> = None;
        for t in sample_projective_tuples(&f, &v, c, 4, 7).unwrap() {
            let (g1, g2) = (green_value(&b, &f, &t, &v, 6).unwrap(), green_value(&b2, &f, &t, &v, 6).unwrap());
            let (Some(i1), Some(i2)) = (g1.value, g2.value) else { continue };
            let s = &i2.lo - &i1.lo;
            assert_eq!(&i2.hi - &i1.hi, s);
            let m = &evaluation_determinant(&b2, &t) * &evaluation_determinant(&b, &t).inv().unwrap();
            assert_eq!(s, -log_abs(&m, &v).unwrap() / q(n as i64 * c as i64));
            match &shift {
                None => shift = Some(s),
                Some(s0) => assert_eq!(&s, s0),
            }
        }
    }
}

#[test]
fn rescaled_point_lifts_change_nothing() {
    let f = p1_map();
    let target = Target::ProjectiveSpace(1);
    let b = good_basis(&f, 2, &target).unwrap();
    let t = vec![pt(&["1", "t"]), pt(&["t-1", "2"]), pt(&["3", "1"])];
    let scaled: Vec<ProjPoint> = t.iter().zip(["t^2", "1/(t+3)", "5"]).map(|(p, l)| p.scale(&rf(l)).unwrap()).collect();
    for v in [Place::at(0), Place::at(1), Place::Infinity] {
        assert_eq!(green_value(&b, &f, &t, &v, 6).unwrap(), green_value(&b, &f, &scaled, &v, 6).unwrap());
    }
}

#[test]
fn rescaled_map_changes_nothing_in_the_limit() {
    let f = p1_map();
    let u = rf("t-3");
    let g = f.scaled(&u).unwrap();
    let target = Target::ProjectiveSpace(1);
    let b = good_basis(&f, 2, &target).unwrap();
    let t = vec![pt(&["1", "t"]), pt(&["t-1", "2"]), pt(&["3", "1"])];
    let k = 6usize;
    let d = q(f.degree() as i64);
    for v in [Place::at(3), Place::at(0), Place::Infinity] {
        let (gf, gg) = (green_value(&b, &f, &t, &v, k).unwrap(), green_value(&b, &g, &t, &v, k).unwrap());
        let lu = log_abs(&u, &v).unwrap();
        // r moves by -log|u|/(d-1); each escape rate moves by log|u|/(d-1) in the limit
        assert_eq!(&gg.r_f - &gf.r_f, -&lu / (&d - Q::one()));
        let dk = (0..k).fold(Q::one(), |a, _| a * &d);
        let per_point = &lu * (Q::one() - Q::one() / &dk) / (&d - Q::one());
        assert_eq!(gg.escape_sum.midpoint() - gf.escape_sum.midpoint(), per_point * q(t.len() as i64));
        assert!(gf.value.unwrap().overlaps(&gg.value.unwrap()));
    }
}

#[test]
fn infinite_exactly_when_the_determinant_vanishes() {
    let f = HomogeneousMap::new((0..3).map(|i| MPoly::var(3, i).pow(2)).collect()).unwrap();
    let target = Target::ProjectiveSpace(2);
    let b = good_basis(&f, 1, &target).unwrap();
    let v = Place::at(0);
    // collinear: the line X - Y vanishes on all three
    let collinear = vec![pt(&["1", "1", "0"]), pt(&["t", "t", "1"]), pt(&["2", "2", "t"])];
    assert!(evaluation_determinant(&b, &collinear).is_zero());
    assert_eq!(green_value(&b, &f, &collinear, &v, 4).unwrap().value, None);
    let general = vec![pt(&["1", "0", "0"]), pt(&["0", "1", "0"]), pt(&["1", "1", "t"])];
    assert!(!evaluation_determinant(&b, &general).is_zero());
    assert!(green_value(&b, &f, &general, &v, 4).unwrap().value.is_some());
    let repeated = vec![general[0].clone(), general[0].clone(), general[1].clone()];
    assert_eq!(green_value(&b, &f, &repeated, &v, 4).unwrap().value, None);
}

#[test]
fn global_identity_on_the_projective_line() {
    let f = p1_map();
    let target = Target::ProjectiveSpace(1);
    for n in 1..=4u32 {
        let b = good_basis(&f, n, &target).unwrap();
        let c = target.section_count(n);
        let t = sample_projective_tuples(&f, &Place::Infinity, c, 8, 90 + n as u64)
            .unwrap()
            .into_iter()
            .find(|t| !evaluation_determinant(&b, t).is_zero())
            .unwrap();
        let r = global_green_identity(&b, &f, &t, 10).unwrap();
        assert!(r.applicable);
        assert_eq!(r.det_place_sum, Some(Q::zero()));
        assert!(r.r_sum.is_zero());
        assert!(r.overlap, "n = {n}");
    }
}

#[test]
fn duplication_basis_on_the_cubic_gives_finite_green_values() {
    let e = WeierstrassCurve::short(rf("-1"), rf("t^2")).unwrap();
    let f = duplication_extension(&e).unwrap();
    let target = Target::PlaneCubic(e.cubic_form());
    let b = good_basis(&f, 2, &target).unwrap();
    assert_eq!(b.sections.len(), 6);
    let base: Vec<_> = ["0", "1", "-1"].iter().map(|x| e.point(rf(x), rf("t")).unwrap()).collect();
    let mut pool = Vec::new();
    for p in &base {
        pool.extend([p.clone(), e.neg(p), e.double(p)]);
    }
    let t: Vec<ProjPoint> = pool.iter().take(6).map(|p| p.projective()).collect();
    assert!(t.iter().all(|p| target.contains(p)));
    let t = if evaluation_determinant(&b, &t).is_zero() {
        pool.iter().skip(3).take(6).map(|p| p.projective()).collect()
    } else {
        t
    };
    assert!(!evaluation_determinant(&b, &t).is_zero());
    for v in [Place::at(0), Place::Infinity] {
        assert!(green_value(&b, &f, &t, &v, 6).unwrap().value.is_some());
    }
    let off = vec![pt(&["1", "1", "1"]); 6];
    assert_eq!(green_value(&b, &f, &off, &Place::at(0), 6), Err(ffht::Error::PointOffTarget));
}
