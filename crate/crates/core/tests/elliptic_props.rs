mod common;

use common::{curve_through_two_points, general_curve_with_point, random_curve, rf};
use ffht::arith::{q, Q};
use ffht::elliptic::{
    bad_places, canonical_height_dyn, canonical_height_local, faltings_height, torsion_points, CurvePoint,
    WeierstrassCurve,
};
use ffht::funcfield::support;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn group_law_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let (e, p, r) = curve_through_two_points(&mut rng);
        let s = e.double(&p);
        assert!(e.add(&p, &e.neg(&p)).is_infinity());
        assert_eq!(e.add(&p, &CurvePoint::Infinity), p);
        assert_eq!(e.add(&p, &r), e.add(&r, &p));
        assert_eq!(e.add(&e.add(&p, &r), &s), e.add(&p, &e.add(&r, &s)));
        assert_eq!(e.mul(3, &p), e.add(&s, &p));
        assert_eq!(e.sub(&e.mul(3, &p), &p), s);
        for x in [&p, &r, &s, &e.add(&p, &r)] {
            assert!(e.contains(x));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..6 {
        let (e, p) = general_curve_with_point(&mut rng);
        let (a, b) = (e.mul(2, &p), e.mul(-3, &p));
        assert_eq!(e.add(&a, &b), e.neg(&p));
        assert!(e.contains(&b));
    }
}

#[test]
fn canonical_height_is_quadratic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..6 {
        let (e, p, r) = curve_through_two_points(&mut rng);
        let h = |x: &CurvePoint| canonical_height_local(&e, x).unwrap();
        let (hp, hr) = (h(&p), h(&r));
        assert!(hp >= Q::zero() && hr >= Q::zero());
        assert_eq!(h(&e.double(&p)), &hp * q(4));
        assert_eq!(h(&e.neg(&p)), hp);
        // parallelogram law
        assert_eq!(h(&e.add(&p, &r)) + h(&e.sub(&p, &r)), (&hp + &hr) * q(2));
    }
}

#[test]
fn dynamical_intervals_contain_the_exact_height() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..4 {
        let (e, p, r) = curve_through_two_points(&mut rng);
        for x in [p.clone(), r, e.add(&p, &e.neg(&e.double(&p)))] {
            let exact = canonical_height_local(&e, &x).unwrap();
            for k in [2usize, 4] {
                let dynamic = canonical_height_dyn(&e, &x, k).unwrap();
                assert!(dynamic.interval().contains(&exact), "k = {k}: {exact} vs {:?}", dynamic);
            }
        }
    }
}

#[test]
fn torsion_points_have_height_zero() {
    let e = WeierstrassCurve::kubert5();
    let p = e.point(rf("0"), rf("0")).unwrap();
    for n in 1..5 {
        assert_eq!(canonical_height_local(&e, &e.mul(n, &p)).unwrap(), Q::zero());
    }
    assert_eq!(e.order(&p, 12), Some(5));
    let l = WeierstrassCurve::legendre();
    for t in torsion_points(&l, 4).unwrap().points {
        if !t.point.is_infinity() {
            assert_eq!(canonical_height_local(&l, &t.point).unwrap(), Q::zero());
        }
    }
}

#[test]
fn discriminant_degree_identity() {
    // a rational function has as many zeros as poles, counted with degree
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..20 {
        let e = random_curve(&mut rng);
        let total: i64 = support(std::slice::from_ref(&e.disc))
            .unwrap()
            .iter()
            .map(|v| v.local_degree() as i64 * v.ord(&e.disc).unwrap())
            .sum();
        assert_eq!(total, 0);
        for r in bad_places(&e) {
            assert!(r.ord_delta_min > 0, "{}", r.place);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn faltings_height_ignores_base_translation(seed in 0u64..500, c in -5i64..=5) {
        let e = random_curve(&mut ChaCha8Rng::seed_from_u64(seed));
        let shifted = e.shift_base(&q(c)).unwrap();
        let (a, b) = (faltings_height(&e).unwrap(), faltings_height(&shifted).unwrap());
        prop_assert_eq!(a.stable_height, b.stable_height);
        prop_assert_eq!(bad_places(&e).len(), bad_places(&shifted).len());
    }
}
