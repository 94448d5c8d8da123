mod common;

use common::K;
use ffht::arith::{Poly, Q};
use ffht::funcfield::{log_abs, product_formula_check, support};
use ffht::projheights::{local_height_subscheme, weil_height, AffineChartSubscheme, ProjPoint};
use ffht::mpoly::MPoly;
use ffht::Place;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_poly(max_deg: usize, c: i64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-c..=c, 1..=max_deg + 1).prop_map(|cs| Poly::from_ints(&cs))
}

fn arb_rf() -> impl Strategy<Value = K> {
    (arb_poly(4, 20), arb_poly(3, 20))
        .prop_filter("nonzero", |(n, d)| !n.is_zero() && !d.is_zero())
        .prop_map(|(n, d)| K::new(n, d).unwrap())
}

fn places() -> Vec<Place> {
    vec![
        Place::at(0),
        Place::at(1),
        Place::at(-2),
        Place::parse("t^2+1").unwrap(),
        Place::parse("t^2-2").unwrap(),
        Place::Infinity,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ord_is_a_valuation(f in arb_rf(), g in arb_rf()) {
        for v in places() {
            let (a, b) = (v.ord(&f).unwrap(), v.ord(&g).unwrap());
            prop_assert_eq!(v.ord(&(&f * &g)), Some(a + b));
            let s = &f + &g;
            if let Some(o) = v.ord(&s) {
                prop_assert!(o >= a.min(b));
                if a != b {
                    prop_assert_eq!(o, a.min(b));
                }
            }
        }
    }

    #[test]
    fn parse_print_parse(f in arb_rf()) {
        let s = f.to_string();
        let g: K = s.parse().unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(g.to_string(), s);
    }

    #[test]
    fn product_formula_on_random_functions(f in arb_rf()) {
        prop_assert!(product_formula_check(&f).unwrap().is_zero());
    }

    #[test]
    fn weil_height_ignores_scaling_and_order(a in arb_rf(), b in arb_rf(), c in arb_rf(), l in arb_rf()) {
        let p = ProjPoint::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let h = weil_height(&p);
        prop_assert_eq!(weil_height(&p.scale(&l).unwrap()), h.clone());
        let swapped = ProjPoint::new(vec![c, a, b]).unwrap();
        prop_assert_eq!(weil_height(&swapped), h.clone());
        prop_assert!(h >= Q::zero());
    }
}

#[test]
fn product_formula_on_factored_functions() {
    // products of random linear and quadratic factors, coefficients up to 10^3
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let factor = |rng: &mut ChaCha8Rng| -> K {
        let deg = rng.gen_range(1..=2);
        let cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-1000..=1000)).collect();
        let p = Poly::from_ints(&cs);
        if p.is_zero() {
            K::one()
        } else {
            K::from_poly(p)
        }
    };
    for _ in 0..200 {
        let mut f = K::from_int(rng.gen_range(1..=1000));
        for _ in 0..rng.gen_range(1..=4) {
            f = &f * &factor(&mut rng);
        }
        for _ in 0..rng.gen_range(0..=3) {
            f = &f * &factor(&mut rng).inv().unwrap();
        }
        assert!(product_formula_check(&f).unwrap().is_zero(), "{f}");
        let total: Q = support(std::slice::from_ref(&f))
            .unwrap()
            .iter()
            .map(|v| log_abs(&f, v).unwrap())
            .sum();
        assert!(total.is_zero());
    }
}

#[test]
fn subscheme_height_is_nonnegative_and_vanishes_off_y() {
    // Y = {x = y = 0} in the affine plane
    let y = AffineChartSubscheme::new(vec![MPoly::var(2, 0), MPoly::var(2, 1)]).unwrap();
    let v = Place::at(0);
    let rf = |s: &str| -> K { s.parse().unwrap() };
    // unit coordinates reducing away from the origin
    for (a, b) in [("1", "t"), ("t+1", "2"), ("3", "t^2"), ("1/(t+1)", "t")] {
        assert_eq!(local_height_subscheme(&y, &[rf(a), rf(b)], &v).unwrap(), Some(Q::zero()));
    }
    // close to the origin: positive
    let h = local_height_subscheme(&y, &[rf("t^2"), rf("t^3")], &v).unwrap().unwrap();
    assert_eq!(h, Q::from_integer(2.into()));
    assert_eq!(local_height_subscheme(&y, &[rf("0"), rf("0")], &v).unwrap(), None);
    assert!(local_height_subscheme(&y, &[rf("1/t"), rf("1")], &v).is_err());
}
