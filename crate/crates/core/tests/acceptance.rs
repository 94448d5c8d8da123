//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use common::*;
use ffht::arith::{q, Q};
use ffht::constants::{
    deligne_bound, four_square, gotzmann_number, regularity_bound, zarhin_matrix, HilbertPolynomial,
};
use ffht::dynsys::HomogeneousMap;
use ffht::elliptic::duplication::canonical_height_on;
use ffht::elliptic::*;
use ffht::funcfield::{log_abs, product_formula_check};
use ffht::goodbasis::{good_basis, Target};
use ffht::green::{evaluation_determinant, global_green_identity, green_value, sample_projective_tuples};
use ffht::interval::Interval;
use ffht::mpoly::MPoly;
use ffht::projheights::ProjPoint;
use ffht::Place;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

fn product_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let f = rand_rf(&mut rng);
        let s = product_formula_check(&f).map_err(|e| e.to_string())?;
        ensure(s.is_zero(), format!("sample {i}: {f} sums to {s}"))?;
    }
    Ok("200 random f, every sum exactly 0".into())
}

fn legendre_package() -> Outcome {
    let e = WeierstrassCurve::legendre();
    ensure(e.disc == rf("16*t^2*(t-1)^2"), "discriminant")?;
    ensure(e.j == rf("256*(t^2-t+1)^3/(t^2*(t-1)^2)"), "j-invariant")?;
    let bad = bad_places(&e);
    let places: Vec<Place> = bad.iter().map(|r| r.place.clone()).collect();
    ensure(places == vec![Place::at(0), Place::at(1), Place::Infinity], format!("bad places {places:?}"))?;
    for r in &bad[..2] {
        ensure(r.kind == ReductionKind::Multiplicative(2), format!("{} is {:?}", r.place, r.kind))?;
    }
    // infinity is I2*: additive on every model, multiplicative of index 2 after a quadratic base change
    let inf = &bad[2];
    ensure(inf.kind == ReductionKind::Additive, "infinity should be additive (I2*)")?;
    for r in &bad {
        ensure(
            r.potential_type == PotentialType::Multiplicative && r.ord_j == -2,
            format!("{} potential type", r.place),
        )?;
    }
    let h = faltings_height(&e).map_err(|e| e.to_string())?;
    ensure(h.stable_height == half(), "stable Faltings height")?;
    let a = arakelov_check(&e).map_err(|e| e.to_string())?;
    ensure(a.holds && a.equality && a.bound == Some(half()), "Arakelov inequality")?;
    Ok("h = 1/2 <= 1/2; (t),(t-1) Multiplicative(2); infinity I2* = additive, potentially Multiplicative(2)".into())
}

fn torsion() -> Outcome {
    let e = WeierstrassCurve::legendre();
    let r = torsion_points(&e, 12).map_err(|e| e.to_string())?;
    ensure(r.group_order() == 4 && r.max_point_order() == 2, format!("Legendre torsion {:?}", r.points))?;
    let k = WeierstrassCurve::kubert5();
    let p = k.point(rf("0"), rf("0")).map_err(|e| e.to_string())?;
    ensure(k.order(&p, 12) == Some(5) && k.mul(5, &p).is_infinity(), "Kubert point order")?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 1;
    let mut partial = 0;
    let mut nontrivial = 0;
    for _ in 0..100 {
        let c = random_curve(&mut rng);
        // 13 is searched too, so an order above 12 would be seen
        let t = torsion_points(&c, 13).map_err(|e| e.to_string())?;
        worst = worst.max(t.max_point_order());
        partial += t.partial as usize;
        nontrivial += (t.group_order() > 1) as usize;
        ensure(t.max_point_order() <= 12, format!("order {} on {c}", t.max_point_order()))?;
    }
    Ok(format!(
        "Legendre Z/2 x Z/2, Kubert order 5; 100 curves: max order {worst}, {nontrivial} with torsion, {partial} flagged partial"
    ))
}

struct Sample {
    e: WeierstrassCurve,
    p: CurvePoint,
    q: CurvePoint,
    f: HomogeneousMap,
}

fn height_sample() -> &'static Vec<Sample> {
    static S: OnceLock<Vec<Sample>> = OnceLock::new();
    S.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        (0..20)
            .map(|_| {
                let (e, p, q) = curve_through_two_points(&mut rng);
                let f = duplication_extension(&e).expect("extension");
                Sample { e, p, q, f }
            })
            .collect()
    })
}

const K_STEPS: usize = 12;

fn dual_oracle() -> Outcome {
    let bound = Q::new(1.into(), 1000.into());
    let mut widest = Q::zero();
    for (i, s) in height_sample().iter().enumerate() {
        let exact = canonical_height_local(&s.e, &s.p).map_err(|e| e.to_string())?;
        let iv = canonical_height_on(&s.f, &s.p, K_STEPS).map_err(|e| e.to_string())?.interval();
        ensure(iv.contains(&exact), format!("pair {i}: {exact} not in [{}, {}]", iv.lo, iv.hi))?;
        ensure(iv.width() <= bound, format!("pair {i}: width {} > 1/1000", iv.width()))?;
        widest = widest.max(iv.width());
    }
    Ok(format!("20 pairs contained at k = 12, widest interval {:.3e}", to_f64(&widest)))
}

fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn functional_equation() -> Outcome {
    let mut worst = 0f64;
    for (i, s) in height_sample().iter().enumerate() {
        let h = |p: &CurvePoint| -> Result<Interval, String> {
            if p.is_infinity() {
                return Ok(Interval::zero());
            }
            Ok(canonical_height_on(&s.f, p, K_STEPS).map_err(|e| e.to_string())?.interval())
        };
        let e = &s.e;
        let hp = h(&s.p)?;
        let h2p = h(&e.double(&s.p))?;
        ensure(h2p.overlaps(&hp.scale(&q(4))), format!("pair {i}: h(2P) vs 4 h(P)"))?;
        let hq = h(&s.q)?;
        let hs = h(&e.add(&s.p, &s.q))?;
        let hd = h(&e.sub(&s.p, &s.q))?;
        let resid = &(&(&hs + &hd) - &hp.scale(&q(2))) - &hq.scale(&q(2));
        ensure(resid.contains(&Q::zero()), format!("pair {i}: parallelogram residual [{}, {}]", resid.lo, resid.hi))?;
        worst = worst.max(to_f64(&resid.width()));
        // the exact local route satisfies both identities on the nose
        let l = |p: &CurvePoint| if p.is_infinity() { Ok(Q::zero()) } else { canonical_height_local(e, p) };
        let (lp, lq) = (l(&s.p).unwrap(), l(&s.q).unwrap());
        ensure(l(&e.double(&s.p)).unwrap() == q(4) * &lp, "exact doubling")?;
        ensure(
            l(&e.add(&s.p, &s.q)).unwrap() + l(&e.sub(&s.p, &s.q)).unwrap() == q(2) * (lp + lq),
            "exact parallelogram law",
        )?;
    }
    Ok(format!("20 pairs, parallelogram residual interval width <= {worst:.3e}"))
}

fn cubic_point_pool(e: &WeierstrassCurve) -> Vec<CurvePoint> {
    let base: Vec<CurvePoint> =
        [("0", "t"), ("1", "t"), ("-1", "t")].iter().map(|(x, y)| e.point(rf(x), rf(y)).unwrap()).collect();
    let mut pool: Vec<CurvePoint> = Vec::new();
    let push = |p: CurvePoint, pool: &mut Vec<CurvePoint>| {
        if !p.is_infinity() && !pool.contains(&p) {
            pool.push(p);
        }
    };
    // the base points are collinear, so doubles are needed to get past 12 points
    for p in &base {
        push(p.clone(), &mut pool);
        push(e.neg(p), &mut pool);
        push(e.double(p), &mut pool);
        push(e.neg(&e.double(p)), &mut pool);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            push(e.add(&base[i], &base[j]), &mut pool);
            push(e.sub(&base[i], &base[j]), &mut pool);
            push(e.neg(&e.add(&base[i], &base[j])), &mut pool);
            push(e.neg(&e.sub(&base[i], &base[j])), &mut pool);
        }
    }
    pool
}

fn green_identities() -> Outcome {
    let e = WeierstrassCurve::short(rf("-1"), rf("t^2")).unwrap();
    let f = duplication_extension(&e).map_err(|e| e.to_string())?;
    let target = Target::PlaneCubic(e.cubic_form());
    let pool: Vec<ProjPoint> = cubic_point_pool(&e).iter().map(|p| p.projective()).collect();
    let mut lines = Vec::new();
    for n in 1..=4u32 {
        let basis = good_basis(&f, n, &target).map_err(|e| e.to_string())?;
        let c = 3 * n as usize;
        ensure(basis.sections.len() == c, "c(n) = 3n")?;
        // seeded subsets of the pool until the determinant is nonzero; it
        // vanishes exactly when the chosen points sum to O
        let mut rng = ChaCha8Rng::seed_from_u64(6 + n as u64);
        let tuple = (0..200)
            .map(|_| pool.choose_multiple(&mut rng, c).cloned().collect::<Vec<_>>())
            .find(|t| !evaluation_determinant(&basis, t).is_zero())
            .ok_or(format!("n = {n}: no tuple with nonzero determinant"))?;
        let r = global_green_identity(&basis, &f, &tuple, K_STEPS).map_err(|e| e.to_string())?;
        ensure(r.applicable, "determinant vanished")?;
        ensure(r.det_place_sum == Some(Q::zero()), format!("n = {n}: sum log|det| = {:?}", r.det_place_sum))?;
        ensure(r.r_sum.is_zero(), format!("n = {n}: sum r_v = {}", r.r_sum))?;
        ensure(r.overlap, format!("n = {n}: lhs {:?} misses rhs {:?}", r.lhs, r.rhs))?;
        lines.push(format!("n={n}: {} places", r.per_place.len()));
    }
    Ok(lines.join(", "))
}

fn good_reduction_zero() -> Outcome {
    let mut checked = 0;
    let mut maps: Vec<(HomogeneousMap, Target)> = Vec::new();
    let p1 = |a: &str, b: &str, c: &str| {
        MPoly::from_terms(2, [(vec![2, 0], rf(a)), (vec![1, 1], rf(b)), (vec![0, 2], rf(c))]).unwrap()
    };
    maps.push((HomogeneousMap::new(vec![p1("1", "0", "t"), p1("0", "1", "0")]).unwrap(), Target::ProjectiveSpace(1)));
    maps.push((HomogeneousMap::new(vec![p1("1", "t", "0"), p1("t+1", "0", "1")]).unwrap(), Target::ProjectiveSpace(1)));
    let sq = |i: usize| MPoly::var(3, i).pow(2);
    maps.push((
        HomogeneousMap::new(vec![&sq(0) + &sq(1).scale(&rf("t")), sq(1), &sq(2) + &sq(0)]).unwrap(),
        Target::ProjectiveSpace(2),
    ));
    for (mi, (f, target)) in maps.iter().enumerate() {
        for n in 1..=3u32 {
            let basis = good_basis(f, n, target).map_err(|e| e.to_string())?;
            let c = target.section_count(n);
            for v in [Place::at(2), Place::at(3), Place::at(-5), Place::parse("t^2+1").unwrap()] {
                let unit = |x: &ffht::RationalFunction| v.ord(x) == Some(0);
                let good = unit(f.resultant()) && f.forms().iter().flat_map(|g| g.coeffs()).all(unit);
                if !good {
                    continue;
                }
                for t in sample_projective_tuples(f, &v, c, 4, 11 + n as u64).map_err(|e| e.to_string())? {
                    let det = evaluation_determinant(&basis, &t);
                    if det.is_zero() || log_abs(&det, &v).unwrap() != Q::zero() {
                        continue;
                    }
                    let g = green_value(&basis, f, &t, &v, K_STEPS).map_err(|e| e.to_string())?;
                    ensure(
                        g.value == Some(Interval::zero()),
                        format!("map {mi}, n = {n}, {v}: value {:?}", g.value),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked >= 10, format!("only {checked} qualifying tuples"))?;
    Ok(format!("{checked} unit-determinant tuples at good places, all exactly 0"))
}

fn hindry_silverman() -> Outcome {
    let e = WeierstrassCurve::legendre();
    let mut out = Vec::new();
    for (v, x) in [(Place::at(0), "1"), (Place::at(1), "0")] {
        let pts = [CurvePoint::Infinity, e.point(rf(x), rf("0")).unwrap()];
        let r = hindry_silverman_check(&e, &pts, &v).map_err(|e| e.to_string())?;
        ensure(r.pass && r.average >= r.bound, format!("{v}: {} < {}", r.average, r.bound))?;
        out.push(format!("{v}: {} >= {}", ffht::arith::fmt_q(&r.average), ffht::arith::fmt_q(&r.bound)));
    }
    Ok(out.join("; "))
}

fn duplication() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10 {
        let (e, p) = general_curve_with_point(&mut rng);
        let f = duplication_extension(&e).map_err(|e| e.to_string())?;
        ensure(!f.resultant().is_zero() && f.degree() == 4, format!("curve {i}: resultant"))?;
        let mut pts: Vec<CurvePoint> = Vec::new();
        for m in 1..=5i64 {
            pts.push(e.mul(m, &p));
            pts.push(e.mul(-m, &p));
        }
        let _ = rng.gen::<u8>();
        for pt in pts {
            let image = f.apply_point(&pt.projective()).map_err(|e| e.to_string())?;
            ensure(image == e.double(&pt).projective(), format!("curve {i}: F({pt}) != 2P"))?;
        }
    }
    Ok("10 curves x 10 points, F agrees with doubling, resultants nonzero".into())
}

fn constants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let a: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        if a.iter().all(|x| *x == 0) {
            continue;
        }
        ensure(zarhin_matrix(a).is_orthogonal_scaled(), format!("Zarhin {a:?}"))?;
    }
    for s in 1..=60u64 {
        let a = four_square(s);
        ensure(a.iter().map(|x| x * x).sum::<u64>() == s, "four squares")?;
    }
    let g = |s: &str| gotzmann_number(&HilbertPolynomial::parse(s).unwrap()).unwrap();
    ensure(g("1") == 1 && g("2T+1") == 2, "Gotzmann numbers")?;
    let reg: [((u32, u32, u64), u64); 10] = [
        ((2, 1, 2), 2),
        ((3, 1, 2), 4),
        ((3, 2, 2), 16),
        ((4, 2, 3), 729),
        ((2, 3, 2), 16),
        ((5, 1, 3), 81),
        ((3, 3, 2), 256),
        ((2, 2, 5), 25),
        ((4, 1, 10), 1000),
        ((5, 3, 1), 1),
    ];
    for ((n, r, d), want) in reg {
        ensure(regularity_bound(n, r, d).unwrap() == BigInt::from(want), format!("regularity {n},{r},{d}"))?;
    }
    let del: [((u64, u64, u64), Option<(i64, i64)>); 10] = [
        ((1, 0, 3), Some((1, 2))),
        ((1, 0, 4), Some((1, 1))),
        ((2, 0, 4), Some((2, 1))),
        ((1, 1, 0), Some((0, 1))),
        ((1, 0, 1), None),
        ((3, 2, 5), Some((21, 2))),
        ((2, 1, 3), Some((3, 1))),
        ((1, 0, 2), Some((0, 1))),
        ((4, 0, 10), Some((16, 1))),
        ((1, 3, 0), Some((2, 1))),
    ];
    for ((g, gb, s), want) in del {
        let want = want.map(|(a, b)| Q::new(a.into(), b.into()));
        ensure(deligne_bound(g, gb, s) == want, format!("deligne {g},{gb},{s}"))?;
    }
    Ok("Zarhin on 100 tuples, Gotzmann 1 -> 1 and 2T+1 -> 2, 10+10 grid values".into())
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let list: Vec<Criterion> = vec![
        (1, "product formula", product_formula, Some(Duration::from_secs(5))),
        (2, "Legendre package", legendre_package, Some(Duration::from_secs(1))),
        (3, "torsion", torsion, Some(Duration::from_secs(120))),
        (4, "dual-oracle canonical height", dual_oracle, Some(Duration::from_secs(300))),
        (5, "functional equation", functional_equation, None),
        (6, "Green identities", green_identities, Some(Duration::from_secs(120))),
        (7, "good-reduction zero", good_reduction_zero, None),
        (8, "Hindry-Silverman positivity", hindry_silverman, Some(Duration::from_secs(60))),
        (9, "duplication extension", duplication, None),
        (10, "constants", constants, None),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, run, limit) in list {
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let res = match (res, limit) {
            (Ok(m), Some(l)) if took > l => Err(format!("{m}; over the {}s limit", l.as_secs())),
            (r, _) => r,
        };
        match res {
            Ok(m) => println!("criterion {n} ({name}): PASS [{:.2}s] {m}", took.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{:.2}s] {m}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
