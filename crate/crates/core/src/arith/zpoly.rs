//! Integer polynomials: pseudo-remainders, Hensel lifting, and exact
//! factorization over Q (Zassenhaus: factor mod p, lift, recombine).

use super::modp::Fp;
use super::poly::{qi, Poly, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ZPoly = Vec<BigInt>;

pub fn trim(f: &mut ZPoly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

pub fn content(f: &[BigInt]) -> BigInt {
    f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(f: &[BigInt]) -> ZPoly {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.is_empty() {
        return f;
    }
    let mut c = content(&f);
    if f.last().unwrap().is_negative() {
        c = -c;
    }
    f.iter().map(|a| a / &c).collect()
}

pub fn zmul(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    trim(&mut r);
    r
}

fn zsub(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    let n = f.len().max(g.len());
    let z = BigInt::zero();
    let mut r: ZPoly = (0..n)
        .map(|i| f.get(i).unwrap_or(&z) - g.get(i).unwrap_or(&z))
        .collect();
    trim(&mut r);
    r
}

/// Pseudo-remainder of a by b (b nonzero).
pub fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &lr * bi;
        }
        trim(&mut r);
    }
    r
}

/// Exact division over Z; `None` when g does not divide f in Z[x].
pub fn zdiv_exact(f: &[BigInt], g: &[BigInt]) -> Option<ZPoly> {
    let mut r = f.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return r.is_empty().then(Vec::new);
    }
    let lg = g.last().unwrap();
    let mut qv = vec![BigInt::zero(); r.len() - dg];
    for k in (0..qv.len()).rev() {
        let top = &r[k + dg];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        for (i, b) in g.iter().enumerate() {
            r[k + i] -= &c * b;
        }
        qv[k] = c;
    }
    trim(&mut r);
    if !r.is_empty() {
        return None;
    }
    trim(&mut qv);
    Some(qv)
}

fn to_modp(f: &[BigInt], fp: &Fp) -> Vec<u64> {
    let p = BigInt::from(fp.p);
    let mut r: Vec<u64> = f
        .iter()
        .map(|c| c.mod_floor(&p).to_u64().unwrap())
        .collect();
    Fp::trim(&mut r);
    r
}

fn from_modp(f: &[u64]) -> ZPoly {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

fn reduce_mod(f: &[BigInt], m: &BigInt) -> ZPoly {
    let mut r: ZPoly = f.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut r);
    r
}

fn symmetric_mod(f: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1;
    let mut r: ZPoly = f
        .iter()
        .map(|c| {
            let x = c.mod_floor(m);
            if x > half {
                x - m
            } else {
                x
            }
        })
        .collect();
    trim(&mut r);
    r
}

fn norm2_ceil(f: &[BigInt]) -> BigInt {
    let s: BigInt = f.iter().map(|c| c * c).sum();
    s.sqrt() + 1
}

/// Lifts f = g*h (mod p), g monic, to f = g*h (mod p^k).
fn hensel_two(f: &[BigInt], g: &[u64], h: &[u64], fp: &Fp, k: u32) -> (ZPoly, ZPoly) {
    let p = BigInt::from(fp.p);
    let (one, s, t) = fp.poly_xgcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let mut gz = from_modp(g);
    let mut hz = from_modp(h);
    let mut pj = p.clone();
    for _ in 1..k {
        let diff = zsub(f, &zmul(&gz, &hz));
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e = to_modp(&e, fp);
        let et = fp.poly_mul(&e, &t);
        let (qq, b) = fp.poly_divrem(&et, g);
        let a = fp.poly_add(&fp.poly_mul(&e, &s), &fp.poly_mul(&qq, h));
        let bz: ZPoly = from_modp(&b).iter().map(|c| c * &pj).collect();
        let az: ZPoly = from_modp(&a).iter().map(|c| c * &pj).collect();
        gz = add_z(&gz, &bz);
        hz = add_z(&hz, &az);
        pj *= &p;
    }
    (reduce_mod(&gz, &pj), reduce_mod(&hz, &pj))
}

fn add_z(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    let n = f.len().max(g.len());
    let z = BigInt::zero();
    let mut r: ZPoly = (0..n)
        .map(|i| f.get(i).unwrap_or(&z) + g.get(i).unwrap_or(&z))
        .collect();
    trim(&mut r);
    r
}

/// Lifts monic modular factors of f (f = lc * prod, mod p) to mod p^k.
fn hensel_multi(f: &[BigInt], factors: &[Vec<u64>], fp: &Fp, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(fp.p).pow(k);
    if factors.len() == 1 {
        let l = f.last().unwrap().mod_floor(&pk);
        let linv = modinv(&l, &pk);
        return vec![reduce_mod(&f.iter().map(|c| c * &linv).collect::<Vec<_>>(), &pk)];
    }
    let g = &factors[0];
    let lc = to_modp(&[f.last().unwrap().clone()], fp)[0];
    let h = factors[1..]
        .iter()
        .fold(vec![lc], |acc, x| fp.poly_mul(&acc, x));
    let (gl, hl) = hensel_two(f, g, &h, fp, k);
    let mut out = vec![gl];
    out.extend(hensel_multi(&hl, &factors[1..], fp, k));
    out
}

/// Gcd of two nonzero primitive integer polynomials, primitive with positive
/// leading coefficient. Images mod word-size primes are combined by CRT and
/// the candidate is accepted once it divides both inputs.
pub fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let lg = la.gcd(lb);
    let mut best: Option<usize> = None;
    let mut acc: ZPoly = Vec::new();
    let mut m = BigInt::one();
    let mut last: Option<ZPoly> = None;
    for p in super::modp::primes_below(1 << 61) {
        let fp = Fp::new(p);
        let pb = BigInt::from(p);
        if (la % &pb).is_zero() || (lb % &pb).is_zero() {
            continue;
        }
        let g = fp.poly_gcd(&to_modp(a, &fp), &to_modp(b, &fp));
        let e = g.len() - 1;
        if e == 0 {
            return vec![BigInt::one()];
        }
        match best {
            Some(d) if e > d => continue,
            Some(d) if e == d => {}
            _ => {
                best = Some(e);
                acc = Vec::new();
                m = BigInt::one();
                last = None;
            }
        }
        let scale = lg.mod_floor(&pb).to_u64().unwrap();
        let img = fp.poly_scale(&fp.monic(&g), scale);
        if acc.is_empty() {
            acc = from_modp(&img);
            m = pb;
        } else {
            let minv = modinv(&m, &BigInt::from(p));
            acc = acc
                .iter()
                .zip(&img)
                .map(|(r, &c)| {
                    let t = ((BigInt::from(c) - r) * &minv).mod_floor(&BigInt::from(p));
                    r + &m * t
                })
                .collect();
            m *= p;
        }
        let cand = primitive(&symmetric_mod(&acc, &m));
        if last.as_ref() == Some(&cand)
            && zdiv_exact(a, &cand).is_some() && zdiv_exact(b, &cand).is_some() {
                return cand;
            }
        last = Some(cand);
    }
    unreachable!("prime supply exhausted")
}

pub fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn choose_prime(f: &[BigInt]) -> (Fp, Vec<Vec<u64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.last().unwrap();
    let mut best: Option<(Fp, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in super::modp::primes_below(1 << 20) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Fp::new(p);
        let fm = to_modp(f, &fp);
        if !fp.is_squarefree(&fm) {
            continue;
        }
        let fs = fp.factor_squarefree(&fp.monic(&fm), &mut rng);
        if best.as_ref().is_none_or(|b| fs.len() < b.1.len()) {
            best = Some((fp, fs));
        }
        tried += 1;
        if tried >= 4 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    best.expect("no suitable prime")
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible primitive factors of a primitive squarefree f in Z[x] of degree >= 1.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let f = primitive(f);
    let n = f.len() - 1;
    if n == 1 {
        return vec![f];
    }
    let (fp, modf) = choose_prime(&f);
    if modf.len() == 1 {
        return vec![f];
    }
    let bound = norm2_ceil(&f) * (BigInt::one() << n) * f.last().unwrap().abs() * 2;
    let p = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
        k += 1;
    }
    let mut lifted = hensel_multi(&f, &modf, &fp, k);
    let mut rest = f;
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        for sub in subsets(lifted.len(), s) {
            let l = rest.last().unwrap().clone();
            let mut cand = vec![l];
            for &i in &sub {
                cand = reduce_mod(&zmul(&cand, &lifted[i]), &pk);
            }
            let cand = primitive(&symmetric_mod(&cand, &pk));
            if cand.len() < 2 {
                continue;
            }
            let const_ok = if cand[0].is_zero() {
                rest[0].is_zero()
            } else {
                (&rest[0] % &cand[0]).is_zero()
            };
            if !const_ok {
                continue;
            }
            if let Some(qq) = zdiv_exact(&rest, &cand) {
                hit = Some((sub, cand, qq));
                break;
            }
        }
        match hit {
            Some((sub, cand, qq)) => {
                found.push(cand);
                rest = primitive(&qq);
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => s += 1,
        }
    }
    if rest.len() > 1 {
        found.push(rest);
    }
    found
}

/// Monic irreducible factorization over Q with multiplicities, sorted by (degree, coefficients).
pub fn factor_over_q(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        let (_, z) = part.primitive_part();
        for g in factor_squarefree_z(&z) {
            out.push((Poly::from_bigints(&g).monic(), mult));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    out
}

/// Deterministic total order: degree first, then coefficients from the top.
pub fn poly_order(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for i in (0..a.coeffs().len()).rev() {
            let o = a.coeff(i).cmp(&b.coeff(i));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

pub fn is_irreducible(f: &Poly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let fs = factor_over_q(f);
            fs.len() == 1 && fs[0].1 == 1
        }
    }
}

/// Distinct rational roots, ascending.
pub fn rational_roots(f: &Poly) -> Vec<Q> {
    let mut roots = Vec::new();
    if f.is_zero() || f.degree() == Some(0) {
        return roots;
    }
    let mut g = f.clone();
    if let Some(low) = g.low_degree() {
        if low > 0 {
            roots.push(Q::zero());
            g = Poly::from_coeffs(g.coeffs()[low..].to_vec());
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let sq = g.exact_div(&g.gcd(&g.derivative())).unwrap();
    let (_, z) = sq.primitive_part();
    let l = z.last().unwrap().clone();
    let maxc = z.iter().map(|c| c.abs()).max().unwrap();
    let bound = (l.abs() + maxc) * 2 + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7007);
    let prime = super::modp::primes_below(1 << 40)
        .find(|&p| {
            let fp = Fp::new(p);
            !(&l % BigInt::from(p)).is_zero() && fp.is_squarefree(&to_modp(&z, &fp))
        })
        .unwrap();
    let fp = Fp::new(prime);
    let p = BigInt::from(prime);
    let dz: ZPoly = z
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r0 in fp.roots(&to_modp(&z, &fp), &mut rng) {
        // p-adic Newton iteration
        let mut r = BigInt::from(r0);
        let mut m = p.clone();
        while m <= bound {
            m = &m * &m;
            let fr = eval_z(&z, &r).mod_floor(&m);
            let dr = eval_z(&dz, &r).mod_floor(&m);
            r = (&r - fr * modinv(&dr, &m)).mod_floor(&m);
        }
        let c = symmetric_mod(&[&l * &r], &m);
        let c = c.first().cloned().unwrap_or_else(BigInt::zero);
        let cand = Q::new(c, l.clone());
        if sq.eval(&cand).is_zero() {
            roots.push(cand);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn eval_z(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Sign helper used by callers needing an integer from a rational known to be integral.
pub fn q_to_int(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn int_poly_to_q(f: &[BigInt]) -> Poly {
    Poly::from_coeffs(f.iter().map(qi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn factors_product_of_irreducibles() {
        // (t^2+1)(t-3)^2(t^4-10t^2+1)
        let a = p(&[1, 0, 1]);
        let b = p(&[-3, 1]);
        let c = p(&[1, 0, -10, 0, 1]);
        let f = &(&a * &(&b * &b)) * &c;
        let fs = factor_over_q(&f);
        assert_eq!(fs, vec![(b, 2), (a, 1), (c, 1)]);
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
        assert!(!is_irreducible(&p(&[-4, 0, 1])));
    }

    #[test]
    fn rational_roots_found() {
        // 6t^3 - 5t^2 - 2t + 1 = (t-1)(2t-1)... check product (t-1)(2t+1)(3t-1)
        let f = &(&p(&[-1, 1]) * &p(&[1, 2])) * &p(&[-1, 3]);
        let r = rational_roots(&f);
        assert_eq!(
            r,
            vec![Q::new((-1).into(), 2.into()), Q::new(1.into(), 3.into()), q1()]
        );
        assert!(rational_roots(&p(&[1, 0, 1])).is_empty());
    }

    fn q1() -> Q {
        Q::one()
    }
}
