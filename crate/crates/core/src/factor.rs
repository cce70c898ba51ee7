//! Polynomial factorization: Zassenhaus over Q, Trager's norm method over Q(ζ_m).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cyclo::{totient, CycloScalar};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Poly;

pub type FieldPoly = Poly<CycloScalar>;
pub type RatPoly = Poly<BigRational>;

pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("polynomial degree {degree} exceeds the factorization cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("cannot factor the zero polynomial")]
    Zero,
}

/// Yun's squarefree decomposition: monic (a_i, i) with f = lc · Π a_i^i.
pub fn squarefree_decomposition<F: Field>(f: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.exact_div(&a);
    let mut c = df.exact_div(&a).sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let g = b.gcd(&c);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = c.exact_div(&g).sub(&b.derivative());
        i += 1;
    }
    out
}

// ---------- integer polynomials ----------

fn to_primitive_int(f: &RatPoly) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in f.coeffs() {
        l = l.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = f.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    if v.last().is_some_and(|x| x.is_negative()) {
        for c in v.iter_mut() {
            *c = -c.clone();
        }
    }
    v
}

fn int_to_rat(v: &[BigInt]) -> RatPoly {
    Poly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(&mut out);
    out
}

fn int_mod(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.iter().map(|c| c.mod_floor(m)).collect();
    trim_int(&mut out);
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim_int(&mut out);
    out
}

/// Exact division over Z, `None` if not exact.
fn int_divide(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(q)
}

// ---------- polynomials mod a small prime ----------

type ModPoly = Vec<u64>;

fn mtrim(v: &mut ModPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn minv(a: u64, p: u64) -> u64 {
    mpow(a % p, p - 2, p)
}

fn mpow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn msub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out: ModPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    mtrim(&mut out);
    out
}

fn mmul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    mtrim(&mut out);
    out
}

fn mdivrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let inv = minv(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bi % p) % p;
        }
    }
    r.truncate(db);
    mtrim(&mut r);
    mtrim(&mut q);
    (q, r)
}

fn mmonic(a: &ModPoly, p: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = minv(l, p);
            a.iter().map(|x| x * inv % p).collect()
        }
    }
}

fn mgcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = mdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    mmonic(&a, p)
}

/// (s, t) with s·a + t·b = 1 mod p, assuming coprime.
fn mext(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (ModPoly, ModPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = mdivrem(&r0, &r1, p);
        let s2 = msub(&s0, &mmul(&q, &s1, p), p);
        let t2 = msub(&t0, &mmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = minv(*r0.last().expect("nonzero gcd"), p);
    debug_assert_eq!(r0.len(), 1, "not coprime mod p");
    let sc = |v: &ModPoly| -> ModPoly {
        let mut o: ModPoly = v.iter().map(|x| x * inv % p).collect();
        mtrim(&mut o);
        o
    };
    (sc(&s0), sc(&t0))
}

fn mpowmod(base: &ModPoly, e: &BigUint, f: &ModPoly, p: u64) -> ModPoly {
    let mut acc: ModPoly = vec![1];
    let b = mdivrem(base, f, p).1;
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = mdivrem(&mmul(&acc, &acc, p), f, p).1;
        if e.bit(i) {
            acc = mdivrem(&mmul(&acc, &b, p), f, p).1;
        }
    }
    acc
}

fn mderiv(a: &ModPoly, p: u64) -> ModPoly {
    let mut out: ModPoly = a.iter().enumerate().skip(1).map(|(k, x)| (k as u64 % p) * x % p).collect();
    mtrim(&mut out);
    out
}

/// Distinct-degree then equal-degree factorization of a monic squarefree polynomial.
fn factor_mod_p(f: &ModPoly, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut deg = 1;
    while rest.len() > 1 && 2 * deg <= rest.len() - 1 {
        h = mpowmod(&h, &BigUint::from(p), &rest, p);
        let g = mgcd(&msub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.extend(equal_degree(&g, deg, p, rng));
            rest = mdivrem(&rest, &g, p).0;
            h = mdivrem(&h, &rest, p).1;
        }
        deg += 1;
    }
    if rest.len() > 1 {
        out.push(mmonic(&rest, p));
    }
    out
}

fn equal_degree(f: &ModPoly, deg: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.len() - 1;
    if n == deg {
        return vec![mmonic(f, p)];
    }
    let e = (BigUint::from(p).pow(deg as u32) - 1u32) >> 1;
    loop {
        let mut a: ModPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        mtrim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = msub(&mpowmod(&a, &e, f, p), &vec![1], p);
        let g = mgcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = mdivrem(f, &g, p).0;
            let mut out = equal_degree(&g, deg, p, rng);
            out.extend(equal_degree(&q, deg, p, rng));
            return out;
        }
    }
}

fn to_mod(v: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let mut out: ModPoly = v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    mtrim(&mut out);
    out
}

fn from_mod(v: &ModPoly) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// Lift monic g·h ≡ f (mod p) to modulus p^k; f monic modulo p^k.
fn hensel_pair(f: &[BigInt], g: &ModPoly, h: &ModPoly, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s, t) = mext(g, h, p);
    let pb = BigInt::from(p);
    let mut m = pb.clone();
    let mut gi = from_mod(g);
    let mut hi = from_mod(h);
    for _ in 1..k {
        let gh = int_mul(&gi, &hi);
        let n = f.len().max(gh.len());
        let mut e: Vec<BigInt> = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
            .collect();
        for c in e.iter_mut() {
            debug_assert!((c.clone() % &m).is_zero());
            *c = c.clone() / &m;
        }
        let e = to_mod(&e, p);
        let et = mmul(&e, &t, p);
        let (qq, tau) = mdivrem(&et, g, p);
        let sigma = {
            let mut a = mmul(&e, &s, p);
            let b = mmul(&qq, h, p);
            let n = a.len().max(b.len());
            a.resize(n, 0);
            for (i, x) in b.iter().enumerate() {
                a[i] = (a[i] + x) % p;
            }
            mtrim(&mut a);
            a
        };
        let add = |base: &mut Vec<BigInt>, delta: &ModPoly| {
            for (i, x) in delta.iter().enumerate() {
                if i >= base.len() {
                    base.resize(i + 1, BigInt::zero());
                }
                base[i] += &m * BigInt::from(*x);
            }
        };
        add(&mut gi, &tau);
        add(&mut hi, &sigma);
        m *= &pb;
        gi = int_mod(&gi, &m);
        hi = int_mod(&hi, &m);
    }
    (gi, hi)
}

fn hensel_multi(f: &[BigInt], factors: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[ModPoly]| fs.iter().fold(vec![1u64], |acc, x| mmul(&acc, x, p));
    let g = prod(&factors[..mid]);
    let h = prod(&factors[mid..]);
    let (gl, hl) = hensel_pair(f, &g, &h, p, k);
    let mut out = hensel_multi(&gl, &factors[..mid], p, k);
    out.extend(hensel_multi(&hl, &factors[mid..], p, k));
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Irreducible factors over Z of a squarefree primitive polynomial with positive lead.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    // a prime keeping f squarefree with unchanged degree
    let mut p = 3u64;
    loop {
        if is_prime(p) && !(lc.clone() % BigInt::from(p)).is_zero() {
            let fm = to_mod(f, p);
            let g = mgcd(&fm, &mderiv(&fm, p), p);
            if g.len() == 1 {
                break;
            }
        }
        p += 2;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let fm = mmonic(&to_mod(f, p), p);
    let mut mod_factors = factor_mod_p(&fm, p, &mut rng);
    if mod_factors.len() == 1 {
        return vec![f.to_vec()];
    }
    mod_factors.sort();
    // coefficient bound for factors of lc·f
    let norm: BigInt = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (BigInt::one() << (n + 1)) * (BigInt::from(n + 1)) * norm * lc.abs();
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound.clone() * 2 {
        pk *= p;
        k += 1;
    }
    let lc_inv = lc.modinv(&pk).expect("lead coefficient invertible mod p^k");
    let fmon: Vec<BigInt> = int_mod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &pk);
    let lifted = hensel_multi(&fmon, &mod_factors, p, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut fcur = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = false;
        for sub in subsets(remaining.len(), s) {
            let lcc = fcur.last().unwrap().clone();
            let mut cand = vec![lcc.clone()];
            for &i in &sub {
                cand = int_mod(&int_mul(&cand, &lifted[remaining[i]]), &pk);
            }
            let cand = symmetric(&cand, &pk);
            let cp = primitive(&cand);
            if let Some(q) = int_divide(&fcur, &cp) {
                out.push(cp);
                fcur = q;
                let keep: Vec<usize> =
                    remaining.iter().enumerate().filter(|(i, _)| !sub.contains(i)).map(|(_, &x)| x).collect();
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if fcur.len() > 1 {
        out.push(primitive(&fcur));
    }
    out
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    let mut out: Vec<BigInt> = v.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|x| x.sign() == Sign::Minus) {
        for c in out.iter_mut() {
            *c = -c.clone();
        }
    }
    out
}

/// Monic irreducible factors over Q with multiplicities.
pub fn factor_rational(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    let mut out = Vec::new();
    for (a, mult) in squarefree_decomposition(f) {
        let ints = to_primitive_int(&a);
        for g in zassenhaus(&ints) {
            out.push((int_to_rat(&g).monic(), mult));
        }
    }
    sort_factors(&mut out);
    out
}

fn sort_factors<F: Field>(v: &mut [(Poly<F>, usize)]) {
    v.sort_by(|a, b| (a.0.degree(), format!("{:?}", a.0)).cmp(&(b.0.degree(), format!("{:?}", b.0))));
}

/// Norm from Q(ζ_m) to Q as the determinant of the multiplication map.
pub fn field_norm(a: &CycloScalar, m: u32) -> BigRational {
    let phi = totient(m);
    if let Some(r) = a.as_rational() {
        let mut acc = BigRational::one();
        for _ in 0..phi {
            acc *= &r;
        }
        return acc;
    }
    let mut mat = Matrix::<BigRational>::zeros(phi, phi);
    for k in 0..phi {
        let col = (a.clone() * CycloScalar::root_power(m, k as i64)).coords(m);
        for i in 0..phi {
            mat[(i, k)] = col[i].clone();
        }
    }
    det(&mat)
}

pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.rows();
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else { return F::zero() };
        if p != c {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = t;
            }
            d = -d;
        }
        let piv = a[(c, c)].clone();
        d = d * &piv;
        let inv = piv.inv().unwrap();
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone() * &inv;
            for j in c..n {
                let v = a[(i, j)].clone() - f.clone() * &a[(c, j)];
                a[(i, j)] = v;
            }
        }
    }
    d
}

fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RatPoly {
    // Newton divided differences
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p: RatPoly = Poly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::linear(xs[i].clone())).add(&Poly::constant(coef[i].clone()));
    }
    p
}

fn norm_poly(g: &FieldPoly, m: u32) -> RatPoly {
    let deg = g.degree().unwrap() * totient(m);
    let xs: Vec<BigRational> = (0..=deg as i64).map(BigRational::from_i64).collect();
    let ys: Vec<BigRational> = xs.iter().map(|x| field_norm(&g.eval(&CycloScalar::rational(x.clone())), m)).collect();
    interpolate(&xs, &ys)
}

fn embed(p: &RatPoly) -> FieldPoly {
    p.map(|c| CycloScalar::rational(c.clone()))
}

/// Factor a squarefree monic polynomial over Q(ζ_m).
fn trager(f: &FieldPoly, m: u32) -> Vec<FieldPoly> {
    if f.degree() == Some(1) {
        return vec![f.clone()];
    }
    let z = CycloScalar::root_power(m, 1);
    for s in [0i64, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, 7, 8] {
        let shift = z.clone() * CycloScalar::int(s);
        // g(x) = f(x - s ζ)
        let g = f.compose(&Poly::new(vec![-shift.clone(), CycloScalar::one()]));
        let nrm = norm_poly(&g, m);
        if nrm.gcd(&nrm.derivative()).degree() != Some(0) {
            continue;
        }
        let mut out = Vec::new();
        for (h, _) in factor_rational(&nrm) {
            // h(x + s ζ)
            let hk = embed(&h).compose(&Poly::new(vec![shift.clone(), CycloScalar::one()]));
            let fac = f.gcd(&hk);
            if fac.degree().unwrap_or(0) > 0 {
                out.push(fac);
            }
        }
        return out;
    }
    // unreachable in practice: finitely many shifts are bad
    vec![f.clone()]
}

/// Irreducible factors of `p` over Q(ζ_m) with multiplicities; product equals `p` up to its lead.
pub fn factor_over_field(p: &FieldPoly, m: u32, cap: usize) -> Result<Vec<(FieldPoly, usize)>, FactorError> {
    let deg = p.degree().ok_or(FactorError::Zero)?;
    if deg > cap {
        return Err(FactorError::DegreeCap { degree: deg, cap });
    }
    let rational = p.coeffs().iter().all(|c| c.is_rational());
    let mut out = Vec::new();
    if totient(m) == 1 {
        let rp: RatPoly = p.map(|c| c.as_rational().unwrap());
        for (f, k) in factor_rational(&rp) {
            out.push((embed(&f), k));
        }
        return Ok(out);
    }
    for (a, k) in squarefree_decomposition(p) {
        let pieces = if rational {
            // factor over Q first, then each rational factor over the field
            let ra: RatPoly = a.map(|c| c.as_rational().unwrap());
            factor_rational(&ra).into_iter().flat_map(|(f, _)| trager(&embed(&f), m)).collect::<Vec<_>>()
        } else {
            trager(&a, m)
        };
        for f in pieces {
            out.push((f.monic(), k));
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

/// Roots in Q(ζ_m) with multiplicities.
pub fn roots_in_field(p: &FieldPoly, m: u32, cap: usize) -> Result<Vec<(CycloScalar, usize)>, FactorError> {
    Ok(factor_over_field(p, m, cap)?
        .into_iter()
        .filter(|(f, _)| f.degree() == Some(1))
        .map(|(f, k)| (-f.coeff(0), k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(v: &[i64]) -> RatPoly {
        Poly::new(v.iter().map(|&x| BigRational::from_i64(x)).collect())
    }

    fn product(fs: &[(FieldPoly, usize)]) -> FieldPoly {
        fs.iter().fold(Poly::one(), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }

    #[test]
    fn rational_factorizations() {
        let f = rp(&[-1, 0, 1]);
        let fs = factor_rational(&f);
        assert_eq!(fs, vec![(rp(&[-1, 1]), 1), (rp(&[1, 1]), 1)]);
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        assert_eq!(factor_rational(&rp(&[4, 0, 0, 0, 1])).len(), 2);
        // x^8 - 1 has four irreducible factors
        assert_eq!(factor_rational(&rp(&[-1, 0, 0, 0, 0, 0, 0, 0, 1])).len(), 4);
        // (x-2)^3 (x^2+1)
        let g = rp(&[-2, 1]).pow(3).mul(&rp(&[1, 0, 1]));
        assert_eq!(factor_rational(&g), vec![(rp(&[-2, 1]), 3), (rp(&[1, 0, 1]), 1)]);
        // Swinnerton-Dyer style: x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        assert_eq!(factor_rational(&rp(&[1, 0, -10, 0, 1])).len(), 1);
    }

    #[test]
    fn over_gaussian_field() {
        let q = CycloScalar::root_power(4, 1);
        let f = embed(&rp(&[1, 0, 1]));
        let fs = factor_over_field(&f, 4, 64).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs), f);
        let roots: Vec<_> = roots_in_field(&f, 4, 64).unwrap().into_iter().map(|r| r.0).collect();
        assert!(roots.contains(&q) && roots.contains(&-q.clone()));
        let g = embed(&rp(&[1, 1, 1]));
        assert_eq!(factor_over_field(&g, 4, 64).unwrap().len(), 1);
    }

    #[test]
    fn nonrational_input() {
        let z = CycloScalar::root_power(6, 1);
        // (x - z)(x - z^2)(x + 3)^2
        let f = Poly::linear(z.clone())
            .mul(&Poly::linear(z.clone() * &z))
            .mul(&Poly::linear(CycloScalar::int(-3)).pow(2));
        let fs = factor_over_field(&f, 6, 64).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn cap_enforced() {
        let f = embed(&rp(&[1, 0, 0, 1]));
        assert_eq!(factor_over_field(&f, 3, 2), Err(FactorError::DegreeCap { degree: 3, cap: 2 }));
    }
}
