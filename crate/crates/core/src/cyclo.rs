//! Exact arithmetic in the cyclotomic field Q(ζ_m) = Q[x]/(Φ_m).
//!
//! Scalars carry their field order; rational constants use order 0 and embed in
//! every cyclotomic field, which keeps `Zero`/`One` context free.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{rat_from_str, rat_to_string, Field};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("scalars from different fields: Q(zeta_{0}) and Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("q-binomial ({m} choose {u}) has a vanishing denominator for q of order {d}")]
    VanishingDenominator { m: u64, u: u64, d: u32 },
    #[error("bad scalar literal: {0}")]
    Parse(String),
}

/// Euler's totient.
pub fn totient(m: u32) -> usize {
    let mut n = m;
    let mut r = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r as usize
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_coeffs(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    // x^m - 1 divided by Φ_e for every proper divisor e.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for e in 1..m {
        if m % e == 0 {
            let div = cyclotomic_coeffs(e);
            num = exact_div_i64(&num, &div);
        }
    }
    num
}

fn exact_div_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db];
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] / lb;
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Φ_m as a polynomial over the rationals.
pub fn cyclotomic_polynomial(m: u32) -> Poly<BigRational> {
    Poly::new(
        cyclotomic_coeffs(m)
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect(),
    )
}

struct FieldData {
    phi: usize,
    /// x^k mod Φ_m for k in phi .. 2*phi-1.
    red: Vec<Vec<BigRational>>,
    /// ζ^k for k in 0..m.
    powers: Vec<Vec<BigRational>>,
    modulus: Poly<BigRational>,
}

thread_local! {
    static FIELDS: RefCell<HashMap<u32, Rc<FieldData>>> = RefCell::new(HashMap::new());
}

fn field_data(m: u32) -> Rc<FieldData> {
    FIELDS.with(|f| {
        if let Some(fd) = f.borrow().get(&m) {
            return fd.clone();
        }
        let fd = Rc::new(build_field(m));
        f.borrow_mut().insert(m, fd.clone());
        fd
    })
}

fn build_field(m: u32) -> FieldData {
    let phi = totient(m);
    let modulus = cyclotomic_polynomial(m);
    let mut red = Vec::with_capacity(phi);
    // x^phi = -(lower part of Φ)
    let mut cur: Vec<BigRational> = modulus.coeffs()[..phi].iter().map(|c| -c.clone()).collect();
    for _ in 0..phi {
        red.push(cur.clone());
        // multiply by x and reduce
        let top = cur[phi - 1].clone();
        let mut next = vec![BigRational::zero(); phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..phi {
                next[i] += &top * &red[0][i];
            }
        }
        cur = next;
    }
    let mut powers = Vec::with_capacity(m as usize);
    let mut p = vec![BigRational::zero(); phi];
    p[0] = BigRational::one();
    for _ in 0..m {
        powers.push(p.clone());
        let top = p[phi - 1].clone();
        let mut next = vec![BigRational::zero(); phi];
        for i in (1..phi).rev() {
            next[i] = p[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..phi {
                next[i] += &top * &red[0][i];
            }
        }
        p = next;
    }
    FieldData { phi, red, powers, modulus }
}

/// An element of Q(ζ_d) in the power basis 1, ζ, …, ζ^{φ(d)-1}.
#[derive(Clone)]
pub struct CycloScalar {
    d: u32,
    c: Vec<BigRational>,
}

fn trim(c: &mut Vec<BigRational>) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

impl CycloScalar {
    /// The rational `r`, valid in every field.
    pub fn rational(r: BigRational) -> Self {
        let mut c = vec![r];
        trim(&mut c);
        CycloScalar { d: 0, c }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// Build from power-basis coordinates (any length; reduced mod Φ_d).
    pub fn from_coeffs(d: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(d >= 1);
        let fd = field_data(d);
        let mut c = coeffs;
        reduce(&fd, &mut c);
        let d = if c.len() <= 1 { 0 } else { d };
        CycloScalar { d, c }
    }

    /// ζ_d^k for any integer k.
    pub fn root_power(d: u32, k: i64) -> Self {
        let fd = field_data(d);
        let e = k.rem_euclid(d as i64) as usize;
        let mut c = fd.powers[e].clone();
        trim(&mut c);
        let d = if c.len() <= 1 { 0 } else { d };
        CycloScalar { d, c }
    }

    /// The field order, or 0 for a rational constant.
    pub fn order(&self) -> u32 {
        self.d
    }

    /// Coordinates padded to length φ(d) for a field of order `d`.
    pub fn coords(&self, d: u32) -> Vec<BigRational> {
        let phi = totient(d);
        let mut v = self.c.clone();
        v.resize(phi.max(v.len()), BigRational::zero());
        v
    }

    pub fn raw_coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    fn unify(&self, other: &Self) -> u32 {
        match (self.d, other.d) {
            (0, e) | (e, 0) => e,
            (a, b) if a == b => a,
            (a, b) => panic!("{}", CycloError::FieldMismatch(a, b)),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        let inv = other.try_inv()?;
        Ok(self.clone() * inv)
    }

    fn try_inv(&self) -> Result<Self, CycloError> {
        if self.c.is_empty() {
            return Err(CycloError::DivisionByZero(self.d));
        }
        if self.c.len() == 1 {
            return Ok(CycloScalar { d: 0, c: vec![self.c[0].recip()] });
        }
        let fd = field_data(self.d);
        let a = Poly::new(self.c.clone());
        let (g, s, _t) = a.ext_gcd(&fd.modulus);
        // g is a nonzero constant because Φ_d is irreducible
        let g0 = g.coeffs()[0].clone();
        let coeffs: Vec<BigRational> = s.coeffs().iter().map(|x| x / &g0).collect();
        Ok(CycloScalar::from_coeffs(self.d, coeffs))
    }

    /// Render as a polynomial in `sym`.
    pub fn fmt_poly(&self, sym: &str) -> String {
        fmt_coeffs(&self.c, sym)
    }

    /// Serialized form: field order plus padded rational strings.
    pub fn to_json(&self, d: u32) -> ScalarJson {
        ScalarJson { d, coeffs: self.coords(d).iter().map(rat_to_string).collect() }
    }

    pub fn from_json(j: &ScalarJson) -> Result<Self, CycloError> {
        let mut c = Vec::with_capacity(j.coeffs.len());
        for s in &j.coeffs {
            c.push(rat_from_str(s).ok_or_else(|| CycloError::Parse(s.clone()))?);
        }
        if j.d == 0 {
            return Err(CycloError::Parse("field order 0".into()));
        }
        Ok(CycloScalar::from_coeffs(j.d, c))
    }

    /// Complex embedding ζ ↦ exp(2πi/d); diagnostics only.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.c.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = if self.d == 0 { 0.0 } else { 2.0 * std::f64::consts::PI * k as f64 / self.d as f64 };
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

pub(crate) fn fmt_coeffs(c: &[BigRational], sym: &str) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let neg = a < &BigRational::zero();
        let abs = if neg { -a.clone() } else { a.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        let mon = match k {
            0 => String::new(),
            1 => sym.to_string(),
            _ => format!("{sym}^{k}"),
        };
        if k == 0 {
            out.push_str(&rat_to_string(&abs));
        } else if abs.is_one() {
            out.push_str(&mon);
        } else {
            out.push_str(&rat_to_string(&abs));
            out.push('*');
            out.push_str(&mon);
        }
    }
    out
}

fn reduce(fd: &FieldData, c: &mut Vec<BigRational>) {
    let phi = fd.phi;
    if c.len() > phi {
        // fold high powers down, highest first
        while c.len() > phi {
            let k = c.len() - 1;
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            // x^k = x^(k-phi) * x^phi
            let shift = k - phi;
            for (i, r) in fd.red[0].iter().enumerate() {
                if !r.is_zero() {
                    c[shift + i] += &top * r;
                }
            }
        }
    }
    trim(c);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub d: u32,
    pub coeffs: Vec<String>,
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.d != 0 && other.d != 0 && self.d != other.d {
            return false;
        }
        self.c == other.c
    }
}
impl Eq for CycloScalar {}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_coeffs(&self.c, "z"))
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_coeffs(&self.c, "z"))
    }
}

impl Zero for CycloScalar {
    fn zero() -> Self {
        CycloScalar { d: 0, c: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl One for CycloScalar {
    fn one() -> Self {
        CycloScalar { d: 0, c: vec![BigRational::one()] }
    }
}

fn add_vecs(a: &[BigRational], b: &[BigRational], sub: bool) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i);
        let y = b.get(i);
        out.push(match (x, y) {
            (Some(x), Some(y)) => {
                if sub {
                    x - y
                } else {
                    x + y
                }
            }
            (Some(x), None) => x.clone(),
            (None, Some(y)) => {
                if sub {
                    -y.clone()
                } else {
                    y.clone()
                }
            }
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

fn finish(d: u32, c: Vec<BigRational>) -> CycloScalar {
    let d = if c.len() <= 1 { 0 } else { d };
    CycloScalar { d, c }
}

fn add_impl(a: &CycloScalar, b: &CycloScalar, sub: bool) -> CycloScalar {
    let d = a.unify(b);
    finish(d, add_vecs(&a.c, &b.c, sub))
}

fn mul_impl(a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
    if a.c.is_empty() || b.c.is_empty() {
        return CycloScalar::zero();
    }
    let d = a.unify(b);
    if a.c.len() == 1 {
        let s = &a.c[0];
        return finish(d, b.c.iter().map(|x| x * s).collect());
    }
    if b.c.len() == 1 {
        let s = &b.c[0];
        return finish(d, a.c.iter().map(|x| x * s).collect());
    }
    let mut out = vec![BigRational::zero(); a.c.len() + b.c.len() - 1];
    for (i, x) in a.c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.c.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let fd = field_data(d);
    reduce(&fd, &mut out);
    finish(d, out)
}

macro_rules! bin_ops {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr for CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: CycloScalar) -> CycloScalar {
                let f: fn(&CycloScalar, &CycloScalar) -> CycloScalar = $body;
                f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: &'a CycloScalar) -> CycloScalar {
                let f: fn(&CycloScalar, &CycloScalar) -> CycloScalar = $body;
                f(&self, rhs)
            }
        }
        impl<'a, 'b> $tr<&'b CycloScalar> for &'a CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: &'b CycloScalar) -> CycloScalar {
                let f: fn(&CycloScalar, &CycloScalar) -> CycloScalar = $body;
                f(self, rhs)
            }
        }
    };
}

bin_ops!(Add, add, |a, b| add_impl(a, b, false));
bin_ops!(Sub, sub, |a, b| add_impl(a, b, true));
bin_ops!(Mul, mul, mul_impl);
bin_ops!(Div, div, |a, b| a.checked_div(b).unwrap_or_else(|e| panic!("{e}")));
bin_ops!(Rem, rem, |_a, b| {
    assert!(!b.is_zero(), "remainder by zero");
    CycloScalar::zero()
});

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar { d: self.d, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<'a> Neg for &'a CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar { d: self.d, c: self.c.iter().map(|x| -x.clone()).collect() }
    }
}

impl Field for CycloScalar {
    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }

    fn from_rational(r: BigRational) -> Self {
        CycloScalar::rational(r)
    }

    fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    fn weight(&self) -> usize {
        self.c
            .iter()
            .map(|r| (r.numer().bits() + r.denom().bits()) as usize)
            .sum::<usize>()
            .max(1)
    }
}

/// Which q-number to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QKind {
    Int,
    Factorial,
    Binomial,
}

/// q-numbers for a chosen root `q` of multiplicative order `d`.
///
/// `(m)_q`, `m!_q`, and the q-binomial `(m choose u)_q`; for `Int` and `Factorial`
/// the argument `u` is ignored.
pub fn q_number(q: &CycloScalar, d: u32, kind: QKind, m: u64, u: u64) -> Result<CycloScalar, CycloError> {
    match kind {
        QKind::Int => Ok(q_int(q, m)),
        QKind::Factorial => Ok(q_factorial(q, m)),
        QKind::Binomial => q_binomial(q, d, m, u),
    }
}

pub fn q_int(q: &CycloScalar, m: u64) -> CycloScalar {
    let mut s = CycloScalar::zero();
    let mut p = CycloScalar::one();
    for _ in 0..m {
        s = s + &p;
        p = p * q;
    }
    s
}

pub fn q_factorial(q: &CycloScalar, m: u64) -> CycloScalar {
    let mut f = CycloScalar::one();
    for k in 1..=m {
        f = f * q_int(q, k);
    }
    f
}

pub fn q_binomial(q: &CycloScalar, d: u32, m: u64, u: u64) -> Result<CycloScalar, CycloError> {
    if u > m {
        return Ok(CycloScalar::zero());
    }
    let den = q_factorial(q, m - u) * q_factorial(q, u);
    if den.is_zero() {
        return Err(CycloError::VanishingDenominator { m, u, d });
    }
    Ok(q_factorial(q, m) / den)
}

/// Parse a polynomial literal in `sym` with rational coefficients, e.g. `1/2+3/2*q`.
///
/// `gen` is the value substituted for `sym`.
pub fn parse_poly_literal(s: &str, sym: &str, gen: &CycloScalar) -> Result<CycloScalar, CycloError> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(CycloError::Parse(s.to_string()));
    }
    // split into signed terms
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in text.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') && !cur.ends_with('/') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut total = CycloScalar::zero();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, t.strip_prefix('+').unwrap_or(&t).to_string()),
        };
        if body.is_empty() {
            return Err(CycloError::Parse(s.to_string()));
        }
        let (coef, mon) = if let Some(pos) = body.find(sym) {
            let pre = body[..pos].trim_end_matches('*');
            let coef = if pre.is_empty() {
                BigRational::one()
            } else {
                rat_from_str(pre).ok_or_else(|| CycloError::Parse(s.to_string()))?
            };
            let rest = &body[pos + sym.len()..];
            let exp: i64 = if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                e.parse().map_err(|_| CycloError::Parse(s.to_string()))?
            } else {
                return Err(CycloError::Parse(s.to_string()));
            };
            let mut m = CycloScalar::one();
            let g = if exp < 0 { gen.inv().ok_or_else(|| CycloError::Parse(s.to_string()))? } else { gen.clone() };
            for _ in 0..exp.unsigned_abs() {
                m = m * &g;
            }
            (coef, m)
        } else {
            (rat_from_str(&body).ok_or_else(|| CycloError::Parse(s.to_string()))?, CycloScalar::one())
        };
        let term = mon * CycloScalar::rational(coef);
        total = if neg { total - term } else { total + term };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn z(d: u32, k: i64) -> CycloScalar {
        CycloScalar::root_power(d, k)
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_coeffs(1), vec![-1, 1]);
        assert_eq!(cyclotomic_coeffs(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_coeffs(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn roots_and_arith() {
        assert_eq!(z(2, 1) * z(2, 1), CycloScalar::one());
        assert_eq!(z(6, 3), CycloScalar::int(-1));
        let s = CycloScalar::one() + z(3, 1) + z(3, 2);
        assert!(s.is_zero());
        for d in [3u32, 4, 5, 6, 8, 12] {
            assert_eq!(z(d, d as i64), CycloScalar::one());
            for k in 1..d as i64 {
                assert_ne!(z(d, k), CycloScalar::one());
            }
        }
    }

    #[test]
    fn inverse() {
        let a = CycloScalar::int(2) + z(5, 1) * CycloScalar::int(3) - z(5, 3);
        let b = a.inv().unwrap();
        assert_eq!(a * b, CycloScalar::one());
        assert!(CycloScalar::zero().inv().is_none());
    }

    #[test]
    fn q_numbers() {
        let q = z(5, 1);
        assert!(q_int(&q, 0).is_zero());
        assert_eq!(q_binomial(&q, 5, 3, 1).unwrap(), CycloScalar::one() + q.clone() + q.clone() * &q);
        let b42 = q_binomial(&q, 5, 4, 2).unwrap();
        let q2 = z(5, 2);
        let q3 = z(5, 3);
        let q4 = z(5, 4);
        let expect = CycloScalar::one() + q.clone() + q2 * CycloScalar::int(2) + q3 + q4;
        assert_eq!(b42, expect);
        assert!(q_binomial(&z(3, 1), 3, 4, 1).is_err());
    }

    #[test]
    fn literal() {
        let q = z(6, 1);
        let v = parse_poly_literal("1/2+3/2*q", "q", &q).unwrap();
        assert_eq!(v, CycloScalar::rational(rat(1, 2)) + q.clone() * CycloScalar::rational(rat(3, 2)));
        let w = parse_poly_literal("-q^2", "q", &q).unwrap();
        assert_eq!(w, -(q.clone() * &q));
        assert!(parse_poly_literal("1+", "q", &q).is_err());
    }
}
