//! Exact coefficient fields: the rationals, prime fields, and simple
//! extensions `Q[t]/(m(t))` with an explicit monic modulus.
//!
//! Field elements are immutable values; every operation goes through the
//! [`Field`] descriptor so that polynomials over different fields can never
//! be mixed silently.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// A simple extension of the rationals by one generator.
#[derive(Debug, PartialEq, Eq)]
pub struct Extension {
    /// Dense monic modulus, low degree first, `modulus.len() == degree + 1`.
    pub modulus: Vec<BigRational>,
    /// Printed name of the generator, usually `t`.
    pub generator: String,
}

impl Extension {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Descriptor of a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    /// The field of rational numbers.
    Rational,
    /// The prime field with `p` elements, `p` an odd prime.
    Prime(u64),
    /// A simple extension `Q[t]/(m(t))`.
    Extension(Arc<Extension>),
}

/// An element of one of the supported fields.
///
/// Representations are canonical: rationals are reduced, prime-field values
/// lie in `[0, p)`, extension elements are reduced modulo the modulus and
/// stored as a dense coefficient vector of length equal to the extension
/// degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(BigRational),
    Mod(u64),
    Ext(Vec<BigRational>),
}

impl Field {
    /// Prime field constructor with a primality check.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Extension field constructor. The modulus must be monic of degree at
    /// least one; for degree up to three a rational-root search certifies
    /// irreducibility, beyond that it is caller-asserted.
    pub fn extension(modulus: Vec<BigRational>, generator: &str) -> Result<Field> {
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::BadModulus);
        }
        if modulus.len() <= 4 {
            if let Some(root) = rational_root(&modulus) {
                return Err(Error::ReducibleModulus(format_rational(&root)));
            }
        }
        Ok(Field::Extension(Arc::new(Extension {
            modulus,
            generator: generator.to_string(),
        })))
    }

    /// The extension `Q[t]/(t^2 - t + 1)`, whose generator is a primitive
    /// sixth root of unity (equivalently a cube root of -1).
    pub fn sixth_root_extension() -> Field {
        Field::extension(
            vec![
                BigRational::one(),
                -BigRational::one(),
                BigRational::one(),
            ],
            "t",
        )
        .expect("t^2 - t + 1 is irreducible")
    }

    /// Short human-readable label for error messages.
    pub fn label(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F_{p}"),
            Field::Extension(e) => format!("Q[{}]/(deg {})", e.generator, e.degree()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Rat(BigRational::zero()),
            Field::Prime(_) => Coeff::Mod(0),
            Field::Extension(e) => Coeff::Ext(vec![BigRational::zero(); e.degree()]),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_rational(&self, q: BigRational) -> Coeff {
        match self {
            Field::Rational => Coeff::Rat(q),
            Field::Prime(p) => Coeff::Mod(rational_mod_p(&q, *p)),
            Field::Extension(e) => {
                let mut v = vec![BigRational::zero(); e.degree()];
                v[0] = q;
                Coeff::Ext(v)
            }
        }
    }

    /// The generator `t` of an extension field.
    pub fn generator(&self) -> Result<Coeff> {
        match self {
            Field::Extension(e) => {
                let mut v = vec![BigRational::zero(); e.degree()];
                if e.degree() == 1 {
                    // t is congruent to -m[0] modulo a linear modulus
                    v[0] = -e.modulus[0].clone();
                } else {
                    v[1] = BigRational::one();
                }
                Ok(Coeff::Ext(v))
            }
            _ => Err(Error::InvalidParameter(format!(
                "field {} has no generator",
                self.label()
            ))),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Mod(m) => *m == 0,
            Coeff::Ext(v) => v.iter().all(|c| c.is_zero()),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.expect_p();
                Coeff::Mod(add_mod(*x, *y, p))
            }
            (Coeff::Ext(x), Coeff::Ext(y)) => {
                Coeff::Ext(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            _ => panic!("mixed coefficient kinds in {}", self.label()),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Rat(x) => Coeff::Rat(-x),
            Coeff::Mod(x) => {
                let p = self.expect_p();
                Coeff::Mod(if *x == 0 { 0 } else { p - *x })
            }
            Coeff::Ext(v) => Coeff::Ext(v.iter().map(|c| -c).collect()),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.expect_p();
                Coeff::Mod(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            (Coeff::Ext(x), Coeff::Ext(y)) => {
                let e = self.expect_ext();
                let prod = rv_mul(x, y);
                Coeff::Ext(rv_rem_monic(prod, &e.modulus, e.degree()))
            }
            _ => panic!("mixed coefficient kinds in {}", self.label()),
        }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero(self.label()));
        }
        match a {
            Coeff::Rat(x) => Ok(Coeff::Rat(x.recip())),
            Coeff::Mod(x) => {
                let p = self.expect_p();
                Ok(Coeff::Mod(inv_mod(*x, p)))
            }
            Coeff::Ext(v) => {
                let e = self.expect_ext();
                let inv = rv_inverse_mod(v, &e.modulus).ok_or_else(|| {
                    Error::Internal("extension modulus is not irreducible".into())
                })?;
                Ok(Coeff::Ext(rv_pad(inv, e.degree())))
            }
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Coeff, mut n: u64) -> Coeff {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Checks that an element belongs to this field's representation.
    pub fn validate(&self, a: &Coeff) -> Result<()> {
        let ok = match (self, a) {
            (Field::Rational, Coeff::Rat(_)) => true,
            (Field::Prime(p), Coeff::Mod(v)) => v < p,
            (Field::Extension(e), Coeff::Ext(v)) => v.len() == e.degree(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.label(), format!("{a:?}")))
        }
    }

    /// Formats an element; extension elements are written in the generator.
    pub fn format(&self, a: &Coeff) -> String {
        match a {
            Coeff::Rat(r) => format_rational(r),
            Coeff::Mod(m) => m.to_string(),
            Coeff::Ext(v) => {
                let e = self.expect_ext();
                format_rv(v, &e.generator)
            }
        }
    }

    /// True when the formatted element needs parentheses inside a product.
    pub fn needs_parens(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Ext(v) => v.iter().filter(|c| !c.is_zero()).count() > 1,
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Mod(_) => false,
        }
    }

    fn expect_p(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            _ => panic!("prime-field element in {}", self.label()),
        }
    }

    fn expect_ext(&self) -> &Extension {
        match self {
            Field::Extension(e) => e,
            _ => panic!("extension element in {}", self.label()),
        }
    }
}

impl Coeff {
    /// The rational value of a `Coeff::Rat`, or of an extension element that
    /// happens to be rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rat(r) => Some(r),
            Coeff::Ext(v) if v.iter().skip(1).all(|c| c.is_zero()) => Some(&v[0]),
            _ => None,
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit, p is prime and a != 0
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    (s0.rem_euclid(p as i128)) as u64
}

/// Reduces a rational with denominator coprime to `p` into `F_p`.
pub fn rational_mod_p(q: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor_u64(&pb);
    let den = q.denom().mod_floor_u64(&pb);
    assert!(den != 0, "denominator divisible by {p}");
    ((num as u128 * inv_mod(den, p) as u128) % p as u128) as u64
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: &BigInt) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(p);
        let (_, digits) = m.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue exceeds u64"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if p == q {
            return true;
        }
        if p % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// --- dense rational polynomial helpers for extension arithmetic ---

fn rv_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rv_pad(mut v: Vec<BigRational>, len: usize) -> Vec<BigRational> {
    v.resize(len, BigRational::zero());
    v
}

fn rv_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Remainder modulo a monic modulus, padded to `deg` coefficients.
fn rv_rem_monic(mut v: Vec<BigRational>, m: &[BigRational], deg: usize) -> Vec<BigRational> {
    v = rv_trim(v);
    while v.len() > deg {
        let lead = v.pop().unwrap();
        let shift = v.len() - deg;
        if !lead.is_zero() {
            for (i, mc) in m.iter().take(deg).enumerate() {
                v[shift + i] -= &lead * mc;
            }
        }
        v = rv_trim(v);
    }
    rv_pad(v, deg)
}

/// Inverse of `a` modulo the monic modulus `m` via extended Euclid.
/// Returns `None` when `gcd(a, m)` is not constant.
fn rv_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = m.to_vec();
    let mut r1 = rv_trim(a.to_vec());
    let mut s0: Vec<BigRational> = vec![];
    let mut s1 = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = rv_divmod(&r0, &r1);
        let s2 = rv_sub(&s0, &rv_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.into_iter().map(|x| x * &c).collect())
}

fn rv_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rv_trim(out)
}

fn rv_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = rv_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = rv_trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let c = rem.last().unwrap() / &lead;
        let shift = rem.len() - b.len();
        quo[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        rem = rv_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (quo, rem)
}

/// Rational root of a dense rational polynomial, if one exists.
/// Used only for the small-degree modulus check.
fn rational_root(poly: &[BigRational]) -> Option<BigRational> {
    use num_integer::Integer;
    let poly = rv_trim(poly.to_vec());
    if poly.len() <= 1 {
        return None;
    }
    // clear denominators to an integer polynomial
    let mut lcm = BigInt::one();
    for c in &poly {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    let a0 = ints.iter().find(|c| !c.is_zero()).unwrap().abs();
    if ints[0].is_zero() {
        return Some(BigRational::zero());
    }
    let an = ints.last().unwrap().abs();
    for p in small_divisors(&a0) {
        for q in small_divisors(&an) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                let mut acc = BigRational::zero();
                for c in ints.iter().rev() {
                    acc = acc * &cand + BigRational::from(c.clone());
                }
                if acc.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// All positive divisors found by trial division; callers only use this on
/// small moduli so the bound is generous.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = vec![];
    let mut d = BigInt::one();
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= n && d <= limit {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_rv(v: &[BigRational], gen: &str) -> String {
    let mut parts: Vec<String> = vec![];
    for (i, c) in v.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => gen.to_string(),
            _ => format!("{gen}^{i}"),
        };
        let lead = parts.is_empty();
        let (sign, mag) = if c.is_negative() {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        let coeff = if mag.is_one() && i > 0 {
            String::new()
        } else {
            format_rational(&mag)
        };
        let body = match (coeff.is_empty(), mono.is_empty()) {
            (true, _) => mono.clone(),
            (false, true) => coeff,
            (false, false) => format!("{coeff}*{mono}"),
        };
        if lead {
            parts.push(if sign == "-" { format!("-{body}") } else { body });
        } else {
            parts.push(format!(" {sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.concat()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(r) => write!(f, "{}", format_rational(r)),
            Coeff::Mod(m) => write!(f, "{m}"),
            Coeff::Ext(v) => write!(f, "{}", format_rv(v, "t")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_field_axioms() {
        let f = Field::Rational;
        let a = f.from_rational(q(3, 2));
        let b = f.from_rational(q(-1, 3));
        let ab = f.mul(&a, &b);
        assert_eq!(ab, f.from_rational(q(-1, 2)));
        let inv = f.inv(&b).unwrap();
        assert_eq!(f.mul(&b, &inv), f.one());
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(32003).unwrap();
        let a = Coeff::Mod(12345);
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(Field::prime(100).is_err());
    }

    #[test]
    fn sixth_root_extension_arithmetic() {
        // t^2 = t - 1, so t^3 = -1 and t has multiplicative order 6
        let f = Field::sixth_root_extension();
        let t = f.generator().unwrap();
        let t3 = f.pow(&t, 3);
        assert_eq!(t3, f.from_i64(-1));
        let t6 = f.pow(&t, 6);
        assert_eq!(t6, f.one());
        // 1/t = 1 - t
        let inv = f.inv(&t).unwrap();
        let expect = f.sub(&f.one(), &t);
        assert_eq!(inv, expect);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 - 1 = (t-1)(t+1)
        let m = vec![q(-1, 1), q(0, 1), q(1, 1)];
        assert!(matches!(
            Field::extension(m, "t"),
            Err(Error::ReducibleModulus(_))
        ));
        // t^3 - 2 has no rational root, accepted
        let m = vec![q(-2, 1), q(0, 1), q(0, 1), q(1, 1)];
        assert!(Field::extension(m, "t").is_ok());
    }

    #[test]
    fn extension_formatting() {
        let f = Field::sixth_root_extension();
        let t = f.generator().unwrap();
        let e = f.sub(&t, &f.one());
        assert_eq!(f.format(&e), "t - 1");
        assert_eq!(f.format(&f.neg(&t)), "-t");
    }
}
