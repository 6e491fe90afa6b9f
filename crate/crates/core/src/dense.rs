//! Dense univariate polynomials over a coefficient field.
//!
//! This is the workhorse for everything one-variable: Euclidean gcd,
//! squarefree decomposition, modular exponentiation, and the base layer of
//! the factorization routines.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::poly::SparsePolynomial;
use crate::Result;

/// Dense univariate polynomial, coefficients low degree first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: Field,
    coeffs: Vec<Coeff>,
}

impl DensePoly {
    pub fn zero(field: &Field) -> DensePoly {
        DensePoly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    pub fn constant(field: &Field, c: Coeff) -> DensePoly {
        let mut p = Self::zero(field);
        if !field.is_zero(&c) {
            p.coeffs.push(c);
        }
        p
    }

    pub fn one(field: &Field) -> DensePoly {
        Self::constant(field, field.one())
    }

    pub fn x(field: &Field) -> DensePoly {
        DensePoly {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Coeff>) -> DensePoly {
        let mut p = DensePoly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> DensePoly {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .map_or(false, |c| self.field.is_zero(c))
        {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Coeff {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Coeff {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &DensePoly) -> DensePoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(&self.coeff(i), &other.coeff(i)));
        }
        Self::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &DensePoly) -> DensePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DensePoly {
        DensePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !f.is_zero(b) {
                    out[i + j] = f.add(&out[i + j], &f.mul(a, b));
                }
            }
        }
        Self::from_coeffs(f, out)
    }

    pub fn scale(&self, c: &Coeff) -> DensePoly {
        if self.field.is_zero(c) {
            return Self::zero(&self.field);
        }
        DensePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        }
    }

    pub fn mul_xn(&self, n: usize) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> DensePoly {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; the divisor may have any nonzero leading
    /// coefficient since we are over a field.
    pub fn divmod(&self, divisor: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero("polynomial division".into()));
        }
        let f = &self.field;
        let dlen = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quo = vec![f.zero(); rem.len() - dlen + 1];
        let lead_inv = f.inv(&divisor.leading())?;
        let mut top = rem.len();
        while top >= dlen {
            let c = f.mul(&rem[top - 1], &lead_inv);
            let shift = top - dlen;
            if !f.is_zero(&c) {
                quo[shift] = c.clone();
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] = f.sub(&rem[shift + i], &f.mul(&c, d));
                }
            }
            top -= 1;
            while top >= dlen.max(1) && f.is_zero(&rem[top - 1]) {
                top -= 1;
            }
            rem.truncate(top);
            if top < dlen {
                break;
            }
        }
        Ok((Self::from_coeffs(f, quo), Self::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &DensePoly) -> Result<DensePoly> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn div_exact(&self, divisor: &DensePoly) -> Result<DensePoly> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision("univariate".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<DensePoly> {
        if self.is_zero() {
            return Err(Error::ZeroInput("monic".into()));
        }
        let inv = self.field.inv(&self.leading())?;
        Ok(self.scale(&inv))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &DensePoly) -> DensePoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// Extended Euclid: returns `(g, s, t)` monic with `s*self + t*other = g`.
    pub fn extended_gcd(&self, other: &DensePoly) -> (DensePoly, DensePoly, DensePoly) {
        let f = &self.field;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Self::one(f);
        let mut s1 = Self::zero(f);
        let mut t0 = Self::zero(f);
        let mut t1 = Self::one(f);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(&r0.leading()).expect("nonzero");
        (
            r0.scale(&inv),
            s0.scale(&inv),
            t0.scale(&inv),
        )
    }

    pub fn derivative(&self) -> DensePoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, at: &Coeff) -> Coeff {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, at), c);
        }
        acc
    }

    /// Substitutes `x := x + c`.
    pub fn shift(&self, c: &Coeff) -> DensePoly {
        let f = &self.field;
        let mut acc = Self::zero(f);
        let xc = Self::from_coeffs(f, vec![c.clone(), f.one()]);
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&xc).add(&Self::constant(f, coeff.clone()));
        }
        acc
    }

    /// Substitutes `x := q(x)`.
    pub fn compose(&self, q: &DensePoly) -> DensePoly {
        let f = &self.field;
        let mut acc = Self::zero(f);
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(f, coeff.clone()));
        }
        acc
    }

    /// `self^e mod m` with a big-integer exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &DensePoly) -> Result<DensePoly> {
        let mut acc = Self::one(&self.field);
        let mut base = self.rem(m)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            // inseparable: only possible in positive characteristic
            return false;
        }
        self.gcd(&d).is_constant()
    }

    /// Yun's squarefree decomposition; characteristic zero only.
    /// Returns `(unit, [(g_i, i)])` with `self = unit * prod g_i^i`, each
    /// `g_i` monic squarefree, pairwise coprime, `deg g_i >= 1`.
    pub fn squarefree_decomposition(&self) -> Result<(Coeff, Vec<(DensePoly, usize)>)> {
        if self.is_zero() {
            return Err(Error::ZeroInput("squarefree decomposition".into()));
        }
        if self.field.characteristic() != 0 {
            return Err(Error::InvalidParameter(
                "squarefree decomposition requires characteristic zero".into(),
            ));
        }
        let unit = self.leading();
        let f = self.monic()?;
        if f.is_constant() {
            return Ok((unit, vec![]));
        }
        let df = f.derivative();
        let g = f.gcd(&df);
        if g.is_constant() {
            return Ok((unit, vec![(f, 1)]));
        }
        let mut out = vec![];
        let mut c = f.div_exact(&g)?;
        let mut d = df.div_exact(&g)?.sub(&c.derivative());
        let mut i = 1;
        while !c.is_constant() {
            let a = c.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            c = c.div_exact(&a)?;
            d = d.div_exact(&a)?.sub(&c.derivative());
            i += 1;
        }
        Ok((unit, out))
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Result<DensePoly> {
        let (_, parts) = self.squarefree_decomposition()?;
        let mut acc = Self::one(&self.field);
        for (g, _) in parts {
            acc = acc.mul(&g);
        }
        Ok(acc)
    }

    /// Builds from a sparse polynomial that only involves variable `var`.
    pub fn from_sparse(p: &SparsePolynomial, var: usize) -> Result<DensePoly> {
        let n = p.degree_in(var) as usize;
        let mut coeffs = vec![p.field().zero(); n + 1];
        for (m, c) in p.terms() {
            if m.total_degree() != m.0[var] {
                return Err(Error::InvalidParameter(
                    "polynomial is not univariate".into(),
                ));
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Ok(Self::from_coeffs(p.field(), coeffs))
    }

    /// Embeds as a sparse polynomial in `nvars` variables using `var`.
    pub fn to_sparse(&self, nvars: usize, var: usize) -> SparsePolynomial {
        let f = &self.field;
        SparsePolynomial::from_terms(
            f,
            nvars,
            self.coeffs.iter().enumerate().filter_map(|(i, c)| {
                if f.is_zero(c) {
                    None
                } else {
                    let mut exps = vec![0u32; nvars];
                    exps[var] = i as u32;
                    Some((exps, c.clone()))
                }
            }),
        )
        .expect("valid terms")
    }

    pub fn to_string_var(&self, var: &str) -> String {
        self.to_sparse(1, 0).to_string_with(&[var])
    }
}

impl Zero for DensePoly {
    fn zero() -> Self {
        panic!("use DensePoly::zero(&field)")
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl std::ops::Add for DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: DensePoly) -> DensePoly {
        DensePoly::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_and_gcd() {
        let f = Field::Rational;
        // (x+1)^2 (x-2)
        let p = DensePoly::from_i64(&f, &[1, 2, 1]).mul(&DensePoly::from_i64(&f, &[-2, 1]));
        let d = DensePoly::from_i64(&f, &[1, 1]);
        let (q, r) = p.divmod(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&d), p);
        let g = p.gcd(&p.derivative());
        assert_eq!(g, DensePoly::from_i64(&f, &[1, 1]));
    }

    #[test]
    fn yun_decomposition() {
        let f = Field::Rational;
        // f = (x+1)^2 (x-2), squarefree part (x+1)(x-2)
        let p = DensePoly::from_i64(&f, &[1, 2, 1]).mul(&DensePoly::from_i64(&f, &[-2, 1]));
        let (unit, parts) = p.squarefree_decomposition().unwrap();
        assert_eq!(unit, f.one());
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (DensePoly::from_i64(&f, &[-2, 1]), 1));
        assert_eq!(parts[1], (DensePoly::from_i64(&f, &[1, 1]), 2));
        let sf = p.squarefree_part().unwrap();
        assert_eq!(
            sf,
            DensePoly::from_i64(&f, &[-2, 1]).mul(&DensePoly::from_i64(&f, &[1, 1]))
        );
    }

    #[test]
    fn extended_gcd_bezout() {
        let f = Field::prime(101).unwrap();
        let a = DensePoly::from_i64(&f, &[1, 0, 1]); // x^2+1
        let b = DensePoly::from_i64(&f, &[2, 1]); // x+2
        let (g, s, t) = a.extended_gcd(&b);
        let lhs = s.mul(&a).add(&t.mul(&b));
        assert_eq!(lhs, g);
        assert!(g.is_constant());
    }

    #[test]
    fn pow_mod_fermat() {
        let f = Field::prime(13).unwrap();
        let x = DensePoly::x(&f);
        let m = DensePoly::from_i64(&f, &[1, 1, 1]); // x^2+x+1
        let e = BigUint::from(13u32 * 13);
        // Frobenius squared fixes the splitting field of a quadratic
        let fr2 = x.pow_mod(&e, &m).unwrap();
        assert_eq!(fr2, x.rem(&m).unwrap());
    }

    #[test]
    fn shift_round_trip() {
        let f = Field::Rational;
        let p = DensePoly::from_i64(&f, &[3, -1, 0, 2]);
        let s = p.shift(&f.from_i64(5)).shift(&f.from_i64(-5));
        assert_eq!(s, p);
    }
}
