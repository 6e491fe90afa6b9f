//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in descending graded-lexicographic order with no zero
//! coefficients and no duplicate exponent vectors, so equality is
//! structural and printing is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::linalg::Matrix;
use crate::Result;

/// Exponent vector of one term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded lexicographic: total degree first, then lex with earlier
        // variables weighing more
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The arithmetic operations exposed through [`SparsePolynomial::arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Pow(u32),
}

/// A sparse multivariate polynomial over a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    field: Field,
    nvars: usize,
    /// descending grlex, nonzero coefficients only
    terms: Vec<(Monomial, Coeff)>,
}

impl SparsePolynomial {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        SparsePolynomial {
            field: field.clone(),
            nvars,
            terms: vec![],
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn from_i64(field: &Field, nvars: usize, n: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(n))
    }

    pub fn var(field: &Field, nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        SparsePolynomial {
            field: field.clone(),
            nvars,
            terms: vec![(Monomial::var(nvars, idx), field.one())],
        }
    }

    pub fn monomial(field: &Field, nvars: usize, exps: Vec<u32>, c: Coeff) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.push((Monomial(exps), c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms, canonicalizing on the way.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch(exps.len(), nvars));
            }
            field.validate(&c)?;
            let m = Monomial(exps);
            let entry = map.entry(m).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        Ok(Self::collect(field, nvars, map))
    }

    /// Convenience constructor with integer coefficients, used all over the
    /// test suites.
    pub fn from_int_terms(field: &Field, nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            field,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), field.from_i64(*c))),
        )
        .expect("valid integer terms")
    }

    fn collect(field: &Field, nvars: usize, map: BTreeMap<Monomial, Coeff>) -> Self {
        let terms: Vec<(Monomial, Coeff)> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        SparsePolynomial {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.total_degree() == 0)
    }

    /// Max total degree of the stored terms; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0)
    }

    /// Leading coefficient in the graded-lexicographic order.
    pub fn leading_coeff(&self) -> Coeff {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeff_of(&self, exps: &[u32]) -> Coeff {
        self.terms
            .iter()
            .find(|(m, _)| m.0 == exps)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    /// Degree if the polynomial is homogeneous (zero counts as homogeneous
    /// of any degree and reports 0).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|(m, _)| m.total_degree());
        let first = match it.next() {
            None => return Some(0),
            Some(d) => d,
        };
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The homogeneous component of a given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() == degree)
            .cloned()
            .collect();
        SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Drops all terms of total degree >= `order`.
    pub fn truncate_at(&self, order: u32) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() < order)
            .cloned()
            .collect();
        SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.label(),
                other.field.label(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Checked arithmetic entry point; `Pow` ignores `b`.
    pub fn arithmetic(a: &Self, b: &Self, op: ArithOp) -> Result<Self> {
        if !matches!(op, ArithOp::Pow(_)) {
            a.check_compat(b)?;
        }
        Ok(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Pow(e) => a.pow(e),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    /// Scales so the grlex-leading coefficient becomes 1.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("monic".into()));
        }
        let inv = self.field.inv(&self.leading_coeff())?;
        Ok(self.scale(&inv))
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            let factor = self.field.from_i64(e as i64);
            let coeff = self.field.mul(c, &factor);
            map.insert(Monomial(exps), coeff);
        }
        Ok(Self::collect(&self.field, self.nvars, map))
    }

    /// Evaluates at a point given by one coefficient per variable.
    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch(point.len(), self.nvars));
        }
        // precompute powers up to the needed degree per variable
        let mut powers: Vec<Vec<Coeff>> = Vec::with_capacity(self.nvars);
        for (v, val) in point.iter().enumerate() {
            let maxdeg = self.degree_in(v) as usize;
            let mut col = Vec::with_capacity(maxdeg + 1);
            col.push(self.field.one());
            for i in 0..maxdeg {
                let next = self.field.mul(&col[i], val);
                col.push(next);
            }
            powers.push(col);
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = self.field.mul(&term, &powers[v][e as usize]);
                }
            }
            acc = self.field.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Substitutes every variable by the given polynomial (full composition).
    pub fn substitute_all(&self, images: &[SparsePolynomial]) -> Result<SparsePolynomial> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch(images.len(), self.nvars));
        }
        let out_nvars = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(Self::constant(&self.field, 0, self.coeff_of(&[]))),
        };
        for img in images {
            if img.field != self.field {
                return Err(Error::FieldMismatch(self.field.label(), img.field.label()));
            }
            if img.nvars != out_nvars {
                return Err(Error::ArityMismatch(img.nvars, out_nvars));
            }
        }
        // cache powers of each image
        let mut powers: Vec<Vec<SparsePolynomial>> = Vec::with_capacity(self.nvars);
        for (v, img) in images.iter().enumerate() {
            let maxdeg = self.degree_in(v) as usize;
            let mut col = Vec::with_capacity(maxdeg + 1);
            col.push(Self::one(&self.field, out_nvars));
            for i in 0..maxdeg {
                let next = &col[i] * img;
                col.push(next);
            }
            powers.push(col);
        }
        let mut acc = Self::zero(&self.field, out_nvars);
        for (m, c) in &self.terms {
            let mut term = Self::constant(&self.field, out_nvars, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[v][e as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitutes a single variable, leaving the others alone.
    pub fn substitute_var(&self, var: usize, image: &SparsePolynomial) -> Result<SparsePolynomial> {
        let mut images = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            if v == var {
                images.push(image.clone());
            } else {
                images.push(Self::var(&self.field, self.nvars, v));
            }
        }
        self.substitute_all(&images)
    }

    /// Applies the linear substitution `x -> M x`.
    pub fn linear_change(&self, m: &Matrix) -> Result<SparsePolynomial> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::ArityMismatch(m.rows(), self.nvars));
        }
        if !m.is_invertible()? {
            return Err(Error::SingularMatrix);
        }
        let images: Vec<SparsePolynomial> = (0..self.nvars)
            .map(|i| {
                let mut p = Self::zero(&self.field, self.nvars);
                for j in 0..self.nvars {
                    let c = m.get(i, j);
                    if !self.field.is_zero(c) {
                        p = &p + &Self::monomial(
                            &self.field,
                            self.nvars,
                            Monomial::var(self.nvars, j).0,
                            c.clone(),
                        );
                    }
                }
                p
            })
            .collect();
        self.substitute_all(&images)
    }

    /// Translates the origin: `x_i -> x_i + point_i`.
    pub fn translate(&self, point: &[Coeff]) -> Result<SparsePolynomial> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch(point.len(), self.nvars));
        }
        let images: Vec<SparsePolynomial> = point
            .iter()
            .enumerate()
            .map(|(i, c)| {
                &Self::var(&self.field, self.nvars, i)
                    + &Self::constant(&self.field, self.nvars, c.clone())
            })
            .collect();
        self.substitute_all(&images)
    }

    /// Homogenizes with respect to an unused variable up to `target_degree`.
    pub fn homogenize(&self, new_var: usize, target_degree: u32) -> Result<SparsePolynomial> {
        if new_var >= self.nvars {
            return Err(Error::VarOutOfRange {
                index: new_var,
                nvars: self.nvars,
            });
        }
        if self.degree_in(new_var) > 0 {
            return Err(Error::InvalidParameter(format!(
                "variable {new_var} already occurs"
            )));
        }
        let deg = self.total_degree();
        if target_degree < deg && !self.is_zero() {
            return Err(Error::DegreeTooLow {
                target: target_degree as usize,
                actual: deg as usize,
            });
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.0.clone();
            exps[new_var] = target_degree - m.total_degree();
            (Monomial(exps), c.clone())
        });
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            map.insert(m, c);
        }
        Ok(Self::collect(&self.field, self.nvars, map))
    }

    /// Substitutes `var := value`; the inverse of `homogenize` at value 1.
    pub fn dehomogenize(&self, var: usize, value: &Coeff) -> Result<SparsePolynomial> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let image = Self::constant(&self.field, self.nvars, value.clone());
        self.substitute_var(var, &image)
    }

    /// Removes a variable that no term uses.
    pub fn drop_var(&self, var: usize) -> Result<SparsePolynomial> {
        if self.degree_in(var) > 0 {
            return Err(Error::InvalidParameter(format!(
                "variable {var} still occurs"
            )));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.0.clone();
            exps.remove(var);
            (Monomial(exps), c.clone())
        });
        Ok(SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars - 1,
            terms: terms.collect(),
        })
    }

    /// Inserts a fresh unused variable at the given position.
    pub fn insert_var(&self, at: usize) -> SparsePolynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.0.clone();
            exps.insert(at, 0);
            (Monomial(exps), c.clone())
        });
        SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars + 1,
            terms: terms.collect(),
        }
    }

    /// Applies a coefficient map into a target field; zero results are
    /// dropped so the output is canonical.
    pub fn map_coeffs(
        &self,
        target: &Field,
        f: impl Fn(&Coeff) -> Coeff,
    ) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !target.is_zero(c))
            .collect();
        SparsePolynomial {
            field: target.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// For a rational-coefficient polynomial: clears denominators and the
    /// integer content, returning a primitive integer polynomial with
    /// positive leading coefficient.
    pub fn primitive_integer(&self) -> Result<SparsePolynomial> {
        if self.field != Field::Rational {
            return Err(Error::FieldMismatch(self.field.label(), "Q".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            if let Coeff::Rat(r) = c {
                lcm = lcm.lcm(r.denom());
            }
        }
        let mut gcd = BigInt::zero();
        let ints: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| match c {
                Coeff::Rat(r) => (r * BigRational::from(lcm.clone())).to_integer(),
                _ => unreachable!(),
            })
            .collect();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        if self.terms[0].1.as_rational().map_or(false, |r| r.is_negative()) {
            gcd = -gcd;
        }
        let terms = self
            .terms
            .iter()
            .zip(ints)
            .map(|((m, _), v)| (m.clone(), Coeff::Rat(BigRational::from(v / &gcd))))
            .collect();
        Ok(SparsePolynomial {
            field: Field::Rational,
            nvars: self.nvars,
            terms,
        })
    }

    /// Reduces a rational polynomial modulo `p`; fails when a denominator is
    /// divisible by `p` or the total degree drops.
    pub fn reduce_mod_p(&self, p: u64) -> Result<SparsePolynomial> {
        let target = Field::prime(p)?;
        let pb = BigInt::from(p);
        for (_, c) in &self.terms {
            if let Coeff::Rat(r) = c {
                if (r.denom() % &pb).is_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "denominator divisible by {p}"
                    )));
                }
            } else {
                return Err(Error::FieldMismatch(self.field.label(), "Q".into()));
            }
        }
        let out = self.map_coeffs(&target, |c| match c {
            Coeff::Rat(r) => Coeff::Mod(crate::field::rational_mod_p(r, p)),
            _ => unreachable!(),
        });
        if out.total_degree() != self.total_degree() {
            return Err(Error::InvalidParameter(format!(
                "degree drops modulo {p}"
            )));
        }
        Ok(out)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &SparsePolynomial) -> Option<SparsePolynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let field = &self.field;
        let mut rem = self.clone();
        let mut quo_map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        let (dlm, dlc) = (&divisor.terms[0].0, &divisor.terms[0].1);
        let dlc_inv = field.inv(dlc).ok()?;
        while !rem.is_zero() {
            let (rlm, rlc) = (&rem.terms[0].0, &rem.terms[0].1);
            // leading monomial of divisor must divide leading monomial of rem
            let mut q_exp = vec![0u32; self.nvars];
            for i in 0..self.nvars {
                if rlm.0[i] < dlm.0[i] {
                    return None;
                }
                q_exp[i] = rlm.0[i] - dlm.0[i];
            }
            let q_coeff = field.mul(rlc, &dlc_inv);
            let q_term = SparsePolynomial::monomial(
                field,
                self.nvars,
                q_exp.clone(),
                q_coeff.clone(),
            );
            quo_map.insert(Monomial(q_exp), q_coeff);
            rem = &rem - &(&q_term * divisor);
        }
        Some(Self::collect(field, self.nvars, quo_map))
    }

    /// True when the two polynomials differ by a nonzero scalar.
    pub fn proportional_to(&self, other: &SparsePolynomial) -> bool {
        if self.field != other.field || self.nvars != other.nvars {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        // cross-multiply by leading coefficients
        let a = self.scale(&other.leading_coeff());
        let b = other.scale(&self.leading_coeff());
        a == b
    }

    /// Renders with explicit variable names.
    pub fn to_string_with(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let field = &self.field;
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        vars[v].to_string()
                    } else {
                        format!("{}^{}", vars[v], e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            // pull a leading minus out of rational coefficients
            let (neg, mag) = match c {
                Coeff::Rat(r) if r.is_negative() => (true, Coeff::Rat(-r.clone())),
                Coeff::Ext(_) | Coeff::Rat(_) | Coeff::Mod(_) => (false, c.clone()),
            };
            let mag_str = field.format(&mag);
            let body = if mono.is_empty() {
                if field.needs_parens(&mag) {
                    format!("({mag_str})")
                } else {
                    mag_str
                }
            } else if mag == field.one() {
                mono
            } else if field.needs_parens(&mag) {
                format!("({mag_str})*{mono}")
            } else {
                format!("{mag_str}*{mono}")
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }

    fn default_vars(&self) -> Vec<String> {
        if self.nvars <= 4 {
            ["x", "y", "z", "w"][..self.nvars]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (0..self.nvars).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.default_vars();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_string_with(&refs))
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        debug_assert_eq!(self.field, rhs.field);
        debug_assert_eq!(self.nvars, rhs.nvars);
        let field = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp(&rhs.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&self.terms[i].1, &rhs.terms[j].1);
                    if !field.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        SparsePolynomial {
            field: field.clone(),
            nvars: self.nvars,
            terms: out,
        }
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self + &(-rhs)
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        debug_assert_eq!(self.field, rhs.field);
        debug_assert_eq!(self.nvars, rhs.nvars);
        let field = &self.field;
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = field.mul(ca, cb);
                match map.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = field.add(e.get(), &c);
                        *e.get_mut() = s;
                    }
                }
            }
        }
        SparsePolynomial::collect(field, self.nvars, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn xy_poly(terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_int_terms(&q(), 2, terms)
    }

    #[test]
    fn product_of_conjugates() {
        // (x+y)(x-y) = x^2 - y^2
        let a = xy_poly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = xy_poly(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let want = xy_poly(&[(&[2, 0], 1), (&[0, 2], -1)]);
        assert_eq!(
            SparsePolynomial::arithmetic(&a, &b, ArithOp::Mul).unwrap(),
            want
        );
    }

    #[test]
    fn multiply_by_zero_gives_empty_terms() {
        let a = xy_poly(&[(&[2, 1], 3), (&[0, 0], -1)]);
        let z = SparsePolynomial::zero(&q(), 2);
        let p = &a * &z;
        assert!(p.is_zero());
        assert!(p.terms().is_empty());
    }

    #[test]
    fn cube_expansion_coefficient() {
        // coefficient of x^4 y^3 in (x^2 - y^3)^3 is binom(3,2)*(-1) = -3
        let f = xy_poly(&[(&[2, 0], 1), (&[0, 3], -1)]);
        let g = f.pow(3);
        assert_eq!(g.coeff_of(&[4, 3]), q().from_i64(-3));
    }

    #[test]
    fn derivative_of_normal_forms() {
        // d/dx (x^2 - y^5) = 2x   (k = 4)
        let f = xy_poly(&[(&[2, 0], 1), (&[0, 5], -1)]);
        assert_eq!(
            f.differentiate(0).unwrap(),
            xy_poly(&[(&[1, 0], 2)])
        );
        // d/dy (x^2 y - y^4) = x^2 - 4 y^3   (k = 5)
        let f = xy_poly(&[(&[2, 1], 1), (&[0, 4], -1)]);
        assert_eq!(
            f.differentiate(1).unwrap(),
            xy_poly(&[(&[2, 0], 1), (&[0, 3], -4)])
        );
        // derivative of a constant is zero
        let c = xy_poly(&[(&[0, 0], 7)]);
        assert!(c.differentiate(0).unwrap().is_zero());
    }

    #[test]
    fn homogenize_cuspidal_cubic() {
        // y^2 - x^3 homogenized by z to degree 3 -> y^2 z - x^3
        let f = SparsePolynomial::from_int_terms(&q(), 3, &[(&[0, 2, 0], 1), (&[3, 0, 0], -1)]);
        let h = f.homogenize(2, 3).unwrap();
        let want =
            SparsePolynomial::from_int_terms(&q(), 3, &[(&[0, 2, 1], 1), (&[3, 0, 0], -1)]);
        assert_eq!(h, want);
        assert_eq!(h.homogeneous_degree(), Some(3));
        // round trip
        let back = h.dehomogenize(2, &q().one()).unwrap();
        assert_eq!(back, f);
        // degree raising multiplies through by z^2
        let h2 = f.homogenize(2, 5).unwrap();
        let z2 = SparsePolynomial::from_int_terms(&q(), 3, &[(&[0, 0, 2], 1)]);
        assert_eq!(h2, &h * &z2);
        // target below the degree errors
        assert!(matches!(
            f.homogenize(2, 2),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn exact_division() {
        let a = xy_poly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = xy_poly(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn proportionality() {
        let a = xy_poly(&[(&[2, 0], 2), (&[0, 2], -2)]);
        let b = xy_poly(&[(&[2, 0], 3), (&[0, 2], -3)]);
        assert!(a.proportional_to(&b));
        let c = xy_poly(&[(&[2, 0], 3), (&[0, 2], 3)]);
        assert!(!a.proportional_to(&c));
    }

    #[test]
    fn display_format() {
        let f = xy_poly(&[(&[2, 1], 3), (&[0, 3], -1), (&[0, 0], 1)]);
        assert_eq!(f.to_string(), "3*x^2*y - y^3 + 1");
    }
}
