//! Multivariate gcd and squarefree parts via primitive pseudo-remainder
//! sequences, plus the univariate-in-one-variable view shared with the
//! resultant code.

use crate::error::Error;
use crate::field::Field;
use crate::poly::SparsePolynomial;
use crate::Result;

/// Scalar normalization keeping pseudo-remainder coefficients small:
/// primitive integer form over the rationals, monic elsewhere.
fn normalize_scalars(p: SparsePolynomial) -> Result<SparsePolynomial> {
    if p.is_zero() {
        return Ok(p);
    }
    match p.field() {
        Field::Rational => p.primitive_integer(),
        _ => p.monic(),
    }
}

/// View of a multivariate polynomial as univariate in `var` with
/// polynomial coefficients. Coefficients keep the full arity with `var`
/// unused, so they multiply with the ordinary sparse arithmetic.
#[derive(Debug, Clone)]
pub(crate) struct UPoly {
    pub var: usize,
    /// low degree first, possibly with zero gaps; the top entry is nonzero
    pub coeffs: Vec<SparsePolynomial>,
}

impl UPoly {
    pub fn from_sparse(p: &SparsePolynomial, var: usize) -> UPoly {
        let field = p.field();
        let n = p.degree_in(var) as usize;
        let mut coeffs = vec![SparsePolynomial::zero(field, p.nvars()); n + 1];
        for (m, c) in p.terms() {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            let term = SparsePolynomial::monomial(field, p.nvars(), exps, c.clone());
            coeffs[e] = &coeffs[e] + &term;
        }
        let mut u = UPoly { var, coeffs };
        u.trim();
        u
    }

    pub fn to_sparse(&self) -> SparsePolynomial {
        let nvars = self
            .coeffs
            .first()
            .map(|c| c.nvars())
            .unwrap_or(0);
        let field = self
            .coeffs
            .first()
            .map(|c| c.field().clone())
            .expect("nonempty coefficient list");
        let mut acc = SparsePolynomial::zero(&field, nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; nvars];
            exps[self.var] = i as u32;
            let xn = SparsePolynomial::monomial(&field, nvars, exps, field.one());
            acc = &acc + &(c * &xn);
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
        if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
            self.coeffs.clear();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> &SparsePolynomial {
        self.coeffs.last().expect("nonzero")
    }

    pub fn scale(&self, c: &SparsePolynomial) -> UPoly {
        let mut out = UPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        out.trim();
        out
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let nvars = self
            .coeffs
            .first()
            .or(other.coeffs.first())
            .map(|c| c.nvars())
            .unwrap_or(0);
        let field = self
            .coeffs
            .first()
            .or(other.coeffs.first())
            .map(|c| c.field().clone());
        let field = match field {
            Some(f) => f,
            None => return UPoly { var: self.var, coeffs: vec![] },
        };
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = SparsePolynomial::zero(&field, nvars);
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = other.coeffs.get(i).unwrap_or(&zero);
            coeffs.push(a - b);
        }
        let mut out = UPoly { var: self.var, coeffs };
        out.trim();
        out
    }

    /// Multiplies by `var^k`.
    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let nvars = self.coeffs[0].nvars();
        let field = self.coeffs[0].field().clone();
        let mut coeffs = vec![SparsePolynomial::zero(&field, nvars); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { var: self.var, coeffs }
    }

    /// Divides every coefficient exactly by `d`.
    pub fn div_coeffs_exact(&self, d: &SparsePolynomial) -> Result<UPoly> {
        let coeffs: Option<Vec<SparsePolynomial>> =
            self.coeffs.iter().map(|c| c.div_exact(d)).collect();
        coeffs
            .map(|coeffs| UPoly { var: self.var, coeffs })
            .ok_or_else(|| Error::Internal("inexact coefficient division".into()))
    }
}

/// Pseudo-remainder: returns `R` with `lc(B)^(deg A - deg B + 1) * A = Q*B + R`
/// and `deg R < deg B`. Requires `deg A >= deg B` and `B` nonzero.
pub(crate) fn prem(a: &UPoly, b: &UPoly) -> UPoly {
    assert!(!b.is_zero());
    let d = a.deg() as i64 - b.deg() as i64;
    assert!(d >= 0);
    let lb = b.lead().clone();
    let mut r = a.clone();
    let mut e = d + 1;
    while !r.is_zero() && r.deg() >= b.deg() {
        let shift = r.deg() - b.deg();
        let lr = r.lead().clone();
        r = r.scale(&lb).sub(&b.scale(&lr).shift_up(shift));
        e -= 1;
    }
    if e > 0 {
        let mut factor = lb.clone();
        for _ in 1..e {
            factor = &factor * &lb;
        }
        r = r.scale(&factor);
    }
    r
}

/// Content of a polynomial viewed as univariate in `var`: the gcd of its
/// polynomial coefficients.
pub(crate) fn content_in(p: &SparsePolynomial, var: usize) -> Result<SparsePolynomial> {
    let u = UPoly::from_sparse(p, var);
    let mut acc = SparsePolynomial::zero(p.field(), p.nvars());
    for c in &u.coeffs {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c)?;
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Multivariate gcd over a field, normalized so the graded-lexicographic
/// leading coefficient is 1. `gcd(0, 0)` is 0.
pub fn gcd(f: &SparsePolynomial, g: &SparsePolynomial) -> Result<SparsePolynomial> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch(
            f.field().label(),
            g.field().label(),
        ));
    }
    if f.nvars() != g.nvars() {
        return Err(Error::ArityMismatch(f.nvars(), g.nvars()));
    }
    if f.is_zero() {
        return if g.is_zero() { Ok(g.clone()) } else { g.monic() };
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Ok(SparsePolynomial::one(f.field(), f.nvars()));
    }
    // pick a variable both polynomials use, minimizing the larger degree
    let var = (0..f.nvars())
        .filter(|&v| f.degree_in(v) > 0 && g.degree_in(v) > 0)
        .min_by_key(|&v| f.degree_in(v).max(g.degree_in(v)));
    let var = match var {
        Some(v) => v,
        // no shared variable: any common divisor is constant
        None => return Ok(SparsePolynomial::one(f.field(), f.nvars())),
    };
    let cf = content_in(f, var)?;
    let cg = content_in(g, var)?;
    let c = gcd(&cf, &cg)?;
    let pf = normalize_scalars(f.div_exact(&cf).expect("content divides"))?;
    let pg = normalize_scalars(g.div_exact(&cg).expect("content divides"))?;
    let mut a = UPoly::from_sparse(&pf, var);
    let mut b = UPoly::from_sparse(&pg, var);
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b);
        if r.is_zero() {
            break;
        }
        if r.deg() == 0 {
            // coprime as univariate polynomials in var
            return c.monic();
        }
        let rs = r.to_sparse();
        let cr = content_in(&rs, var)?;
        let pr = normalize_scalars(rs.div_exact(&cr).expect("content divides"))?;
        a = b;
        b = UPoly::from_sparse(&pr, var);
    }
    let bs = b.to_sparse();
    let cb = content_in(&bs, var)?;
    let pp = bs.div_exact(&cb).expect("content divides");
    (&c * &pp).monic()
}

/// True when `g` is a product of distinct irreducible factors.
pub fn is_squarefree(f: &SparsePolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroInput("squarefree test".into()));
    }
    if f.is_constant() {
        return Ok(true);
    }
    let g = jacobian_gcd(f)?;
    Ok(g.is_constant())
}

/// Product of the distinct irreducible factors of `f`, computed via the
/// gcd of `f` with its partial derivatives and normalized monic.
pub fn squarefree_part(f: &SparsePolynomial) -> Result<SparsePolynomial> {
    if f.is_zero() {
        return Err(Error::ZeroInput("squarefree part".into()));
    }
    let p = f.field().characteristic();
    if p != 0 && p <= f.total_degree() as u64 {
        return Err(Error::InvalidParameter(format!(
            "characteristic {p} too small for degree {}",
            f.total_degree()
        )));
    }
    if f.is_constant() {
        return Ok(SparsePolynomial::one(f.field(), f.nvars()));
    }
    // homogeneous trivariate inputs reduce to a bivariate computation,
    // which keeps the recursive content gcds univariate
    if f.nvars() == 3 && f.homogeneous_degree().is_some() {
        return squarefree_part_homogeneous3(f);
    }
    let g = jacobian_gcd(f)?;
    f.div_exact(&g)
        .ok_or_else(|| Error::Internal("repeated-factor part does not divide".into()))?
        .monic()
}

/// Squarefree part of a homogeneous trivariate polynomial: strip the
/// coordinate-variable factors, dehomogenize (degree-preserving once the
/// factors are gone), reduce in two variables, and homogenize back.
fn squarefree_part_homogeneous3(f: &SparsePolynomial) -> Result<SparsePolynomial> {
    let field = f.field().clone();
    let mut core = f.clone();
    let mut coordinate_factors: Vec<usize> = vec![];
    for var in 0..3 {
        let min_exp = core
            .terms()
            .iter()
            .map(|(m, _)| m.0[var])
            .min()
            .unwrap_or(0);
        if min_exp > 0 {
            let mut e = vec![0u32; 3];
            e[var] = min_exp;
            let mono = SparsePolynomial::monomial(&field, 3, e, field.one());
            core = core.div_exact(&mono).expect("monomial content");
            coordinate_factors.push(var);
        }
    }
    let mut sf = if core.is_constant() {
        SparsePolynomial::one(&field, 3)
    } else {
        // no variable divides the core, so dehomogenizing with respect to
        // the last one preserves total degree and factor structure
        let affine = core.dehomogenize(2, &field.one())?.drop_var(2)?;
        let g = jacobian_gcd(&affine)?;
        let reduced = affine
            .div_exact(&g)
            .ok_or_else(|| Error::Internal("repeated-factor part does not divide".into()))?;
        reduced
            .insert_var(2)
            .homogenize(2, reduced.total_degree())?
    };
    for var in coordinate_factors {
        let v = SparsePolynomial::var(&field, 3, var);
        sf = &sf * &v;
    }
    sf.monic()
}

/// `gcd(f, df/dx_1, ..., df/dx_n)`: the repeated-factor part in
/// characteristic zero.
fn jacobian_gcd(f: &SparsePolynomial) -> Result<SparsePolynomial> {
    let mut acc = f.clone();
    for v in 0..f.nvars() {
        if f.degree_in(v) == 0 {
            continue;
        }
        let d = f.differentiate(v)?;
        acc = gcd(&acc, &d)?;
        if acc.is_constant() {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::qpoly;

    #[test]
    fn gcd_of_products() {
        let vars = ["x", "y"];
        let a = qpoly("(x+y)*(x-y)", &vars);
        let b = qpoly("(x+y)*(x+2*y)", &vars);
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, qpoly("x+y", &vars));
    }

    #[test]
    fn coprime_gcd_is_one() {
        let vars = ["x", "y"];
        let a = qpoly("x^2 - y", &vars);
        let b = qpoly("x + 1", &vars);
        assert_eq!(gcd(&a, &b).unwrap(), qpoly("1", &vars));
        // disjoint variable supports
        let a = qpoly("x", &vars);
        let b = qpoly("y", &vars);
        assert_eq!(gcd(&a, &b).unwrap(), qpoly("1", &vars));
    }

    #[test]
    fn squarefree_part_examples() {
        let vars = ["x"];
        // (x+1)^2 (x-2) -> (x+1)(x-2) up to scalar
        let f = qpoly("(x+1)^2*(x-2)", &vars);
        let sf = squarefree_part(&f).unwrap();
        assert!(sf.proportional_to(&qpoly("(x+1)*(x-2)", &vars)));
        // x^3 -> x
        let f = qpoly("x^3", &vars);
        assert_eq!(squarefree_part(&f).unwrap(), qpoly("x", &vars));
        // z^4 + w^4 is already squarefree
        let zw = ["z", "w"];
        let f = qpoly("z^4 + w^4", &zw);
        assert_eq!(squarefree_part(&f).unwrap(), f);
        assert!(is_squarefree(&f).unwrap());
        assert!(!is_squarefree(&qpoly("(x+1)^2*(x-2)", &vars)).unwrap());
    }

    #[test]
    fn squarefree_part_of_powers() {
        let vars = ["x", "y"];
        let f = qpoly("x^2 - y^3", &vars);
        for n in 1..4u32 {
            let sf = squarefree_part(&f.pow(n)).unwrap();
            assert!(sf.proportional_to(&f));
        }
    }

    #[test]
    fn zero_input_rejected() {
        let z = SparsePolynomial::zero(&crate::field::Field::Rational, 2);
        assert!(squarefree_part(&z).is_err());
    }
}
