//! Factorization over prime fields: squarefree / distinct-degree /
//! Cantor-Zassenhaus for univariate polynomials, and a bivariate
//! irreducibility decision procedure based on Hensel lifting along one
//! variable with exhaustive factor recombination.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::dense::DensePoly;
use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::poly::SparsePolynomial;
use crate::Result;

/// Full factorization of a univariate polynomial over `F_p`, `p` odd.
/// Returns the leading unit and monic irreducible factors with
/// multiplicities, sorted for determinism.
pub fn factor_fp(
    f: &DensePoly,
    rng: &mut impl Rng,
) -> Result<(Coeff, Vec<(DensePoly, usize)>)> {
    let p = match f.field() {
        Field::Prime(p) => *p,
        other => {
            return Err(Error::FieldMismatch(other.label(), "F_p".into()));
        }
    };
    if f.is_zero() {
        return Err(Error::ZeroInput("factorization".into()));
    }
    let unit = f.leading();
    let monic = f.monic()?;
    let mut out: Vec<(DensePoly, usize)> = vec![];
    for (g, mult) in squarefree_fp(&monic, p)? {
        for (h, d) in distinct_degree(&g, p)? {
            for irr in equal_degree(&h, d, p, rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| cmp_dense(&a.0, &b.0));
    Ok((unit, out))
}

fn cmp_dense(a: &DensePoly, b: &DensePoly) -> std::cmp::Ordering {
    let key = |p: &DensePoly| {
        let mut v: Vec<String> = p.coeffs().iter().map(|c| format!("{c:?}")).collect();
        v.reverse();
        (p.coeffs().len(), v)
    };
    key(a).cmp(&key(b))
}

/// Squarefree decomposition over `F_p` (monic input), handling p-th powers.
fn squarefree_fp(f: &DensePoly, p: u64) -> Result<Vec<(DensePoly, usize)>> {
    if f.is_constant() {
        return Ok(vec![]);
    }
    let mut out = vec![];
    let df = f.derivative();
    if df.is_zero() {
        // f = v(x^p) = (v-with-exponents-divided)^p over F_p
        let root = pth_root(f, p);
        for (g, m) in squarefree_fp(&root, p)? {
            out.push((g, m * p as usize));
        }
        return Ok(out);
    }
    let c0 = f.gcd(&df);
    let mut w = f.div_exact(&c0)?;
    let mut c = c0;
    let mut i = 1usize;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y)?;
        if !z.is_constant() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_constant() {
        let root = pth_root(&c, p);
        for (g, m) in squarefree_fp(&root, p)? {
            out.push((g, m * p as usize));
        }
    }
    Ok(out)
}

/// p-th root of a polynomial in `F_p[x^p]`; Frobenius fixes the prime field
/// so only the exponents divide.
fn pth_root(f: &DensePoly, p: u64) -> DensePoly {
    let field = f.field().clone();
    let mut coeffs = vec![];
    for (i, c) in f.coeffs().iter().enumerate() {
        if i as u64 % p == 0 {
            coeffs.push(c.clone());
        } else {
            debug_assert!(field.is_zero(c));
        }
    }
    DensePoly::from_coeffs(&field, coeffs)
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// returns `(product of irreducibles of degree d, d)` pairs.
fn distinct_degree(f: &DensePoly, p: u64) -> Result<Vec<(DensePoly, usize)>> {
    let field = f.field().clone();
    let mut out = vec![];
    let mut fstar = f.clone();
    let x = DensePoly::x(&field);
    let mut h = x.rem(&fstar)?;
    let pe = BigUint::from(p);
    let mut i = 0usize;
    while fstar.deg() >= 2 * (i + 1) {
        i += 1;
        h = h.pow_mod(&pe, &fstar)?;
        let g = h.sub(&x).gcd(&fstar);
        if !g.is_constant() {
            out.push((g.clone(), i));
            fstar = fstar.div_exact(&g)?;
            h = h.rem(&fstar)?;
        }
    }
    if !fstar.is_constant() {
        let d = fstar.deg();
        out.push((fstar, d));
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting: factors a monic squarefree
/// product of degree-`d` irreducibles.
fn equal_degree(
    f: &DensePoly,
    d: usize,
    p: u64,
    rng: &mut impl Rng,
) -> Result<Vec<DensePoly>> {
    if f.deg() == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field().clone();
    let exponent = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a = random_poly(&field, f.deg(), p, rng);
        if a.is_constant() {
            continue;
        }
        let g1 = a.gcd(f);
        let split = if !g1.is_constant() && g1.deg() < f.deg() {
            Some(g1)
        } else {
            let b = a.pow_mod(&exponent, f)?.sub(&DensePoly::one(&field));
            let g = b.gcd(f);
            if !g.is_constant() && g.deg() < f.deg() {
                Some(g)
            } else {
                None
            }
        };
        if let Some(g) = split {
            let rest = f.div_exact(&g)?;
            let mut left = equal_degree(&g, d, p, rng)?;
            let mut right = equal_degree(&rest, d, p, rng)?;
            left.append(&mut right);
            return Ok(left);
        }
    }
}

fn random_poly(field: &Field, below_deg: usize, p: u64, rng: &mut impl Rng) -> DensePoly {
    let coeffs: Vec<Coeff> = (0..below_deg)
        .map(|_| Coeff::Mod(rng.gen_range(0..p)))
        .collect();
    DensePoly::from_coeffs(field, coeffs)
}

// ---------------------------------------------------------------------------
// bivariate irreducibility over F_p
// ---------------------------------------------------------------------------

/// Polynomial in `y` whose coefficients are univariate polynomials in `x`
/// over `F_p`, truncated at `x^prec` during lifting.
#[derive(Debug, Clone, PartialEq)]
struct YPoly {
    field: Field,
    /// index = power of y
    coeffs: Vec<DensePoly>,
}

impl YPoly {
    fn zero(field: &Field) -> YPoly {
        YPoly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn xdeg(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    fn truncate_x(&self, prec: usize) -> YPoly {
        let mut out = YPoly {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    DensePoly::from_coeffs(
                        &self.field,
                        c.coeffs().iter().take(prec).cloned().collect(),
                    )
                })
                .collect(),
        };
        out.trim();
        out
    }

    fn from_univariate(u: &DensePoly) -> YPoly {
        let field = u.field().clone();
        YPoly {
            coeffs: u
                .coeffs()
                .iter()
                .map(|c| DensePoly::constant(&field, c.clone()))
                .collect(),
            field,
        }
    }

    fn add(&self, other: &YPoly) -> YPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = DensePoly::zero(&self.field);
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = other.coeffs.get(i).unwrap_or(&zero);
            coeffs.push(a.add(b));
        }
        let mut out = YPoly {
            field: self.field.clone(),
            coeffs,
        };
        out.trim();
        out
    }

    fn sub(&self, other: &YPoly) -> YPoly {
        self.add(&other.neg())
    }

    fn neg(&self) -> YPoly {
        YPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    fn mul(&self, other: &YPoly, prec: usize) -> YPoly {
        if self.is_zero() || other.is_zero() {
            return YPoly::zero(&self.field);
        }
        let mut coeffs =
            vec![DensePoly::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        let mut out = YPoly {
            field: self.field.clone(),
            coeffs,
        };
        out.trim();
        out.truncate_x(prec)
    }

    fn is_monic_in_y(&self) -> bool {
        !self.is_zero() && self.coeffs.last().unwrap() == &DensePoly::one(&self.field)
    }

    /// Division by a divisor monic in `y`, with x-truncation.
    fn divmod(&self, divisor: &YPoly, prec: usize) -> (YPoly, YPoly) {
        assert!(divisor.is_monic_in_y());
        let dl = divisor.coeffs.len();
        let mut rem = self.truncate_x(prec);
        let mut quo = YPoly::zero(&self.field);
        while !rem.is_zero() && rem.coeffs.len() >= dl {
            let shift = rem.coeffs.len() - dl;
            let c = rem.coeffs.last().unwrap().clone();
            let mut qterm = YPoly::zero(&self.field);
            qterm.coeffs = vec![DensePoly::zero(&self.field); shift];
            qterm.coeffs.push(c);
            quo = quo.add(&qterm);
            let prod = qterm.mul(divisor, prec);
            rem = rem.sub(&prod).truncate_x(prec);
            if !rem.is_zero() && rem.coeffs.len() > shift + dl - 1 {
                // leading term must have cancelled exactly
                rem.coeffs.truncate(shift + dl - 1);
                rem.trim();
            }
        }
        (quo, rem)
    }
}

/// One quadratic Hensel step: refines `f = g*h (mod x^m)` with Bezout data
/// `s*g + t*h = 1 (mod x^m)` to the same relations mod `x^(2m)`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &YPoly,
    g: &YPoly,
    h: &YPoly,
    s: &YPoly,
    t: &YPoly,
    m: usize,
) -> (YPoly, YPoly, YPoly, YPoly) {
    let prec = 2 * m;
    let e = f
        .truncate_x(prec)
        .sub(&g.mul(h, prec))
        .truncate_x(prec);
    let (q, r) = s.mul(&e, prec).divmod(h, prec);
    let g_new = g.add(&t.mul(&e, prec)).add(&q.mul(g, prec)).truncate_x(prec);
    let h_new = h.add(&r).truncate_x(prec);
    let one = YPoly::from_univariate(&DensePoly::one(&f.field));
    let b = s
        .mul(&g_new, prec)
        .add(&t.mul(&h_new, prec))
        .sub(&one)
        .truncate_x(prec);
    let (c, d) = s.mul(&b, prec).divmod(&h_new, prec);
    let s_new = s.sub(&d).truncate_x(prec);
    let t_new = t
        .sub(&t.mul(&b, prec))
        .sub(&c.mul(&g_new, prec))
        .truncate_x(prec);
    (g_new, h_new, s_new, t_new)
}

/// Lifts the coprime factorization `f = g0*h0 (mod x)` to `mod x^target`.
fn lift_pair(f: &YPoly, g0: &DensePoly, h0: &DensePoly, target: usize) -> Result<(YPoly, YPoly)> {
    let (d, s0, t0) = g0.extended_gcd(h0);
    if !d.is_constant() || d.is_zero() {
        return Err(Error::Internal("base factors not coprime".into()));
    }
    let mut g = YPoly::from_univariate(g0);
    let mut h = YPoly::from_univariate(h0);
    let mut s = YPoly::from_univariate(&s0);
    let mut t = YPoly::from_univariate(&t0);
    let mut m = 1usize;
    while m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m *= 2;
    }
    Ok((g, h))
}

/// Lifts all base factors of `f(0,y)` to `mod x^target` via a splitting
/// tree. `f` must be monic in `y`.
fn lift_tree(f: &YPoly, base: &[DensePoly], target: usize) -> Result<Vec<YPoly>> {
    if base.len() == 1 {
        return Ok(vec![f.truncate_x(target)]);
    }
    let mid = base.len() / 2;
    let field = f.field.clone();
    let mut g0 = DensePoly::one(&field);
    for b in &base[..mid] {
        g0 = g0.mul(b);
    }
    let mut h0 = DensePoly::one(&field);
    for b in &base[mid..] {
        h0 = h0.mul(b);
    }
    let (g, h) = lift_pair(f, &g0, &h0, target)?;
    let mut left = lift_tree(&g, &base[..mid], target)?;
    let mut right = lift_tree(&h, &base[mid..], target)?;
    left.append(&mut right);
    Ok(left)
}

fn ypoly_from_sparse(f: &SparsePolynomial) -> YPoly {
    assert_eq!(f.nvars(), 2);
    let field = f.field().clone();
    let ydeg = f.degree_in(1) as usize;
    let mut coeffs = vec![vec![]; ydeg + 1];
    for (m, c) in f.terms() {
        let (xe, ye) = (m.0[0] as usize, m.0[1] as usize);
        if coeffs[ye].len() <= xe {
            coeffs[ye].resize(xe + 1, field.zero());
        }
        coeffs[ye][xe] = c.clone();
    }
    let mut out = YPoly {
        field: field.clone(),
        coeffs: coeffs
            .into_iter()
            .map(|v| DensePoly::from_coeffs(&field, v))
            .collect(),
    };
    out.trim();
    out
}

/// Decides whether a squarefree bivariate polynomial over `F_p` is
/// irreducible. `None` means this prime or coordinate choice was unusable
/// (inseparable reduction, no good base point, and so on) — the caller
/// should retry elsewhere.
pub fn bivariate_irreducible_fp(
    f: &SparsePolynomial,
    rng: &mut impl Rng,
) -> Result<Option<bool>> {
    let p = match f.field() {
        Field::Prime(p) => *p,
        other => return Err(Error::FieldMismatch(other.label(), "F_p".into())),
    };
    if f.nvars() != 2 {
        return Err(Error::UnsupportedArity(f.nvars()));
    }
    if f.is_zero() || f.is_constant() {
        return Err(Error::InvalidParameter("nonconstant input required".into()));
    }
    let field = f.field().clone();
    let d = f.total_degree();
    if p <= 4 * d as u64 {
        return Ok(None);
    }
    // univariate content in either variable is an honest factor
    for var in 0..2 {
        if f.degree_in(var) == 0 {
            // effectively univariate in the other variable
            let other = 1 - var;
            let dense = DensePoly::from_sparse(&strip_unused(f, var, other), 0)?;
            let (_, factors) = factor_fp(&dense, rng)?;
            let nontrivial = factors.iter().map(|(_, m)| m).sum::<usize>();
            return Ok(Some(nontrivial == 1 && factors[0].1 == 1));
        }
    }
    if !crate::gcd::content_in(f, 1)?.is_constant()
        || !crate::gcd::content_in(f, 0)?.is_constant()
    {
        return Ok(Some(false));
    }

    // shear x -> x + c*y so that the coefficient of y^d is a nonzero scalar
    let top = f.homogeneous_part(d);
    let mut sheared = None;
    for c in 0..(2 * d as u64 + 2).min(p) {
        let val = top.eval(&[Coeff::Mod(c % p), field.one()])?;
        if !field.is_zero(&val) {
            let x = SparsePolynomial::var(&field, 2, 0);
            let y = SparsePolynomial::var(&field, 2, 1);
            let image = &x + &y.scale(&Coeff::Mod(c % p));
            let g = f.substitute_var(0, &image)?;
            let inv = field.inv(&val)?;
            sheared = Some(g.scale(&inv));
            break;
        }
    }
    let g = match sheared {
        Some(g) => g,
        None => return Ok(None),
    };
    debug_assert_eq!(g.degree_in(1), d);

    // find a base point a with squarefree specialization g(a, y)
    let disc = crate::resultant::resultant(&g, &g.differentiate(1)?, 1)?;
    if disc.is_zero() {
        return Ok(None);
    }
    let disc_dense = DensePoly::from_sparse(&strip_unused(&disc, 1, 0), 0)?;
    let mut base_point = None;
    for a in 0..p.min(disc_dense.coeffs().len() as u64 * 4 + 16) {
        if !field.is_zero(&disc_dense.eval(&Coeff::Mod(a))) {
            base_point = Some(a);
            break;
        }
    }
    let a = match base_point {
        Some(a) => a,
        None => return Ok(None),
    };
    let x_shift = &SparsePolynomial::var(&field, 2, 0)
        + &SparsePolynomial::constant(&field, 2, Coeff::Mod(a));
    let g = g.substitute_var(0, &x_shift)?;

    let gy = ypoly_from_sparse(&g);
    debug_assert!(gy.is_monic_in_y());
    let base = DensePoly::from_coeffs(
        &field,
        gy.coeffs.iter().map(|c| c.coeff(0)).collect(),
    );
    let (_, base_factors) = factor_fp(&base, rng)?;
    debug_assert!(base_factors.iter().all(|(_, m)| *m == 1));
    let factors: Vec<DensePoly> = base_factors.into_iter().map(|(f, _)| f).collect();
    if factors.len() == 1 {
        return Ok(Some(true));
    }

    // lift to x-precision beyond any true factor's x-degree
    let xdeg = gy.xdeg();
    let mut target = 1usize;
    while target < xdeg + 1 {
        target *= 2;
    }
    let lifted = lift_tree(&gy, &factors, target)?;

    // exhaustive recombination: any proper subset whose product divides g
    // exhibits a factor
    let k = lifted.len();
    for size in 1..=k / 2 {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut cand = YPoly::from_univariate(&DensePoly::one(&field));
            for &i in &subset {
                cand = cand.mul(&lifted[i], target);
            }
            if cand.xdeg() <= xdeg {
                let (_, rem) = gy.divmod(&cand, 2 * target.max(xdeg + 1));
                if rem.is_zero() {
                    return Ok(Some(false));
                }
            }
            // next subset of the same size
            let mut i = size;
            loop {
                if i == 0 {
                    subset.clear();
                    break;
                }
                i -= 1;
                if subset[i] != i + k - size {
                    subset[i] += 1;
                    for j in i + 1..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
            if subset.is_empty() {
                break;
            }
        }
    }
    Ok(Some(true))
}

/// Drops variable `unused` and keeps `kept` as the single variable.
fn strip_unused(f: &SparsePolynomial, unused: usize, kept: usize) -> SparsePolynomial {
    debug_assert_eq!(f.degree_in(unused), 0);
    debug_assert_ne!(unused, kept);
    f.drop_var(unused).expect("variable is unused")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn univariate_factor_product_reassembles() {
        let f = fp(32003);
        // (x^2+1)(x+3)^2 * 5
        let p = DensePoly::from_i64(&f, &[1, 0, 1])
            .mul(&DensePoly::from_i64(&f, &[3, 1]).pow(2))
            .scale(&f.from_i64(5));
        let (unit, factors) = factor_fp(&p, &mut rng()).unwrap();
        let mut prod = DensePoly::constant(&f, unit);
        for (g, m) in &factors {
            prod = prod.mul(&g.pow(*m as u32));
        }
        assert_eq!(prod, p);
        assert_eq!(factors.iter().map(|(_, m)| m).sum::<usize>(), 3);
    }

    #[test]
    fn inseparable_power_factored() {
        let f = fp(5);
        // (x+1)^5 has zero derivative over F_5
        let p = DensePoly::from_i64(&f, &[1, 1]).pow(5);
        let (_, factors) = factor_fp(&p, &mut rng()).unwrap();
        assert_eq!(factors, vec![(DensePoly::from_i64(&f, &[1, 1]), 5)]);
    }

    #[test]
    fn quadratic_nonresidue_is_irreducible() {
        let f = fp(32003);
        // x^2 - 3 where 3 is a QR mod 32003? just check consistency:
        // factor count matches gcd structure either way
        let p = DensePoly::from_i64(&f, &[-3, 0, 1]);
        let (_, factors) = factor_fp(&p, &mut rng()).unwrap();
        let total: usize = factors.iter().map(|(g, m)| g.deg() * m).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn bivariate_split_detected() {
        let f = fp(32003);
        // y^2 - x^2 = (y-x)(y+x)
        let p = SparsePolynomial::from_int_terms(&f, 2, &[(&[0, 2], 1), (&[2, 0], -1)]);
        assert_eq!(
            bivariate_irreducible_fp(&p, &mut rng()).unwrap(),
            Some(false)
        );
    }

    #[test]
    fn bivariate_elliptic_irreducible() {
        let f = fp(32003);
        // y^2 - x^3 - x
        let p = SparsePolynomial::from_int_terms(
            &f,
            2,
            &[(&[0, 2], 1), (&[3, 0], -1), (&[1, 0], -1)],
        );
        assert_eq!(
            bivariate_irreducible_fp(&p, &mut rng()).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn cuspidal_cubic_mod_five() {
        // y^2 - x^3 over F_5: the derived modular oracle
        let f = fp(5);
        let p = SparsePolynomial::from_int_terms(&f, 2, &[(&[0, 2], 1), (&[3, 0], -1)]);
        // p = 5 is below the size guard, so widen it via a bigger prime too
        let r = bivariate_irreducible_fp(&p, &mut rng()).unwrap();
        assert!(r.is_none() || r == Some(true));
        let f = fp(32003);
        let p = SparsePolynomial::from_int_terms(&f, 2, &[(&[0, 2], 1), (&[3, 0], -1)]);
        assert_eq!(
            bivariate_irreducible_fp(&p, &mut rng()).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn bivariate_with_univariate_content() {
        let f = fp(32003);
        // x*y = content x times y
        let p = SparsePolynomial::from_int_terms(&f, 2, &[(&[1, 1], 1)]);
        assert_eq!(
            bivariate_irreducible_fp(&p, &mut rng()).unwrap(),
            Some(false)
        );
    }
}
