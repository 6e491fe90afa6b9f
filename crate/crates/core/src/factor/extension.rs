//! Factorization over a simple extension `Q[t]/(m)` by Trager's norm
//! method: shift until the norm is squarefree, factor the norm over the
//! rationals, and pull each factor back with a gcd over the extension.

use num_traits::Zero;
use rand::Rng;

use crate::dense::DensePoly;
use crate::error::Error;
use crate::factor::rational::factor_rational;
use crate::field::{Coeff, Field};
use crate::poly::SparsePolynomial;
use crate::resultant::resultant;
use crate::Result;

const SHIFT_BUDGET: i64 = 64;

/// Factors a univariate polynomial over an extension field into monic
/// irreducible factors with multiplicities, plus the leading unit.
pub fn factor_extension(
    f: &DensePoly,
    rng: &mut impl Rng,
) -> Result<(Coeff, Vec<(DensePoly, usize)>)> {
    let ext = match f.field() {
        Field::Extension(e) => e.clone(),
        other => return Err(Error::FieldMismatch(other.label(), "Q[t]/(m)".into())),
    };
    if f.is_zero() {
        return Err(Error::ZeroInput("factorization".into()));
    }
    let unit = f.leading();
    if f.is_constant() {
        return Ok((unit, vec![]));
    }
    let field = f.field().clone();
    let (_, squarefree) = f.squarefree_decomposition()?;
    let mut out: Vec<(DensePoly, usize)> = vec![];
    for (g, mult) in squarefree {
        for factor in trager_squarefree(&g, &field, ext.degree(), rng)? {
            out.push((factor, mult));
        }
    }
    out.sort_by(|a, b| {
        let key = |p: &DensePoly| {
            let mut v: Vec<String> = p.coeffs().iter().map(|c| format!("{c:?}")).collect();
            v.reverse();
            (p.coeffs().len(), v)
        };
        key(&a.0).cmp(&key(&b.0))
    });
    Ok((unit, out))
}

fn trager_squarefree(
    h: &DensePoly,
    field: &Field,
    ext_degree: usize,
    rng: &mut impl Rng,
) -> Result<Vec<DensePoly>> {
    if h.deg() == 1 {
        return Ok(vec![h.clone()]);
    }
    let gen = field.generator()?;
    for s in 0..SHIFT_BUDGET {
        let shift = field.mul(&field.from_i64(-s), &gen);
        let hs = h.shift(&shift); // hs(y) = h(y - s*t)
        let norm = norm_to_rationals(&hs, field, ext_degree)?;
        if !norm.is_squarefree() {
            continue;
        }
        let (_, rational_factors) = factor_rational(&norm, rng)?;
        let mut parts = vec![];
        let mut degree_seen = 0usize;
        for (nf, _) in rational_factors {
            let lifted = lift_to_extension(&nf, field);
            let g = hs.gcd(&lifted);
            if !g.is_constant() {
                degree_seen += g.deg();
                // undo the shift: factors of h are g(y + s*t)
                let unshift = field.mul(&field.from_i64(s), &gen);
                parts.push(g.shift(&unshift).monic()?);
            }
        }
        if degree_seen != h.deg() {
            return Err(Error::Internal(
                "norm factorization did not account for the full degree".into(),
            ));
        }
        return Ok(parts);
    }
    Err(Error::Internal(
        "no shift produced a squarefree norm".into(),
    ))
}

/// The norm `Res_t(m(t), h(t, y))` as a rational polynomial in `y`.
fn norm_to_rationals(h: &DensePoly, field: &Field, ext_degree: usize) -> Result<DensePoly> {
    let ext = match field {
        Field::Extension(e) => e,
        _ => unreachable!(),
    };
    let q = Field::Rational;
    // variables: 0 = t, 1 = y
    let mut h2 = SparsePolynomial::zero(&q, 2);
    for (i, c) in h.coeffs().iter().enumerate() {
        let vec = match c {
            Coeff::Ext(v) => v,
            _ => unreachable!(),
        };
        for (j, r) in vec.iter().enumerate() {
            if !r.is_zero() {
                h2 = &h2
                    + &SparsePolynomial::monomial(
                        &q,
                        2,
                        vec![j as u32, i as u32],
                        Coeff::Rat(r.clone()),
                    );
            }
        }
    }
    let mut m2 = SparsePolynomial::zero(&q, 2);
    for (j, r) in ext.modulus.iter().enumerate() {
        if !r.is_zero() {
            m2 = &m2
                + &SparsePolynomial::monomial(&q, 2, vec![j as u32, 0], Coeff::Rat(r.clone()));
        }
    }
    let res = resultant(&m2, &h2, 0)?;
    debug_assert_eq!(res.degree_in(0), 0);
    let res1 = res.drop_var(0)?;
    let norm = DensePoly::from_sparse(&res1, 0)?;
    debug_assert!(
        norm.is_zero() || norm.deg() <= ext_degree * h.deg(),
        "norm degree bound"
    );
    Ok(norm)
}

/// Embeds a rational polynomial into the extension field.
pub fn lift_to_extension(f: &DensePoly, field: &Field) -> DensePoly {
    DensePoly::from_coeffs(
        field,
        f.coeffs()
            .iter()
            .map(|c| match c {
                Coeff::Rat(r) => field.from_rational(r.clone()),
                _ => unreachable!(),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn splits_over_the_sixth_root_field() {
        // y^2 - y + 1 has roots t and 1 - t in Q[t]/(t^2 - t + 1)
        let k = Field::sixth_root_extension();
        let f = DensePoly::from_i64(&k, &[1, -1, 1]);
        let (_, factors) = factor_extension(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 2);
        let t = k.generator().unwrap();
        let roots: Vec<Coeff> = factors
            .iter()
            .map(|(g, _)| k.neg(&g.coeff(0)))
            .collect();
        assert!(roots.contains(&t));
        assert!(roots.contains(&k.sub(&k.one(), &t)));
    }

    #[test]
    fn stays_irreducible_when_it_should() {
        // y^2 - 2 does not split over Q[t]/(t^2 - t + 1)
        let k = Field::sixth_root_extension();
        let f = DensePoly::from_i64(&k, &[-2, 0, 1]);
        let (_, factors) = factor_extension(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.deg(), 2);
    }

    #[test]
    fn cubic_with_mixed_split() {
        // y^3 + 1 = (y + 1)(y^2 - y + 1), and the quadratic splits over
        // the sixth-root field, so three linear factors in total
        let k = Field::sixth_root_extension();
        let f = DensePoly::from_i64(&k, &[1, 0, 0, 1]);
        let (_, factors) = factor_extension(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 3);
        assert!(factors.iter().all(|(g, _)| g.deg() == 1));
    }

    #[test]
    fn multiplicities_preserved() {
        let k = Field::sixth_root_extension();
        // (y - t)^2 (y + 1)
        let t = k.generator().unwrap();
        let lin = DensePoly::from_coeffs(&k, vec![k.neg(&t), k.one()]);
        let f = lin.pow(2).mul(&DensePoly::from_i64(&k, &[1, 1]));
        let (_, factors) = factor_extension(&f, &mut rng()).unwrap();
        let mut mults: Vec<usize> = factors.iter().map(|(_, m)| *m).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
    }
}
