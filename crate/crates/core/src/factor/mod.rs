//! Factorization and irreducibility.
//!
//! Univariate factorization is complete over every supported field
//! (Cantor-Zassenhaus over prime fields, Zassenhaus lifting over the
//! rationals, Trager's norm method over extensions). Multivariate
//! irreducibility over the rationals is decided one-sidedly: "irreducible"
//! and "reducible" are certificates, "unknown" is honest failure.

pub mod extension;
pub mod modp;
pub mod rational;

use rand::Rng;

use crate::dense::DensePoly;
use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::gcd;
use crate::poly::SparsePolynomial;
use crate::Result;

pub use modp::{bivariate_irreducible_fp, factor_fp};
pub use rational::{factor_rational, rational_roots, WORKING_PRIMES};
pub use extension::{factor_extension, lift_to_extension};

/// Outcome of [`irreducibility_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    /// Certified irreducible over the rationals.
    Irreducible,
    /// A factor (or repeated factor) was exhibited.
    Reducible,
    /// Every attempted certificate was inconclusive.
    Unknown,
}

impl std::fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Irreducibility::Irreducible => write!(f, "irreducible"),
            Irreducibility::Reducible => write!(f, "reducible"),
            Irreducibility::Unknown => write!(f, "unknown"),
        }
    }
}

/// Factors a univariate polynomial over its field of definition into the
/// leading unit and monic irreducible factors with multiplicities.
pub fn factor_univariate(
    f: &DensePoly,
    rng: &mut impl Rng,
) -> Result<(Coeff, Vec<(DensePoly, usize)>)> {
    match f.field() {
        Field::Rational => factor_rational(f, rng),
        Field::Prime(_) => factor_fp(f, rng),
        Field::Extension(_) => factor_extension(f, rng),
    }
}

/// Roots of a univariate polynomial inside its own field, with
/// multiplicities; read off the linear factors of the full factorization.
pub fn roots_in_field(f: &DensePoly, rng: &mut impl Rng) -> Result<Vec<(Coeff, usize)>> {
    let field = f.field().clone();
    let (_, factors) = factor_univariate(f, rng)?;
    let mut out = vec![];
    for (g, m) in factors {
        if g.deg() == 1 {
            out.push((field.neg(&g.coeff(0)), m));
        }
    }
    Ok(out)
}

/// Irreducibility over the rationals for polynomials in at most three
/// variables.
///
/// Guarantees:
/// * `Reducible` comes with an actual witness: a repeated factor, a
///   content in one of the variables, or a full univariate factorization.
/// * `Irreducible` is certified, either by complete univariate
///   factorization or by an irreducible modular image of preserved degree.
/// * `Unknown` means the certificate budget ran out.
pub fn irreducibility_test(
    f: &SparsePolynomial,
    rng: &mut impl Rng,
) -> Result<Irreducibility> {
    if f.nvars() > 3 {
        return Err(Error::UnsupportedArity(f.nvars()));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput("irreducibility test".into()));
    }
    if f.is_constant() {
        return Err(Error::InvalidParameter(
            "irreducibility of a constant".into(),
        ));
    }
    let f = match f.field() {
        Field::Rational => f.clone(),
        Field::Prime(_) => {
            return Err(Error::FieldMismatch(
                f.field().label(),
                "Q".into(),
            ))
        }
        Field::Extension(_) => {
            // rational-valued coefficients can be transported; genuine
            // extension coefficients are out of certificate reach
            let mut terms = vec![];
            for (m, c) in f.terms() {
                match c.as_rational() {
                    Some(r) => terms.push((m.0.clone(), Coeff::Rat(r.clone()))),
                    None => return Ok(Irreducibility::Unknown),
                }
            }
            SparsePolynomial::from_terms(&Field::Rational, f.nvars(), terms)?
        }
    };

    if !gcd::is_squarefree(&f)? {
        return Ok(Irreducibility::Reducible);
    }
    if f.total_degree() == 1 {
        return Ok(Irreducibility::Irreducible);
    }

    let used: Vec<usize> = (0..f.nvars()).filter(|&v| f.degree_in(v) > 0).collect();
    match used.len() {
        0 => unreachable!("nonconstant"),
        1 => {
            // genuinely univariate: complete factorization decides
            let mut g = f.clone();
            for v in (0..f.nvars()).rev() {
                if g.degree_in(v) == 0 && g.nvars() > 1 {
                    g = g.drop_var(v)?;
                }
            }
            let dense = DensePoly::from_sparse(&g, 0)?;
            let (_, factors) = factor_univariate(&dense, rng)?;
            let count: usize = factors.iter().map(|(_, m)| m).sum();
            return Ok(if count == 1 {
                Irreducibility::Irreducible
            } else {
                Irreducibility::Reducible
            });
        }
        2 => {
            let mut g = f.clone();
            for v in (0..g.nvars()).rev() {
                if g.degree_in(v) == 0 && g.nvars() > 2 {
                    g = g.drop_var(v)?;
                }
            }
            bivariate_over_q(&g, rng)
        }
        3 => trivariate_over_q(&f, rng),
        _ => unreachable!(),
    }
}

fn bivariate_over_q(f: &SparsePolynomial, rng: &mut impl Rng) -> Result<Irreducibility> {
    debug_assert_eq!(f.nvars(), 2);
    // a nonconstant content in either variable is a witness factor
    for var in 0..2 {
        if !gcd::content_in(f, var)?.is_constant() {
            return Ok(Irreducibility::Reducible);
        }
    }
    let primitive = f.primitive_integer()?;
    for &p in &WORKING_PRIMES {
        let reduced = match primitive.reduce_mod_p(p) {
            Ok(r) => r,
            Err(_) => continue,
        };
        match bivariate_irreducible_fp(&reduced, rng)? {
            Some(true) => return Ok(Irreducibility::Irreducible),
            // reducible mod p proves nothing over Q; try the next prime
            Some(false) | None => continue,
        }
    }
    Ok(Irreducibility::Unknown)
}

fn trivariate_over_q(f: &SparsePolynomial, rng: &mut impl Rng) -> Result<Irreducibility> {
    debug_assert_eq!(f.nvars(), 3);
    for var in 0..3 {
        if !gcd::content_in(f, var)?.is_constant() {
            return Ok(Irreducibility::Reducible);
        }
    }
    if f.homogeneous_degree().is_some() {
        // homogeneous: factorizations match those of the dehomogenization
        // with respect to any variable not dividing f, and some variable
        // qualifies because the content checks above passed
        for var in 0..3 {
            let divides = f.terms().iter().all(|(m, _)| m.0[var] > 0);
            if divides {
                continue;
            }
            let affine = f
                .dehomogenize(var, &Field::Rational.one())?
                .drop_var(var)?;
            debug_assert_eq!(affine.total_degree(), f.total_degree());
            return bivariate_over_q(&affine, rng);
        }
        unreachable!("content-free homogeneous polynomial");
    }
    // general trivariate: a degree-preserving specialization that is
    // irreducible certifies irreducibility
    let d = f.total_degree();
    for var in (0..3).rev() {
        for c in [0i64, 1, -1, 2, -2, 3] {
            let spec = f
                .dehomogenize(var, &Field::Rational.from_i64(c))?
                .drop_var(var)?;
            if spec.total_degree() != d {
                continue;
            }
            if !gcd::is_squarefree(&spec)? {
                continue;
            }
            if bivariate_over_q(&spec, rng)? == Irreducibility::Irreducible {
                return Ok(Irreducibility::Irreducible);
            }
        }
    }
    Ok(Irreducibility::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::qpoly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(23)
    }

    #[test]
    fn product_of_variables_is_reducible() {
        let f = qpoly("x*y", &["x", "y"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Reducible
        );
    }

    #[test]
    fn square_is_reducible() {
        let f = qpoly("(x+y)^2", &["x", "y"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Reducible
        );
    }

    #[test]
    fn cuspidal_cubic_is_irreducible() {
        let f = qpoly("y^2*z - x^3", &["x", "y", "z"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn fermat_cubic_is_irreducible() {
        let f = qpoly("x^3 + y^3 + z^3", &["x", "y", "z"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn conic_is_irreducible_and_split_conic_is_not() {
        let f = qpoly("x*z - y^2", &["x", "y", "z"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Irreducible
        );
        let g = qpoly("x*z - y*z", &["x", "y", "z"]);
        assert_eq!(
            irreducibility_test(&g, &mut rng()).unwrap(),
            Irreducibility::Reducible
        );
    }

    #[test]
    fn univariate_cases_are_decisive() {
        let f = qpoly("x^4 + 1", &["x", "y"]);
        assert_eq!(
            irreducibility_test(&f, &mut rng()).unwrap(),
            Irreducibility::Irreducible
        );
        let g = qpoly("x^4 - 1", &["x", "y"]);
        assert_eq!(
            irreducibility_test(&g, &mut rng()).unwrap(),
            Irreducibility::Reducible
        );
    }

    #[test]
    fn arity_limit_enforced() {
        let f = Field::Rational;
        let p = SparsePolynomial::from_int_terms(&f, 4, &[(&[1, 1, 1, 1], 1)]);
        assert!(matches!(
            irreducibility_test(&p, &mut rng()),
            Err(Error::UnsupportedArity(4))
        ));
    }
}
