//! Dual curves of smooth plane curves by resultant elimination.
//!
//! A point `(u:v:w)` lies on the dual exactly when the line
//! `u x + v y + w z = 0` meets the curve non-transversally. Restricting
//! the curve equation to the parametrized line gives a binary form whose
//! discriminant cuts out precisely those lines; the discriminant is the
//! resultant of the restriction with its derivative divided by the formal
//! leading coefficient, an exact division. What remains beyond the dual
//! equation is a monomial factor from the chart degeneracy, stripped at
//! the end.

use crate::error::Error;
use crate::gcd;
use crate::poly::SparsePolynomial;
use crate::resultant::resultant;
use crate::Result;

/// The dual curve of a squarefree homogeneous plane curve of degree >= 2,
/// as a squarefree homogeneous equation in the dual coordinates (same
/// three variable slots). Intended for smooth curves, where the
/// discriminant of the line sections is the reduced dual.
pub fn dual_curve(f: &SparsePolynomial) -> Result<SparsePolynomial> {
    if f.nvars() != 3 {
        return Err(Error::ArityMismatch(f.nvars(), 3));
    }
    let degree = f
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidParameter("curve equation not homogeneous".into()))?;
    if degree < 2 {
        return Err(Error::InvalidParameter("dual needs degree >= 2".into()));
    }
    if !gcd::is_squarefree(f)? {
        return Err(Error::NotSquarefree);
    }
    let field = f.field().clone();

    // restriction of f to the line u x + v y + w z = 0, parametrized by
    // (x : y) -> (w x, w y, -(u x + v y)); variables (x, y, u, v, w)
    let wx = SparsePolynomial::from_int_terms(&field, 5, &[(&[1, 0, 0, 0, 1], 1)]);
    let wy = SparsePolynomial::from_int_terms(&field, 5, &[(&[0, 1, 0, 0, 1], 1)]);
    let zz = SparsePolynomial::from_int_terms(&field, 5, &[(&[1, 0, 1, 0, 0], -1), (&[0, 1, 0, 1, 0], -1)]);
    let restriction = f.substitute_all(&[wx, wy, zz])?;

    for (elim, fixed) in [(0usize, 1usize), (1usize, 0usize)] {
        let b = restriction.dehomogenize(fixed, &field.one())?;
        if b.degree_in(elim) != degree {
            // the formal leading coefficient vanishes identically: the
            // coordinate line divides f; try the other orientation
            continue;
        }
        let lead: SparsePolynomial = {
            let terms = b.terms().iter().filter_map(|(m, c)| {
                if m.0[elim] == degree {
                    let mut e = m.0.clone();
                    e[elim] = 0;
                    Some((e, c.clone()))
                } else {
                    None
                }
            });
            SparsePolynomial::from_terms(&field, 5, terms)?
        };
        let db = b.differentiate(elim)?;
        let res = resultant(&b, &db, elim)?;
        if res.is_zero() {
            return Err(Error::Internal("discriminant vanished identically".into()));
        }
        // Res(P, P') = +- lc(P) * disc(P) as a polynomial identity
        let disc = res
            .div_exact(&lead)
            .ok_or_else(|| Error::Internal("leading coefficient does not divide".into()))?;
        // strip the monomial content coming from the chart degeneracy
        let mut stripped = disc;
        for var in 2..5 {
            let min_exp = stripped
                .terms()
                .iter()
                .map(|(m, _)| m.0[var])
                .min()
                .unwrap_or(0);
            if min_exp > 0 {
                let mut e = vec![0u32; 5];
                e[var] = min_exp;
                let mono = SparsePolynomial::monomial(&field, 5, e, field.one());
                stripped = stripped.div_exact(&mono).expect("monomial content");
            }
        }
        debug_assert_eq!(stripped.degree_in(0), 0);
        debug_assert_eq!(stripped.degree_in(1), 0);
        let trivariate = stripped.drop_var(0)?.drop_var(0)?;
        return gcd::squarefree_part(&trivariate);
    }
    Err(Error::InvalidParameter(
        "both coordinate lines divide the curve".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::qpoly;

    #[test]
    fn dual_of_a_conic_is_a_conic() {
        // the dual of the conic {xz = y^2} is {4 u w = v^2} up to scalars
        let f = qpoly("x*z - y^2", &["x", "y", "z"]);
        let d = dual_curve(&f).unwrap();
        assert_eq!(d.total_degree(), 2);
        assert!(d.proportional_to(&qpoly("4*x*z - y^2", &["x", "y", "z"])));
    }

    #[test]
    fn dual_of_fermat_cubic_is_the_known_sextic() {
        let f = qpoly("x^3 + y^3 + z^3", &["x", "y", "z"]);
        let d = dual_curve(&f).unwrap();
        assert_eq!(d.total_degree(), 6);
        // classical form of the dual sextic
        let known = qpoly(
            "x^6 + y^6 + z^6 - 2*x^3*y^3 - 2*y^3*z^3 - 2*x^3*z^3",
            &["x", "y", "z"],
        );
        assert!(d.proportional_to(&known));
    }

    #[test]
    fn circle_like_conic_is_self_dual() {
        let f = qpoly("x^2 + y^2 - z^2", &["x", "y", "z"]);
        let d = dual_curve(&f).unwrap();
        assert!(d.proportional_to(&qpoly("x^2 + y^2 - z^2", &["x", "y", "z"])));
    }

    #[test]
    fn line_rejected() {
        let f = qpoly("x + y + z", &["x", "y", "z"]);
        assert!(dual_curve(&f).is_err());
    }
}
