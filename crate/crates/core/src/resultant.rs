//! Resultants with respect to one variable, computed by the subresultant
//! polynomial remainder sequence to keep coefficient growth in check.

use crate::error::Error;
use crate::gcd::{content_in, prem, UPoly};
use crate::poly::SparsePolynomial;
use crate::Result;

/// Resultant of `f` and `g` with respect to `var`.
///
/// Conventions for degenerate inputs: if one argument is constant in `var`
/// (and nonzero) the resultant is that constant raised to the other's
/// degree; two constants give 1; two zero polynomials are rejected.
pub fn resultant(
    f: &SparsePolynomial,
    g: &SparsePolynomial,
    var: usize,
) -> Result<SparsePolynomial> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch(f.field().label(), g.field().label()));
    }
    if f.nvars() != g.nvars() {
        return Err(Error::ArityMismatch(f.nvars(), g.nvars()));
    }
    if var >= f.nvars() {
        return Err(Error::VarOutOfRange {
            index: var,
            nvars: f.nvars(),
        });
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInput("resultant".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(SparsePolynomial::zero(f.field(), f.nvars()));
    }
    let field = f.field();
    let nvars = f.nvars();
    let (da, db) = (f.degree_in(var), g.degree_in(var));
    let one = SparsePolynomial::one(field, nvars);

    // keep deg A >= deg B, tracking the swap sign
    let (mut a, mut b, mut sign_neg) = if da >= db {
        (f.clone(), g.clone(), false)
    } else {
        (g.clone(), f.clone(), (da * db) % 2 == 1)
    };

    if b.degree_in(var) == 0 {
        // Res(A, b) = b^{deg A}
        let res = b.pow(a.degree_in(var));
        return Ok(if sign_neg { -&res } else { res });
    }

    // pull out contents: Res(a*A', b*B') = a^{deg B} b^{deg A} Res(A', B')
    let ca = content_in(&a, var)?;
    let cb = content_in(&b, var)?;
    a = a.div_exact(&ca).expect("content divides");
    b = b.div_exact(&cb).expect("content divides");
    let scale = &ca.pow(b.degree_in(var)) * &cb.pow(a.degree_in(var));

    let mut up_a = UPoly::from_sparse(&a, var);
    let mut up_b = UPoly::from_sparse(&b, var);
    let mut g_coef = one.clone();
    let mut h_coef = one.clone();

    loop {
        let (deg_a, deg_b) = (up_a.deg(), up_b.deg());
        let delta = deg_a - deg_b;
        if deg_a % 2 == 1 && deg_b % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = prem(&up_a, &up_b);
        if r.is_zero() {
            // common factor of positive degree in var
            return Ok(SparsePolynomial::zero(field, nvars));
        }
        let divisor = &g_coef * &h_coef.pow(delta as u32);
        up_a = up_b;
        up_b = r.div_coeffs_exact(&divisor)?;
        g_coef = up_a.lead().clone();
        h_coef = if delta == 0 {
            h_coef
        } else {
            // h := g^delta / h^(delta-1), exact by subresultant theory
            let num = g_coef.pow(delta as u32);
            let den = h_coef.pow(delta as u32 - 1);
            num.div_exact(&den)
                .ok_or_else(|| Error::Internal("subresultant h-division failed".into()))?
        };
        if up_b.deg() == 0 {
            break;
        }
    }

    let last_deg = up_a.deg() as u32;
    let b_const = up_b.coeffs[0].clone();
    // res = h^{1 - deg A} * b^{deg A}
    let num = b_const.pow(last_deg);
    let den = h_coef.pow(last_deg.saturating_sub(1));
    let core = num
        .div_exact(&den)
        .ok_or_else(|| Error::Internal("subresultant final division failed".into()))?;
    let res = &core * &scale;
    Ok(if sign_neg { -&res } else { res })
}

/// Discriminant-like eliminant: `Res_var(f, df/d var)`. The scalar factor
/// relating it to the classical discriminant is irrelevant for vanishing
/// questions, which is all the callers use.
pub fn derivative_resultant(f: &SparsePolynomial, var: usize) -> Result<SparsePolynomial> {
    let df = f.differentiate(var)?;
    resultant(f, &df, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::qpoly;
    use crate::poly::Monomial;

    /// Independent oracle: the Sylvester matrix determinant, expanded by
    /// minors over polynomial entries.
    fn sylvester_resultant(
        f: &SparsePolynomial,
        g: &SparsePolynomial,
        var: usize,
    ) -> SparsePolynomial {
        let field = f.field();
        let nvars = f.nvars();
        let m = f.degree_in(var) as usize;
        let n = g.degree_in(var) as usize;
        let coeff_of = |p: &SparsePolynomial, k: usize| -> SparsePolynomial {
            let mut acc = SparsePolynomial::zero(field, nvars);
            for (mono, c) in p.terms() {
                if mono.0[var] as usize == k {
                    let mut exps = mono.0.clone();
                    exps[var] = 0;
                    acc = &acc
                        + &SparsePolynomial::monomial(field, nvars, exps, c.clone());
                }
            }
            acc
        };
        let size = m + n;
        let mut rows: Vec<Vec<SparsePolynomial>> = vec![];
        for i in 0..n {
            let mut row = vec![SparsePolynomial::zero(field, nvars); size];
            for k in 0..=m {
                row[i + (m - k)] = coeff_of(f, k);
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![SparsePolynomial::zero(field, nvars); size];
            for k in 0..=n {
                row[i + (n - k)] = coeff_of(g, k);
            }
            rows.push(row);
        }
        poly_det(&rows, field, nvars)
    }

    fn poly_det(
        rows: &[Vec<SparsePolynomial>],
        field: &Field,
        nvars: usize,
    ) -> SparsePolynomial {
        let n = rows.len();
        if n == 0 {
            return SparsePolynomial::one(field, nvars);
        }
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = SparsePolynomial::zero(field, nvars);
        for (j, entry) in rows[0].iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let minor: Vec<Vec<SparsePolynomial>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let sub = poly_det(&minor, field, nvars);
            let term = entry * &sub;
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn resultant_matches_hand_sylvester() {
        let vars = ["x", "y"];
        // Res_x(x^2 - y, x - y) = y^2 - y, by the 3x3 Sylvester determinant
        let f = qpoly("x^2 - y", &vars);
        let g = qpoly("x - y", &vars);
        let r = resultant(&f, &g, 0).unwrap();
        assert_eq!(r, qpoly("y^2 - y", &vars));
        assert_eq!(r, sylvester_resultant(&f, &g, 0));
    }

    #[test]
    fn resultant_of_identical_inputs_is_zero() {
        let vars = ["x", "y"];
        let f = qpoly("x^2 + x*y + 1", &vars);
        assert!(resultant(&f, &f, 0).unwrap().is_zero());
    }

    #[test]
    fn linear_resultant_up_to_sign() {
        // Res_x(x - a, x - b) = a - b up to sign
        let vars = ["x", "a", "b"];
        let f = qpoly("x - a", &vars);
        let g = qpoly("x - b", &vars);
        let r = resultant(&f, &g, 0).unwrap();
        let want = qpoly("a - b", &vars);
        assert!(r == want || r == -&want);
    }

    #[test]
    fn constant_argument_convention() {
        let vars = ["x", "y"];
        let f = qpoly("x^3 - y", &vars);
        let g = qpoly("2", &vars);
        assert_eq!(resultant(&f, &g, 0).unwrap(), qpoly("8", &vars));
    }

    #[test]
    fn agrees_with_sylvester_on_samples() {
        let vars = ["x", "y"];
        let samples = [
            ("x^3 - 2*x*y + 1", "x^2 + y"),
            ("x^2*y - x + y^2", "y*x^2 + 3*x - 1"),
            ("x^4 - y^2", "x^2 - 2*y*x + 7"),
        ];
        for (fs, gs) in samples {
            let f = qpoly(fs, &vars);
            let g = qpoly(gs, &vars);
            assert_eq!(
                resultant(&f, &g, 0).unwrap(),
                sylvester_resultant(&f, &g, 0),
                "mismatch on Res_x({fs}, {gs})"
            );
        }
    }

    #[test]
    fn multiplicativity_in_first_argument() {
        let vars = ["x", "y"];
        let f = qpoly("x^2 - y", &vars);
        let g = qpoly("x + y^2 - 1", &vars);
        let h = qpoly("x^2 + 3*x - y", &vars);
        let lhs = resultant(&(&f * &g), &h, 0).unwrap();
        let rhs = &resultant(&f, &h, 0).unwrap() * &resultant(&g, &h, 0).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn vanishes_exactly_at_common_specializations() {
        // f = x^2 - y, g = x - 2: common root iff y = 4
        let vars = ["x", "y"];
        let f = qpoly("x^2 - y", &vars);
        let g = qpoly("x - 2", &vars);
        let r = resultant(&f, &g, 0).unwrap();
        let field = Field::Rational;
        let at = |y: i64| {
            r.eval(&[field.from_i64(0), field.from_i64(y)]).unwrap()
        };
        assert!(field.is_zero(&at(4)));
        assert!(!field.is_zero(&at(5)));
        let _ = Monomial(vec![]);
    }
}
