//! Truncated multivariate power series and the implicit-function solver
//! used to put a smooth surface chart into graph form.

use crate::error::Error;
use crate::field::Coeff;
use crate::poly::SparsePolynomial;
use crate::Result;

/// A polynomial holding the jet of a power series below `order`: every
/// stored term has total degree < order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: SparsePolynomial,
    order: u32,
}

impl TruncatedSeries {
    pub fn new(poly: SparsePolynomial, order: u32) -> TruncatedSeries {
        TruncatedSeries {
            poly: poly.truncate_at(order),
            order,
        }
    }

    pub fn poly(&self) -> &SparsePolynomial {
        &self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn constant_term(&self) -> Coeff {
        self.poly.coeff_of(&vec![0; self.poly.nvars()])
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        TruncatedSeries::new(&self.poly + &other.poly, order)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        TruncatedSeries::new(&self.poly - &other.poly, order)
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        TruncatedSeries::new(&self.poly * &other.poly, order)
    }

    /// Multiplicative inverse of a unit series (nonzero constant term),
    /// computed by Newton iteration with doubling precision.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        let field = self.poly.field().clone();
        let c = self.constant_term();
        if field.is_zero(&c) {
            return Err(Error::DivisionByZero("series inverse".into()));
        }
        let nvars = self.poly.nvars();
        let mut inv = SparsePolynomial::constant(&field, nvars, field.inv(&c)?);
        let two = SparsePolynomial::from_i64(&field, nvars, 2);
        let mut prec = 1u32;
        while prec < self.order {
            prec = (prec * 2).min(self.order);
            // inv <- inv * (2 - a * inv), truncated
            let correction = &two - &(&self.poly.truncate_at(prec) * &inv).truncate_at(prec);
            inv = (&inv * &correction).truncate_at(prec);
        }
        Ok(TruncatedSeries::new(inv, self.order))
    }

    pub fn div(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Substitutes this series for `var` in `g`, truncating throughout.
    pub fn substitute_into(&self, g: &SparsePolynomial, var: usize) -> Result<TruncatedSeries> {
        if g.nvars() != self.poly.nvars() {
            return Err(Error::ArityMismatch(g.nvars(), self.poly.nvars()));
        }
        let field = g.field().clone();
        let nvars = g.nvars();
        // Horner in var over the coefficient polynomials
        let top = g.degree_in(var);
        let mut acc = SparsePolynomial::zero(&field, nvars);
        for e in (0..=top).rev() {
            acc = (&acc * &self.poly).truncate_at(self.order);
            let coeff_e = coefficient_of_power(g, var, e);
            acc = &acc + &coeff_e;
        }
        Ok(TruncatedSeries::new(acc, self.order))
    }
}

/// The coefficient of `var^e` in `g`, as a polynomial with `var` unused.
fn coefficient_of_power(g: &SparsePolynomial, var: usize, e: u32) -> SparsePolynomial {
    let field = g.field().clone();
    let terms = g.terms().iter().filter_map(|(m, c)| {
        if m.0[var] == e {
            let mut exps = m.0.clone();
            exps[var] = 0;
            Some((exps, c.clone()))
        } else {
            None
        }
    });
    SparsePolynomial::from_terms(&field, g.nvars(), terms).expect("valid terms")
}

/// Solves `G = 0` for one coordinate as a truncated power series around a
/// point where the corresponding partial derivative does not vanish.
///
/// The returned series lives in the local coordinates `u_i = x_i - point_i`
/// of the remaining variables (with `solve_var` unused) and has constant
/// term `point[solve_var]`; substituting it for `solve_var` into `G`
/// translated by the other coordinates yields 0 modulo degree `order`.
pub fn implicit_series_solve(
    g: &SparsePolynomial,
    point: &[Coeff],
    solve_var: usize,
    order: u32,
) -> Result<TruncatedSeries> {
    let field = g.field().clone();
    let nvars = g.nvars();
    if point.len() != nvars {
        return Err(Error::ArityMismatch(point.len(), nvars));
    }
    if solve_var >= nvars {
        return Err(Error::VarOutOfRange {
            index: solve_var,
            nvars,
        });
    }
    if !field.is_zero(&g.eval(point)?) {
        return Err(Error::NotOnCurve);
    }
    let dg = g.differentiate(solve_var)?;
    if field.is_zero(&dg.eval(point)?) {
        return Err(Error::NotSmoothChartDirection);
    }
    // move the point to the origin
    let g0 = g.translate(point)?;
    let dg0 = g0.differentiate(solve_var)?;

    let mut s = TruncatedSeries::new(SparsePolynomial::zero(&field, nvars), 1);
    let mut prec = 1u32;
    while prec < order {
        prec = (prec * 2).min(order);
        let s_lift = TruncatedSeries::new(s.poly.clone(), prec);
        let value = s_lift.substitute_into(&g0, solve_var)?;
        let slope = s_lift.substitute_into(&dg0, solve_var)?;
        let update = value.div(&slope)?;
        s = s_lift.sub(&update);
    }
    // report in the chart around `point`: constant term = solved coordinate
    let shift = SparsePolynomial::constant(&field, nvars, point[solve_var].clone());
    Ok(TruncatedSeries::new(&s.poly + &shift, order))
}

/// Checks the defining property of a solved series: substituting it into
/// `G` (with the non-solved coordinates translated to the point) vanishes
/// below the truncation order.
pub fn verify_series_solution(
    g: &SparsePolynomial,
    point: &[Coeff],
    series: &TruncatedSeries,
    solve_var: usize,
) -> Result<bool> {
    let field = g.field().clone();
    let mut q = point.to_vec();
    q[solve_var] = field.zero();
    let g_shifted = g.translate(&q)?;
    let residue = series.substitute_into(&g_shifted, solve_var)?;
    Ok(residue.poly.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::qpoly;

    #[test]
    fn graph_surface_is_solved_exactly() {
        // G = z - x^2 - y^2 at the origin: z = x^2 + y^2
        let vars = ["x", "y", "z"];
        let g = qpoly("z - x^2 - y^2", &vars);
        let field = Field::Rational;
        let origin = vec![field.from_i64(0); 3];
        let s = implicit_series_solve(&g, &origin, 2, 6).unwrap();
        assert_eq!(s.poly(), &qpoly("x^2 + y^2", &vars));
        assert!(verify_series_solution(&g, &origin, &s, 2).unwrap());
    }

    #[test]
    fn sphere_over_gaussian_style_extension() {
        // G = x^2 + y^2 + z^2 + 1 over Q[i] at (0, 0, i), solving z:
        // the oracle is the substitute-back check below order 4
        let i_field = Field::extension(
            vec![
                num_rational::BigRational::from(num_bigint::BigInt::from(1)),
                num_rational::BigRational::from(num_bigint::BigInt::from(0)),
                num_rational::BigRational::from(num_bigint::BigInt::from(1)),
            ],
            "t",
        )
        .unwrap();
        let g = crate::parse::parse_polynomial(
            "x^2 + y^2 + z^2 + 1",
            &["x", "y", "z"],
            &i_field,
        )
        .unwrap();
        let i = i_field.generator().unwrap();
        let point = vec![i_field.from_i64(0), i_field.from_i64(0), i.clone()];
        let s = implicit_series_solve(&g, &point, 2, 4).unwrap();
        assert_eq!(s.constant_term(), i);
        assert!(verify_series_solution(&g, &point, &s, 2).unwrap());
    }

    #[test]
    fn order_one_is_the_point_coordinate() {
        let vars = ["x", "y", "z"];
        let g = qpoly("z^3 - z + x + y^2", &vars);
        let field = Field::Rational;
        // (0, 0, 1) lies on g: 1 - 1 + 0 + 0 = 0, dz = 3z^2 - 1 = 2 there
        let point = vec![field.from_i64(0), field.from_i64(0), field.from_i64(1)];
        let s = implicit_series_solve(&g, &point, 2, 1).unwrap();
        assert!(s.poly().is_constant());
        assert_eq!(s.constant_term(), field.from_i64(1));
        // higher order still verifies
        let s4 = implicit_series_solve(&g, &point, 2, 8).unwrap();
        assert!(verify_series_solution(&g, &point, &s4, 2).unwrap());
    }

    #[test]
    fn vanishing_derivative_is_rejected() {
        let vars = ["x", "y", "z"];
        let g = qpoly("z^2 - x", &vars);
        let field = Field::Rational;
        let origin = vec![field.from_i64(0); 3];
        assert!(matches!(
            implicit_series_solve(&g, &origin, 2, 4),
            Err(Error::NotSmoothChartDirection)
        ));
    }

    #[test]
    fn series_inverse_is_reciprocal() {
        let vars = ["x", "y"];
        let a = TruncatedSeries::new(qpoly("1 + x + 3*y^2", &vars), 7);
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod.poly(), &qpoly("1", &vars));
    }

    #[test]
    fn operations_carry_minimum_order() {
        let vars = ["x", "y"];
        let a = TruncatedSeries::new(qpoly("1 + x", &vars), 5);
        let b = TruncatedSeries::new(qpoly("x^3", &vars), 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }
}
