//! Projective points, planes, lines, plane curves with an embedding frame,
//! and the cone over a plane curve together with its section by a surface.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DensePoly;
use crate::error::Error;
use crate::factor::{factor_univariate, irreducibility_test, Irreducibility};
use crate::field::{Coeff, Field};
use crate::gcd;
use crate::linalg::Matrix;
use crate::parse::{parse_coeff, parse_polynomial};
use crate::poly::SparsePolynomial;
use crate::resultant::resultant;
use crate::Result;

/// A point of projective 3-space, normalized so the first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    field: Field,
    coords: Vec<Coeff>,
}

impl ProjPoint {
    pub fn new(field: &Field, coords: Vec<Coeff>) -> Result<ProjPoint> {
        if coords.len() != 4 {
            return Err(Error::ArityMismatch(coords.len(), 4));
        }
        Self::new_n(field, coords)
    }

    /// Projective point with any coordinate count (plane points use 3).
    pub fn new_n(field: &Field, mut coords: Vec<Coeff>) -> Result<ProjPoint> {
        for c in &coords {
            field.validate(c)?;
        }
        let lead = coords.iter().position(|c| !field.is_zero(c));
        let lead = lead.ok_or_else(|| Error::ZeroInput("projective point".into()))?;
        let inv = field.inv(&coords[lead])?;
        for c in coords.iter_mut() {
            *c = field.mul(c, &inv);
        }
        Ok(ProjPoint {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_i64(field: &Field, coords: &[i64]) -> ProjPoint {
        Self::new_n(
            field,
            coords.iter().map(|&c| field.from_i64(c)).collect(),
        )
        .expect("nonzero integer point")
    }

    pub fn coords(&self) -> &[Coeff] {
        &self.coords
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| self.field.format(c)).collect();
        format!("({})", parts.join(" : "))
    }
}

/// A plane in projective 3-space, given by a linear form with canonically
/// scaled coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPlane {
    field: Field,
    coeffs: Vec<Coeff>,
}

impl ProjPlane {
    pub fn new(field: &Field, coeffs: Vec<Coeff>) -> Result<ProjPlane> {
        if coeffs.len() != 4 {
            return Err(Error::ArityMismatch(coeffs.len(), 4));
        }
        let p = ProjPoint::new_n(field, coeffs)?;
        Ok(ProjPlane {
            field: field.clone(),
            coeffs: p.coords.clone(),
        })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        let mut acc = self.field.zero();
        for (a, x) in self.coeffs.iter().zip(p.coords()) {
            acc = self.field.add(&acc, &self.field.mul(a, x));
        }
        self.field.is_zero(&acc)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }
}

/// A line spanned by two distinct points.
#[derive(Debug, Clone)]
pub struct ProjLine {
    pub a: ProjPoint,
    pub b: ProjPoint,
}

impl ProjLine {
    pub fn through(a: ProjPoint, b: ProjPoint) -> Result<ProjLine> {
        if a == b {
            return Err(Error::CoincidentVertices);
        }
        Ok(ProjLine { a, b })
    }

    /// The point `s*a + t*b` in raw (unnormalized) coordinates.
    pub fn point_at(&self, s: &Coeff, t: &Coeff) -> Vec<Coeff> {
        let f = self.a.field();
        self.a
            .coords()
            .iter()
            .zip(self.b.coords())
            .map(|(x, y)| f.add(&f.mul(x, s), &f.mul(y, t)))
            .collect()
    }
}

/// A reduced plane curve: a homogeneous squarefree equation in three plane
/// coordinates plus the frame embedding its plane into ambient space.
///
/// The frame is an invertible 4x4 matrix whose first three columns span the
/// plane; a point with plane coordinates `(s0, s1, s2)` sits at
/// `frame * (s0, s1, s2, 0)`. Equivalently, the last coordinate of
/// `frame^-1 * X` cuts out the plane.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    equation: SparsePolynomial,
    frame: Matrix,
}

impl PlaneCurve {
    pub fn new(equation: SparsePolynomial, frame: Matrix) -> Result<PlaneCurve> {
        if equation.nvars() != 3 {
            return Err(Error::ArityMismatch(equation.nvars(), 3));
        }
        let deg = equation
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidParameter("curve equation not homogeneous".into()))?;
        if deg < 1 {
            return Err(Error::InvalidParameter("curve equation constant".into()));
        }
        if !gcd::is_squarefree(&equation)? {
            return Err(Error::NotSquarefree);
        }
        if frame.rows() != 4 || frame.cols() != 4 {
            return Err(Error::ArityMismatch(frame.rows(), 4));
        }
        if !frame.is_invertible()? {
            return Err(Error::SingularMatrix);
        }
        Ok(PlaneCurve { equation, frame })
    }

    /// Curve living on the coordinate plane `w = 0` with the identity frame.
    pub fn on_w_plane(equation: SparsePolynomial) -> Result<PlaneCurve> {
        let frame = Matrix::identity(equation.field(), 4);
        Self::new(equation, frame)
    }

    pub fn equation(&self) -> &SparsePolynomial {
        &self.equation
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn degree(&self) -> u32 {
        self.equation.total_degree()
    }

    pub fn field(&self) -> &Field {
        self.equation.field()
    }

    /// The supporting plane, read off the last row of the inverse frame.
    pub fn plane(&self) -> Result<ProjPlane> {
        let inv = self.frame.inverse()?;
        let coeffs = (0..4).map(|j| inv.get(3, j).clone()).collect();
        ProjPlane::new(self.field(), coeffs)
    }

    /// Ambient coordinates of a point given in plane coordinates.
    pub fn embed_point(&self, plane_point: &ProjPoint) -> Result<ProjPoint> {
        if plane_point.dim() != 3 {
            return Err(Error::ArityMismatch(plane_point.dim(), 3));
        }
        let mut v = plane_point.coords().to_vec();
        v.push(self.field().zero());
        let out = self.frame.mul_vec(&v)?;
        ProjPoint::new(self.field(), out)
    }
}

/// Frame with the vertex appended: sends the plane basis to the first three
/// coordinates and the vertex to `(0:0:0:1)`.
fn vertex_frame(curve: &PlaneCurve, vertex: &ProjPoint) -> Result<Matrix> {
    let field = curve.field().clone();
    let plane = curve.plane()?;
    if plane.contains(vertex) {
        return Err(Error::VertexOnPlane);
    }
    let mut m = Matrix::zero(&field, 4, 4);
    for i in 0..4 {
        for j in 0..3 {
            m.set(i, j, curve.frame().get(i, j).clone());
        }
        m.set(i, 3, vertex.coords()[i].clone());
    }
    debug_assert!(m.is_invertible()?, "vertex off the plane spans");
    Ok(m)
}

/// Equation of the cone over `curve` with the given vertex: substitute the
/// inverse vertex-frame coordinates into the plane equation, so the result
/// is constant along every line through the vertex.
pub fn cone_equation(curve: &PlaneCurve, vertex: &ProjPoint) -> Result<SparsePolynomial> {
    let field = curve.field().clone();
    let n = vertex_frame(curve, vertex)?;
    let ninv = n.inverse()?;
    let images: Vec<SparsePolynomial> = (0..3)
        .map(|i| {
            let mut p = SparsePolynomial::zero(&field, 4);
            for j in 0..4 {
                let c = ninv.get(i, j);
                if !field.is_zero(c) {
                    let mut exps = vec![0u32; 4];
                    exps[j] = 1;
                    p = &p + &SparsePolynomial::monomial(&field, 4, exps, c.clone());
                }
            }
            p
        })
        .collect();
    let f = curve.equation().substitute_all(&images)?;
    debug_assert_eq!(f.homogeneous_degree(), Some(curve.degree()));
    Ok(f)
}

/// Checks that two distinct vertices give genuinely different cones over an
/// irreducible curve of degree at least two. The comparison is at the level
/// of equations: canonical non-proportionality.
pub fn cone_uniqueness_check(
    curve: &PlaneCurve,
    p: &ProjPoint,
    p2: &ProjPoint,
) -> Result<bool> {
    if curve.degree() == 1 {
        return Err(Error::CurveIsLine);
    }
    if p == p2 {
        return Err(Error::CoincidentVertices);
    }
    let f1 = cone_equation(curve, p)?;
    let f2 = cone_equation(curve, p2)?;
    Ok(!f1.proportional_to(&f2))
}

/// One point of a line-surface fiber: either explicit over the base field
/// or a packet of conjugate points described by an irreducible factor of
/// the restricted binary form.
#[derive(Debug, Clone)]
pub enum FiberPoint {
    Explicit {
        point: ProjPoint,
        multiplicity: usize,
    },
    Packet {
        /// monic irreducible over the base field, in the line parameter
        min_poly: DensePoly,
        degree: usize,
        multiplicity: usize,
    },
}

impl FiberPoint {
    pub fn multiplicity(&self) -> usize {
        match self {
            FiberPoint::Explicit { multiplicity, .. } => *multiplicity,
            FiberPoint::Packet { multiplicity, .. } => *multiplicity,
        }
    }

    /// Number of geometric points this entry accounts for, without
    /// multiplicity.
    pub fn geometric_count(&self) -> usize {
        match self {
            FiberPoint::Explicit { .. } => 1,
            FiberPoint::Packet { degree, .. } => *degree,
        }
    }
}

/// Intersection of a line with a surface of degree `n`: the roots of the
/// degree-`n` binary form obtained by restricting the surface equation.
pub fn line_surface_intersection(
    line: &ProjLine,
    surface: &SparsePolynomial,
    rng: &mut impl Rng,
) -> Result<Vec<FiberPoint>> {
    let field = surface.field().clone();
    let restriction = restrict_to_line(line, surface)?;
    if restriction.is_zero() {
        return Err(Error::LineOnSurface);
    }
    let n = restriction.total_degree() as usize;
    // dehomogenize with parameter u = s/t; the lost degree is the
    // multiplicity of the root at (s:t) = (1:0), which is the point `a`
    let u = restriction.dehomogenize(1, &field.one())?.drop_var(1)?;
    let q = DensePoly::from_sparse(&u, 0)?;
    let mut out = vec![];
    let deficiency = n - q.deg();
    if deficiency > 0 {
        out.push(FiberPoint::Explicit {
            point: line.a.clone(),
            multiplicity: deficiency,
        });
    }
    let (_, factors) = factor_univariate(&q, rng)?;
    for (g, mult) in factors {
        if g.deg() == 1 {
            let root = field.neg(&g.coeff(0));
            let coords = line.point_at(&root, &field.one());
            out.push(FiberPoint::Explicit {
                point: ProjPoint::new(&field, coords)?,
                multiplicity: mult,
            });
        } else {
            out.push(FiberPoint::Packet {
                degree: g.deg(),
                min_poly: g,
                multiplicity: mult,
            });
        }
    }
    debug_assert_eq!(
        out.iter()
            .map(|p| p.multiplicity() * p.geometric_count())
            .sum::<usize>(),
        n
    );
    Ok(out)
}

/// The binary form `G(s*a + t*b)` in the two line parameters.
pub fn restrict_to_line(
    line: &ProjLine,
    surface: &SparsePolynomial,
) -> Result<SparsePolynomial> {
    let field = surface.field().clone();
    if surface.nvars() != 4 {
        return Err(Error::ArityMismatch(surface.nvars(), 4));
    }
    let images: Vec<SparsePolynomial> = (0..4)
        .map(|j| {
            let s_part = SparsePolynomial::monomial(
                &field,
                2,
                vec![1, 0],
                line.a.coords()[j].clone(),
            );
            let t_part = SparsePolynomial::monomial(
                &field,
                2,
                vec![0, 1],
                line.b.coords()[j].clone(),
            );
            &s_part + &t_part
        })
        .collect();
    surface.substitute_all(&images)
}

/// True when the line meets the surface transversally: `n` distinct
/// geometric points, i.e. every fiber multiplicity is one.
pub fn transversality_check(
    line: &ProjLine,
    surface: &SparsePolynomial,
    rng: &mut impl Rng,
) -> Result<bool> {
    let fiber = line_surface_intersection(line, surface, rng)?;
    Ok(fiber.iter().all(|p| p.multiplicity() == 1))
}

/// The pair (cone, surface) with the normalizing frame: the data of the
/// curve cut on the surface by the cone.
#[derive(Debug, Clone)]
pub struct ConeSection {
    cone: SparsePolynomial,
    surface: SparsePolynomial,
    /// sends the vertex to (0:0:0:1) and the base plane to the first three
    /// coordinates
    normalizing_frame: Matrix,
    curve: PlaneCurve,
    vertex: ProjPoint,
}

impl ConeSection {
    pub fn cone(&self) -> &SparsePolynomial {
        &self.cone
    }

    pub fn surface(&self) -> &SparsePolynomial {
        &self.surface
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn vertex(&self) -> &ProjPoint {
        &self.vertex
    }

    pub fn normalizing_frame(&self) -> &Matrix {
        &self.normalizing_frame
    }

    /// Restriction of the cone back to its base plane, which reproduces the
    /// curve equation exactly.
    pub fn cone_restricted_to_plane(&self) -> Result<SparsePolynomial> {
        let field = self.cone.field().clone();
        let frame = self.curve.frame();
        let images: Vec<SparsePolynomial> = (0..4)
            .map(|i| {
                let mut p = SparsePolynomial::zero(&field, 3);
                for j in 0..3 {
                    let c = frame.get(i, j);
                    if !field.is_zero(c) {
                        let mut exps = vec![0u32; 3];
                        exps[j] = 1;
                        p = &p + &SparsePolynomial::monomial(&field, 3, exps, c.clone());
                    }
                }
                p
            })
            .collect();
        self.cone.substitute_all(&images)
    }
}

/// Builds the cone over `curve` with the given vertex and bundles it with
/// the surface, rejecting common components.
pub fn cone_section(
    curve: &PlaneCurve,
    vertex: &ProjPoint,
    surface: &SparsePolynomial,
) -> Result<ConeSection> {
    if surface.nvars() != 4 {
        return Err(Error::ArityMismatch(surface.nvars(), 4));
    }
    if surface.homogeneous_degree().unwrap_or(0) < 1 {
        return Err(Error::InvalidParameter(
            "surface equation must be homogeneous of positive degree".into(),
        ));
    }
    let cone = cone_equation(curve, vertex)?;
    let common = gcd::gcd(&cone, surface)?;
    if !common.is_constant() {
        return Err(Error::CommonComponent);
    }
    let frame = vertex_frame(curve, vertex)?.inverse()?;
    Ok(ConeSection {
        cone,
        surface: surface.clone(),
        normalizing_frame: frame,
        curve: curve.clone(),
        vertex: vertex.clone(),
    })
}

/// Samples a projective point with small integer coordinates.
pub fn sample_point(field: &Field, bound: i64, rng: &mut impl Rng) -> ProjPoint {
    loop {
        let coords: Vec<i64> = (0..4).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coords.iter().any(|&c| c != 0) {
            return ProjPoint::from_i64(field, &coords);
        }
    }
}

/// Irreducibility of the section curve, decided on a plane model: project
/// from a random point off both surfaces, eliminate, reduce, and certify.
pub fn section_irreducibility(
    cs: &ConeSection,
    retries: usize,
    rng: &mut impl Rng,
) -> Result<Irreducibility> {
    let field = cs.cone.field().clone();
    for _ in 0..retries.max(1) {
        let center = sample_point(&field, 25, rng);
        let f_val = cs.cone.eval(center.coords())?;
        let g_val = cs.surface.eval(center.coords())?;
        if field.is_zero(&f_val) || field.is_zero(&g_val) {
            continue;
        }
        // coordinate change sending the center to (0:0:0:1)
        let mut m = Matrix::identity(&field, 4);
        for i in 0..4 {
            m.set(i, 3, center.coords()[i].clone());
        }
        if !m.is_invertible()? {
            continue;
        }
        let f2 = substitute_matrix(&cs.cone, &m)?;
        let g2 = substitute_matrix(&cs.surface, &m)?;
        let plane_model = resultant(&f2, &g2, 3)?;
        if plane_model.is_zero() {
            continue;
        }
        let plane_model = plane_model.drop_var(3)?;
        let reduced = gcd::squarefree_part(&plane_model)?;
        match irreducibility_test(&reduced, rng)? {
            Irreducibility::Unknown => continue,
            verdict => return Ok(verdict),
        }
    }
    Ok(Irreducibility::Unknown)
}

/// Applies the linear substitution `X := M * u` to a 4-variable polynomial.
pub fn substitute_matrix(p: &SparsePolynomial, m: &Matrix) -> Result<SparsePolynomial> {
    p.linear_change(m)
}

// ---------------------------------------------------------------------------
// scene files
// ---------------------------------------------------------------------------

/// On-disk description of a cone construction: the plane frame, the curve
/// equation in plane coordinates, the vertex, and the surface equation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneJson {
    /// "q" or "q[t]/(m)" in the coefficient grammar
    #[serde(default = "default_field_descriptor")]
    pub field: String,
    /// names for the three plane coordinates
    #[serde(default = "default_curve_vars")]
    pub curve_vars: Vec<String>,
    pub curve: String,
    /// names for the four ambient coordinates
    #[serde(default = "default_ambient_vars")]
    pub vars: Vec<String>,
    /// three basis points spanning the plane (columns); defaults to the
    /// coordinate plane `w = 0`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    pub vertex: Vec<String>,
    pub surface: String,
}

fn default_field_descriptor() -> String {
    "q".to_string()
}

fn default_curve_vars() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

fn default_ambient_vars() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into(), "w".into()]
}

/// A fully parsed scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub field: Field,
    pub curve: PlaneCurve,
    pub vertex: ProjPoint,
    pub surface: SparsePolynomial,
}

/// Parses a field descriptor: `q`, `fP` for a prime P, or `q[g]/(m)` with
/// a monic modulus in the generator `g`.
pub fn parse_field_descriptor(s: &str) -> Result<Field> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    if let Some(rest) = s.strip_prefix('f').or_else(|| s.strip_prefix('F')) {
        if let Ok(p) = rest.parse::<u64>() {
            return Field::prime(p);
        }
    }
    // q[t]/(m)
    let body = s
        .strip_prefix('q')
        .or_else(|| s.strip_prefix('Q'))
        .ok_or_else(|| Error::Parse(format!("bad field descriptor '{s}'")))?;
    let open = body
        .find('[')
        .ok_or_else(|| Error::Parse("missing '[' in extension descriptor".into()))?;
    let close = body
        .find(']')
        .ok_or_else(|| Error::Parse("missing ']' in extension descriptor".into()))?;
    let generator = body[open + 1..close].trim().to_string();
    if generator.is_empty() {
        return Err(Error::Parse("empty generator name".into()));
    }
    let after = body[close + 1..].trim();
    let modulus_str = after
        .strip_prefix('/')
        .ok_or_else(|| Error::Parse("missing '/' in extension descriptor".into()))?
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')');
    // parse the modulus as a univariate polynomial in the generator
    let m = parse_polynomial(modulus_str, &[&generator], &Field::Rational)?;
    let deg = m.total_degree() as usize;
    let mut coeffs = vec![num_rational::BigRational::from(num_bigint::BigInt::from(0)); deg + 1];
    for (mono, c) in m.terms() {
        if let Coeff::Rat(r) = c {
            coeffs[mono.0[0] as usize] = r.clone();
        }
    }
    Field::extension(coeffs, &generator)
}

impl Scene {
    pub fn from_json(json: &SceneJson) -> Result<Scene> {
        let field = parse_field_descriptor(&json.field)?;
        if json.curve_vars.len() != 3 {
            return Err(Error::ArityMismatch(json.curve_vars.len(), 3));
        }
        if json.vars.len() != 4 {
            return Err(Error::ArityMismatch(json.vars.len(), 4));
        }
        let cvars: Vec<&str> = json.curve_vars.iter().map(|s| s.as_str()).collect();
        let avars: Vec<&str> = json.vars.iter().map(|s| s.as_str()).collect();
        let curve_eq = parse_polynomial(&json.curve, &cvars, &field)?;
        let surface = parse_polynomial(&json.surface, &avars, &field)?;
        let vertex_coords: Result<Vec<Coeff>> = json
            .vertex
            .iter()
            .map(|s| parse_coeff(s, &field))
            .collect();
        let vertex = ProjPoint::new(&field, vertex_coords?)?;
        let curve = match &json.frame {
            None => PlaneCurve::on_w_plane(curve_eq)?,
            Some(cols) => {
                if cols.len() != 3 {
                    return Err(Error::ArityMismatch(cols.len(), 3));
                }
                let mut frame = Matrix::zero(&field, 4, 4);
                for (j, col) in cols.iter().enumerate() {
                    if col.len() != 4 {
                        return Err(Error::ArityMismatch(col.len(), 4));
                    }
                    for (i, s) in col.iter().enumerate() {
                        frame.set(i, j, parse_coeff(s, &field)?);
                    }
                }
                // complete with a coordinate vector keeping the frame
                // invertible
                let mut completed = None;
                for k in 0..4 {
                    let mut m = frame.clone();
                    m.set(k, 3, field.one());
                    if m.is_invertible()? {
                        completed = Some(m);
                        break;
                    }
                }
                let frame =
                    completed.ok_or_else(|| Error::InvalidParameter("degenerate frame".into()))?;
                PlaneCurve::new(curve_eq, frame)?
            }
        };
        Ok(Scene {
            field,
            curve,
            vertex,
            surface,
        })
    }

    pub fn parse(content: &str) -> Result<Scene> {
        let json: SceneJson = serde_json::from_str(content)
            .map_err(|e| Error::Parse(format!("bad scene JSON: {e}")))?;
        Scene::from_json(&json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::qpoly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(31)
    }

    fn q() -> Field {
        Field::Rational
    }

    fn cuspidal_cubic() -> PlaneCurve {
        PlaneCurve::on_w_plane(qpoly("y^2*z - x^3", &["x", "y", "z"])).unwrap()
    }

    #[test]
    fn cone_with_coordinate_vertex_lifts_verbatim() {
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let f = cone_equation(&c, &p).unwrap();
        assert_eq!(f, qpoly("y^2*z - x^3", &["x", "y", "z", "w"]));
    }

    #[test]
    fn cone_with_shifted_vertex() {
        // vertex (0:0:1:1) tilts the z coordinate: F = y^2(z - w) - x^3
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 1, 1]);
        let f = cone_equation(&c, &p).unwrap();
        assert_eq!(f, qpoly("y^2*(z - w) - x^3", &["x", "y", "z", "w"]));
        // cone property on random rays: F(q0 + t*p) = 0 for q0 on the cone
        let field = q();
        let mut r = rng();
        for _ in 0..20 {
            // parametrize the cuspidal cubic as (a^2 b, a^3, b^3)
            let a = field.from_i64(r.gen_range(-6..=6i64));
            let b = field.from_i64(r.gen_range(-6..=6i64));
            let q0 = vec![
                field.mul(&field.mul(&a, &a), &b),
                field.mul(&field.mul(&a, &a), &a),
                field.mul(&field.mul(&b, &b), &b),
                field.from_i64(0),
            ];
            let t = field.from_i64(r.gen_range(-9..=9i64));
            let moved: Vec<Coeff> = q0
                .iter()
                .zip(p.coords())
                .map(|(x, v)| field.add(x, &field.mul(&t, v)))
                .collect();
            assert!(field.is_zero(&f.eval(&moved).unwrap()));
        }
    }

    #[test]
    fn conic_cone_is_constant_along_rays() {
        let c = PlaneCurve::on_w_plane(qpoly("x*z - y^2", &["x", "y", "z"])).unwrap();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let f = cone_equation(&c, &p).unwrap();
        assert_eq!(f, qpoly("x*z - y^2", &["x", "y", "z", "w"]));
        assert_eq!(f.degree_in(3), 0);
    }

    #[test]
    fn vertex_on_plane_rejected() {
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[1, 2, 3, 0]);
        assert!(matches!(
            cone_equation(&c, &p),
            Err(Error::VertexOnPlane)
        ));
    }

    #[test]
    fn uniqueness_for_conic_and_line_exclusion() {
        let conic = PlaneCurve::on_w_plane(qpoly("x*z - y^2", &["x", "y", "z"])).unwrap();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let p2 = ProjPoint::from_i64(&q(), &[0, 1, 0, 1]);
        assert!(cone_uniqueness_check(&conic, &p, &p2).unwrap());
        assert!(matches!(
            cone_uniqueness_check(&conic, &p, &p),
            Err(Error::CoincidentVertices)
        ));
        let line = PlaneCurve::on_w_plane(qpoly("x + y - z", &["x", "y", "z"])).unwrap();
        assert!(matches!(
            cone_uniqueness_check(&line, &p, &p2),
            Err(Error::CurveIsLine)
        ));
    }

    #[test]
    fn fiber_of_fermat_cubic_on_coordinate_line() {
        // line x = y = 0 against x^3+y^3+z^3+w^3: (z+w)(z^2-zw+w^2)
        let g = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
        let line = ProjLine::through(
            ProjPoint::from_i64(&q(), &[0, 0, 1, 0]),
            ProjPoint::from_i64(&q(), &[0, 0, 0, 1]),
        )
        .unwrap();
        let fiber = line_surface_intersection(&line, &g, &mut rng()).unwrap();
        let explicit: Vec<&FiberPoint> = fiber
            .iter()
            .filter(|p| matches!(p, FiberPoint::Explicit { .. }))
            .collect();
        let packets: Vec<&FiberPoint> = fiber
            .iter()
            .filter(|p| matches!(p, FiberPoint::Packet { .. }))
            .collect();
        assert_eq!(explicit.len(), 1);
        assert_eq!(packets.len(), 1);
        if let FiberPoint::Explicit { point, multiplicity } = explicit[0] {
            assert_eq!(*multiplicity, 1);
            assert_eq!(point, &ProjPoint::from_i64(&q(), &[0, 0, 1, -1]));
        }
        if let FiberPoint::Packet { degree, multiplicity, min_poly } = packets[0] {
            assert_eq!(*degree, 2);
            assert_eq!(*multiplicity, 1);
            // u^2 - u + 1 where u parametrizes z/w
            assert_eq!(min_poly, &DensePoly::from_i64(&q(), &[1, -1, 1]));
        }
        assert!(transversality_check(&line, &g, &mut rng()).unwrap());
    }

    #[test]
    fn fermat_quartic_gives_single_packet() {
        let g = qpoly("x^4 + y^4 + z^4 + w^4", &["x", "y", "z", "w"]);
        let line = ProjLine::through(
            ProjPoint::from_i64(&q(), &[0, 0, 1, 0]),
            ProjPoint::from_i64(&q(), &[0, 0, 0, 1]),
        )
        .unwrap();
        let fiber = line_surface_intersection(&line, &g, &mut rng()).unwrap();
        assert_eq!(fiber.len(), 1);
        match &fiber[0] {
            FiberPoint::Packet { degree, multiplicity, .. } => {
                assert_eq!(*degree, 4);
                assert_eq!(*multiplicity, 1);
            }
            other => panic!("expected a quartic packet, got {other:?}"),
        }
    }

    #[test]
    fn line_on_surface_detected() {
        let g = qpoly("x*w - y*z", &["x", "y", "z", "w"]);
        let line = ProjLine::through(
            ProjPoint::from_i64(&q(), &[0, 0, 1, 0]),
            ProjPoint::from_i64(&q(), &[0, 0, 0, 1]),
        )
        .unwrap();
        assert!(matches!(
            line_surface_intersection(&line, &g, &mut rng()),
            Err(Error::LineOnSurface)
        ));
    }

    #[test]
    fn tangential_line_fails_transversality() {
        // restriction has the double root (z - w)^2 z at x = y = 0
        let g = qpoly("z^3 - 2*z^2*w + z*w^2 + x*z^2 + y^3", &["x", "y", "z", "w"]);
        let line = ProjLine::through(
            ProjPoint::from_i64(&q(), &[0, 0, 1, 0]),
            ProjPoint::from_i64(&q(), &[0, 0, 0, 1]),
        )
        .unwrap();
        assert!(!transversality_check(&line, &g, &mut rng()).unwrap());
    }

    #[test]
    fn cone_section_construction_and_errors() {
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
        let cs = cone_section(&c, &p, &fermat).unwrap();
        assert_eq!(cs.cone().total_degree(), 3);
        assert_eq!(cs.surface().total_degree(), 3);
        // restricting the cone to its plane reproduces the curve equation
        let restricted = cs.cone_restricted_to_plane().unwrap();
        assert!(restricted.proportional_to(c.equation()));
        // sharing a component is rejected
        let f_as_surface = cone_equation(&c, &p).unwrap();
        assert!(matches!(
            cone_section(&c, &p, &f_as_surface),
            Err(Error::CommonComponent)
        ));
    }

    #[test]
    fn section_of_cubic_cone_and_fermat_is_irreducible() {
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
        let cs = cone_section(&c, &p, &fermat).unwrap();
        let verdict = section_irreducibility(&cs, 8, &mut rng()).unwrap();
        assert_eq!(verdict, Irreducibility::Irreducible);
    }

    #[test]
    fn reducible_curve_gives_reducible_section() {
        // two lines x*y in the plane w = 0
        let c = PlaneCurve::on_w_plane(qpoly("x*y", &["x", "y", "z"])).unwrap();
        let p = ProjPoint::from_i64(&q(), &[0, 0, 0, 1]);
        let quadric = qpoly("x^2 + y^2 + z^2 + w^2", &["x", "y", "z", "w"]);
        let cs = cone_section(&c, &p, &quadric).unwrap();
        let verdict = section_irreducibility(&cs, 8, &mut rng()).unwrap();
        assert_eq!(verdict, Irreducibility::Reducible);
    }

    #[test]
    fn frame_normalization_round_trip() {
        let c = cuspidal_cubic();
        let p = ProjPoint::from_i64(&q(), &[1, 2, 1, 3]);
        let f = cone_equation(&c, &p).unwrap();
        let n = vertex_frame(&c, &p).unwrap();
        let ninv = n.inverse().unwrap();
        // conjugating by the frame and back is the identity
        let normalized = substitute_matrix(&f, &n).unwrap();
        let back = substitute_matrix(&normalized, &ninv).unwrap();
        assert_eq!(back, f);
        // in normalized coordinates the last variable is absent
        assert_eq!(normalized.degree_in(3), 0);
    }

    #[test]
    fn scene_parsing() {
        let content = r#"{
            "curve": "y^2*z - x^3",
            "vertex": ["0", "0", "0", "1"],
            "surface": "x^3 + y^3 + z^3 + w^3"
        }"#;
        let scene = Scene::parse(content).unwrap();
        assert_eq!(scene.field, Field::Rational);
        assert_eq!(scene.curve.degree(), 3);
        assert_eq!(scene.surface.total_degree(), 3);
        let descriptor = parse_field_descriptor("q[t]/(t^2 - t + 1)").unwrap();
        assert_eq!(descriptor, Field::sixth_root_extension());
    }
}
