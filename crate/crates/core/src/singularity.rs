//! Local analytic analysis of plane-curve germs: singular loci, Milnor and
//! Tjurina numbers via certified jet linear algebra, the ADE
//! classification, and the transfer of singularity types from a plane
//! curve onto the section of a cone over it.

use serde::Serialize;

use rand::Rng;

use crate::dense::DensePoly;
use crate::error::Error;
use crate::factor::factor_univariate;
use crate::field::{Coeff, Field};
use crate::gcd;
use crate::geometry::{
    cone_section, line_surface_intersection, transversality_check, ConeSection, FiberPoint,
    PlaneCurve, ProjLine, ProjPoint,
};
use crate::linalg::Echelon;
use crate::poly::SparsePolynomial;
use crate::resultant::resultant;
use crate::series::implicit_series_solve;
use crate::Result;

/// Jet truncation schedule for the local-algebra computations.
#[derive(Debug, Clone, Copy)]
pub struct JetOptions {
    /// first truncation order tried
    pub start: u32,
    /// orders double until certification or this ceiling
    pub ceiling: u32,
}

impl Default for JetOptions {
    fn default() -> Self {
        JetOptions {
            start: 8,
            ceiling: 64,
        }
    }
}

/// A plane-curve germ at the origin: a polynomial (possibly the jet of a
/// power series) in two local variables with zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGerm {
    poly: SparsePolynomial,
    /// truncation order when the germ is the jet of a series
    truncation: Option<u32>,
}

impl CurveGerm {
    pub fn new(poly: SparsePolynomial) -> Result<CurveGerm> {
        Self::with_truncation(poly, None)
    }

    pub fn with_truncation(poly: SparsePolynomial, truncation: Option<u32>) -> Result<CurveGerm> {
        if poly.nvars() != 2 {
            return Err(Error::ArityMismatch(poly.nvars(), 2));
        }
        let constant = poly.coeff_of(&[0, 0]);
        if !poly.field().is_zero(&constant) {
            return Err(Error::InvalidParameter(
                "germ must vanish at the origin".into(),
            ));
        }
        Ok(CurveGerm { poly, truncation })
    }

    pub fn poly(&self) -> &SparsePolynomial {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    /// Order of vanishing at the origin (the multiplicity of the germ).
    pub fn order(&self) -> Option<u32> {
        self.poly
            .terms()
            .iter()
            .map(|(m, _)| m.total_degree())
            .min()
    }

    /// True when the linear part is nonzero, i.e. the curve is smooth here.
    pub fn is_smooth(&self) -> bool {
        self.order() == Some(1)
    }
}

/// The simple classes plus the buckets on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularityClass {
    Smooth,
    A(u32),
    D(u32),
    E(u32),
    NonSimple { mu: u64, corank: u8 },
}

impl SingularityClass {
    pub fn is_simple(&self) -> bool {
        matches!(
            self,
            SingularityClass::A(_) | SingularityClass::D(_) | SingularityClass::E(_)
        )
    }

    /// Tjurina number of a simple class: the subscript.
    pub fn tau(&self) -> Result<u64> {
        match self {
            SingularityClass::A(k) => Ok(*k as u64),
            SingularityClass::D(k) => Ok(*k as u64),
            SingularityClass::E(k) => Ok(*k as u64),
            other => Err(Error::NotSimple(other.to_string())),
        }
    }

    /// Milnor number; equal to tau for the (quasi-homogeneous) simple
    /// normal forms.
    pub fn mu(&self) -> Result<u64> {
        self.tau()
    }

    /// The normal form as a two-variable polynomial over the field.
    pub fn normal_form(&self, field: &Field) -> Result<SparsePolynomial> {
        let p = |terms: &[(&[u32], i64)]| SparsePolynomial::from_int_terms(field, 2, terms);
        match self {
            SingularityClass::A(k) if *k >= 1 => {
                // x^2 - y^(k+1)
                Ok(p(&[(&[2, 0], 1), (&[0, k + 1], -1)]))
            }
            SingularityClass::D(k) if *k >= 4 => {
                // x^2 y - y^(k-1)
                Ok(p(&[(&[2, 1], 1), (&[0, k - 1], -1)]))
            }
            SingularityClass::E(6) => Ok(p(&[(&[3, 0], 1), (&[0, 4], -1)])),
            SingularityClass::E(7) => Ok(p(&[(&[3, 0], 1), (&[1, 3], -1)])),
            SingularityClass::E(8) => Ok(p(&[(&[3, 0], 1), (&[0, 5], -1)])),
            other => Err(Error::InvalidParameter(format!(
                "no normal form for {other}"
            ))),
        }
    }
}

impl Serialize for SingularityClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularityClass::Smooth => write!(f, "smooth"),
            SingularityClass::A(k) => write!(f, "A{k}"),
            SingularityClass::D(k) => write!(f, "D{k}"),
            SingularityClass::E(k) => write!(f, "E{k}"),
            SingularityClass::NonSimple { mu, corank } => {
                write!(f, "non-simple(mu={mu},corank={corank})")
            }
        }
    }
}

impl std::str::FromStr for SingularityClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<SingularityClass> {
        let s = s.trim().replace('_', "");
        let (head, tail) = s.split_at(1);
        let k: u32 = tail
            .parse()
            .map_err(|_| Error::Parse(format!("bad class index in '{s}'")))?;
        match head {
            "a" | "A" if k >= 1 => Ok(SingularityClass::A(k)),
            "d" | "D" if k >= 4 => Ok(SingularityClass::D(k)),
            "e" | "E" if (6..=8).contains(&k) => Ok(SingularityClass::E(k)),
            _ => Err(Error::Parse(format!("unknown singularity class '{s}'"))),
        }
    }
}

/// A located singular point with its computed invariants.
#[derive(Debug, Clone)]
pub struct SingularPointRecord {
    pub point: ProjPoint,
    pub germ: CurveGerm,
    pub mu: u64,
    pub tau: u64,
    pub class: SingularityClass,
}

// ---------------------------------------------------------------------------
// jet-space linear algebra
// ---------------------------------------------------------------------------

/// Monomials of total degree < order in two variables, in a fixed order.
fn jet_monomials(order: u32) -> Vec<(u32, u32)> {
    let mut out = vec![];
    for d in 0..order {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

/// Codimension of the span of all monomial multiples of the generators in
/// the jet space below `order`, certified by saturation of the two top
/// degrees: when every monomial of degree order-2 and order-1 lies in the
/// span, the codimension equals the codimension of the full ideal.
fn jet_codimension(
    generators: &[SparsePolynomial],
    opts: JetOptions,
    cap: Option<u32>,
) -> Option<u64> {
    let field = generators[0].field().clone();
    let mut order = opts.start.max(4);
    loop {
        if let Some(cap) = cap {
            if order > cap {
                return None;
            }
        }
        let monos = jet_monomials(order);
        let index: std::collections::HashMap<(u32, u32), usize> = monos
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let width = monos.len();
        let mut ech = Echelon::new(&field, width);
        for g in generators {
            if g.is_zero() {
                continue;
            }
            let ord_g = g
                .terms()
                .iter()
                .map(|(m, _)| m.total_degree())
                .min()
                .unwrap();
            if ord_g >= order {
                continue;
            }
            for &(a, b) in &monos {
                if a + b + ord_g >= order {
                    continue;
                }
                let mut row = vec![field.zero(); width];
                let mut nonzero = false;
                for (m, c) in g.terms() {
                    let e = (m.0[0] + a, m.0[1] + b);
                    if e.0 + e.1 < order {
                        let idx = index[&e];
                        row[idx] = field.add(&row[idx], c);
                        nonzero = true;
                    }
                }
                if nonzero {
                    ech.add_row(row);
                }
            }
        }
        // certification: all monomials in the top two degrees are spanned
        let mut certified = true;
        'outer: for d in [order - 2, order - 1] {
            for i in 0..=d {
                let mut unit = vec![field.zero(); width];
                unit[index[&(i, d - i)]] = field.one();
                if !ech.contains(&unit) {
                    certified = false;
                    break 'outer;
                }
            }
        }
        if certified {
            return Some((width - ech.rank()) as u64);
        }
        if order >= opts.ceiling {
            return None;
        }
        order = (order * 2).min(opts.ceiling).min(cap.unwrap_or(u32::MAX));
        if let Some(cap) = cap {
            if order > cap {
                return None;
            }
        }
    }
}

/// Milnor number: the codimension of the Jacobian ideal. Smooth germs give
/// 0; `None` means the jet ceiling was hit without certification.
pub fn milnor_number(germ: &CurveGerm, opts: JetOptions) -> Result<Option<u64>> {
    if germ.poly.is_zero() {
        return Err(Error::ZeroInput("milnor number".into()));
    }
    if germ.is_smooth() {
        return Ok(Some(0));
    }
    let gx = germ.poly.differentiate(0)?;
    let gy = germ.poly.differentiate(1)?;
    Ok(jet_codimension(&[gx, gy], opts, germ.truncation))
}

/// Tjurina number: the codimension of the ideal generated by the germ and
/// its partials.
pub fn tjurina_number(germ: &CurveGerm, opts: JetOptions) -> Result<Option<u64>> {
    if germ.poly.is_zero() {
        return Err(Error::ZeroInput("tjurina number".into()));
    }
    if germ.is_smooth() {
        return Ok(Some(0));
    }
    let gx = germ.poly.differentiate(0)?;
    let gy = germ.poly.differentiate(1)?;
    Ok(jet_codimension(
        &[germ.poly.clone(), gx, gy],
        opts,
        germ.truncation,
    ))
}

/// Corank of the Hessian at the origin: 2 minus the rank of the matrix of
/// second derivatives.
pub fn hessian_corank(germ: &CurveGerm) -> usize {
    let field = germ.field().clone();
    let q20 = germ.poly.coeff_of(&[2, 0]);
    let q11 = germ.poly.coeff_of(&[1, 1]);
    let q02 = germ.poly.coeff_of(&[0, 2]);
    let two = field.from_i64(2);
    let h = crate::linalg::Matrix::from_rows(
        &field,
        vec![
            vec![field.mul(&two, &q20), q11.clone()],
            vec![q11, field.mul(&two, &q02)],
        ],
    )
    .expect("2x2");
    2 - h.rank()
}

/// ADE classification by the corank decision tree, cross-checked against
/// the computed Milnor and Tjurina numbers.
pub fn classify_simple(germ: &CurveGerm, opts: JetOptions) -> Result<SingularityClass> {
    let mu = match milnor_number(germ, opts)? {
        Some(mu) => mu,
        None => return Err(Error::Undetermined(opts.ceiling as usize)),
    };
    if mu == 0 {
        return Ok(SingularityClass::Smooth);
    }
    let tau = match tjurina_number(germ, opts)? {
        Some(tau) => tau,
        None => return Err(Error::Undetermined(opts.ceiling as usize)),
    };
    let corank = hessian_corank(germ);
    let class = match corank {
        0 => SingularityClass::A(1),
        1 => SingularityClass::A(mu as u32),
        2 => {
            let cubic = germ.poly.homogeneous_part(3);
            if cubic.is_zero() {
                if (6..=8).contains(&mu) {
                    SingularityClass::E(mu as u32)
                } else {
                    SingularityClass::NonSimple { mu, corank: 2 }
                }
            } else {
                // root multiplicity of the binary cubic via the gcd of its
                // partial derivatives: degree 0 = three distinct roots,
                // 1 = one double root, 2 = a triple root
                let cx = cubic.differentiate(0)?;
                let cy = cubic.differentiate(1)?;
                let g = gcd::gcd(&cx, &cy)?;
                match g.total_degree() {
                    0 => SingularityClass::D(4),
                    1 => SingularityClass::D(mu as u32),
                    2 => {
                        if (6..=8).contains(&mu) {
                            SingularityClass::E(mu as u32)
                        } else {
                            SingularityClass::NonSimple { mu, corank: 2 }
                        }
                    }
                    _ => {
                        return Err(Error::Internal(
                            "binary cubic gcd degree exceeds 2".into(),
                        ))
                    }
                }
            }
        }
        _ => unreachable!("corank of a 2x2 matrix"),
    };
    // cross-check: the class invariants must reproduce mu and tau
    if class.is_simple() {
        let k = class.tau()?;
        if mu != k || tau != k {
            return Err(Error::Internal(format!(
                "classification {class} inconsistent with mu={mu}, tau={tau}"
            )));
        }
    }
    Ok(class)
}

// ---------------------------------------------------------------------------
// singular locus of a plane curve
// ---------------------------------------------------------------------------

/// A cluster of conjugate singular points described by an irreducible
/// eliminant factor.
#[derive(Debug, Clone)]
pub struct SingularPacket {
    /// monic irreducible over the base field
    pub min_poly: DensePoly,
    /// geometric points per root of the eliminant factor; 0 when the
    /// base field is already an extension and resolution would need a
    /// tower
    pub points_per_root: usize,
    /// multiplicity of the factor in the eliminant
    pub multiplicity: usize,
    /// true for clusters on the chart line at infinity
    pub at_infinity: bool,
}

impl SingularPacket {
    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn geometric_count(&self) -> usize {
        self.degree() * self.points_per_root
    }

    pub fn resolved(&self) -> bool {
        self.points_per_root > 0
    }
}

/// The singular locus of a reduced plane curve: explicit points over the
/// base field plus conjugate packets.
#[derive(Debug, Clone)]
pub struct SingularLocus {
    pub points: Vec<ProjPoint>,
    pub packets: Vec<SingularPacket>,
}

impl SingularLocus {
    /// Total number of geometric singular points, counting each packet by
    /// its degree.
    pub fn geometric_count(&self) -> usize {
        self.points.len() + self.packets.iter().map(|p| p.geometric_count()).sum::<usize>()
    }
}

/// Computes the singular locus of a squarefree homogeneous curve equation
/// by pairwise resultant elimination, with every candidate verified
/// against all partials.
pub fn singular_locus(f: &SparsePolynomial, rng: &mut impl Rng) -> Result<SingularLocus> {
    if f.nvars() != 3 {
        return Err(Error::ArityMismatch(f.nvars(), 3));
    }
    let degree = f
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidParameter("curve equation not homogeneous".into()))?;
    if degree < 2 {
        return Err(Error::InvalidParameter(
            "singular locus needs degree >= 2".into(),
        ));
    }
    if !gcd::is_squarefree(f)? {
        return Err(Error::NotSquarefree);
    }
    let field = f.field().clone();
    let partials = [
        f.differentiate(0)?,
        f.differentiate(1)?,
        f.differentiate(2)?,
    ];

    let mut points = vec![];
    let mut packets = vec![];

    // affine chart z = 1
    let affine: Vec<SparsePolynomial> = partials
        .iter()
        .map(|p| {
            p.dehomogenize(2, &field.one())
                .and_then(|q| q.drop_var(2))
        })
        .collect::<Result<_>>()?;
    affine_singularities(&affine, &field, rng, &mut points, &mut packets)?;

    // the line z = 0
    let at_infinity: Vec<SparsePolynomial> = partials
        .iter()
        .map(|p| p.dehomogenize(2, &field.zero()).and_then(|q| q.drop_var(2)))
        .collect::<Result<_>>()?;
    infinity_singularities(&at_infinity, &field, rng, &mut points, &mut packets)?;

    // verify every explicit point against all three partials and the curve
    for pt in &points {
        for p in &partials {
            debug_assert!(field.is_zero(&p.eval(pt.coords())?));
        }
        debug_assert!(field.is_zero(&f.eval(pt.coords())?));
    }
    Ok(SingularLocus { points, packets })
}

/// Solves `g0 = g1 = g2 = 0` in the affine chart.
fn affine_singularities(
    g: &[SparsePolynomial],
    field: &Field,
    rng: &mut impl Rng,
    points: &mut Vec<ProjPoint>,
    packets: &mut Vec<SingularPacket>,
) -> Result<()> {
    let nonzero: Vec<&SparsePolynomial> = g.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::NonIsolatedSingularities);
    }
    // a common factor of all the partials would be a singular curve
    let mut common = nonzero[0].clone();
    for p in &nonzero[1..] {
        common = gcd::gcd(&common, p)?;
    }
    if !common.is_constant() {
        return Err(Error::NonIsolatedSingularities);
    }
    if nonzero.len() == 1 {
        // a single surviving partial cuts a curve, not points
        return Err(Error::NonIsolatedSingularities);
    }

    let eliminant = |elim_var: usize| -> Result<Option<DensePoly>> {
        let keep = 1 - elim_var;
        let mut acc: Option<DensePoly> = None;
        for i in 0..nonzero.len() {
            for j in i + 1..nonzero.len() {
                let r = resultant(nonzero[i], nonzero[j], elim_var)?;
                if r.is_zero() {
                    continue;
                }
                let r1 = r.drop_var(elim_var)?;
                let dense = DensePoly::from_sparse(&r1, if keep < elim_var { keep } else { 0 })?;
                acc = Some(match acc {
                    None => dense,
                    Some(prev) => prev.gcd(&dense),
                });
            }
        }
        Ok(acc)
    };

    let (elim_var, eliminant_x) = match eliminant(1)? {
        Some(e) => (1usize, e),
        None => match eliminant(0)? {
            Some(e) => (0usize, e),
            None => return Err(Error::NonIsolatedSingularities),
        },
    };
    let coord_var = 1 - elim_var;
    if eliminant_x.is_constant() {
        return Ok(());
    }

    let (_, factors) = factor_univariate(&eliminant_x, rng)?;
    for (q, mult) in factors {
        if q.deg() == 1 {
            let x0 = field.neg(&q.coeff(0));
            let fibers = specialized_gcd(&nonzero, coord_var, &x0, elim_var)?;
            let fiber_gcd = match fibers {
                Some(d) => d,
                None => continue,
            };
            if fiber_gcd.is_constant() {
                continue; // spurious eliminant root
            }
            let (_, yfactors) = factor_univariate(&fiber_gcd, rng)?;
            for (qy, _) in yfactors {
                if qy.deg() == 1 {
                    let y0 = field.neg(&qy.coeff(0));
                    let mut coords = vec![field.zero(); 3];
                    coords[coord_var] = x0.clone();
                    coords[elim_var] = y0;
                    coords[2] = field.one();
                    points.push(ProjPoint::new_n(field, coords)?);
                } else {
                    packets.push(SingularPacket {
                        points_per_root: 1,
                        min_poly: qy,
                        multiplicity: mult,
                        at_infinity: false,
                    });
                }
            }
        } else {
            // conjugate cluster: resolve the second coordinate over the
            // extension defined by the eliminant factor
            match field {
                Field::Rational => {
                    let modulus: Vec<num_rational::BigRational> = q
                        .coeffs()
                        .iter()
                        .map(|c| match c {
                            Coeff::Rat(r) => r.clone(),
                            _ => unreachable!(),
                        })
                        .collect();
                    let ext = Field::extension(modulus, "r")?;
                    let x0 = ext.generator()?;
                    let lifted: Vec<SparsePolynomial> = nonzero
                        .iter()
                        .map(|p| {
                            p.map_coeffs(&ext, |c| match c {
                                Coeff::Rat(r) => ext.from_rational(r.clone()),
                                _ => unreachable!(),
                            })
                        })
                        .collect();
                    let lifted_refs: Vec<&SparsePolynomial> = lifted.iter().collect();
                    let fiber_gcd = specialized_gcd(&lifted_refs, coord_var, &x0, elim_var)?;
                    let d = match fiber_gcd {
                        Some(d) => d,
                        None => continue,
                    };
                    if d.is_constant() {
                        continue; // spurious
                    }
                    let sf = d.squarefree_part()?;
                    packets.push(SingularPacket {
                        min_poly: q,
                        points_per_root: sf.deg(),
                        multiplicity: mult,
                        at_infinity: false,
                    });
                }
                _ => {
                    // resolving would need a tower of extensions
                    packets.push(SingularPacket {
                        min_poly: q,
                        points_per_root: 0,
                        multiplicity: mult,
                        at_infinity: false,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Substitutes `var := value` in each polynomial and takes the gcd of the
/// resulting univariate polynomials in the other variable.
fn specialized_gcd(
    polys: &[&SparsePolynomial],
    var: usize,
    value: &Coeff,
    other: usize,
) -> Result<Option<DensePoly>> {
    let mut acc: Option<DensePoly> = None;
    for p in polys {
        let s = p.dehomogenize(var, value)?;
        let s = s.drop_var(var)?;
        let dense = DensePoly::from_sparse(&s, if other > var { other - 1 } else { other })?;
        if dense.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => dense,
            Some(prev) => prev.gcd(&dense),
        });
        if acc.as_ref().map_or(false, |d| d.is_constant()) {
            break;
        }
    }
    Ok(acc)
}

/// Singular points on the line z = 0: common roots of the restricted
/// partials, as a binary form problem.
fn infinity_singularities(
    b: &[SparsePolynomial],
    field: &Field,
    rng: &mut impl Rng,
    points: &mut Vec<ProjPoint>,
    packets: &mut Vec<SingularPacket>,
) -> Result<()> {
    let nonzero: Vec<&SparsePolynomial> = b.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        // all partials divisible by z: excluded by squarefreeness
        return Err(Error::NonIsolatedSingularities);
    }
    let mut common = nonzero[0].clone();
    for p in &nonzero[1..] {
        common = gcd::gcd(&common, p)?;
        if common.is_constant() {
            return Ok(());
        }
    }
    // roots of the binary form `common(x, y)`
    let deg = common.total_degree();
    let dehom = common.dehomogenize(1, &field.one())?.drop_var(1)?;
    let q = DensePoly::from_sparse(&dehom, 0)?;
    if (deg as usize) > q.deg() {
        // the root (1:0:0), with x^... deficiency
        points.push(ProjPoint::from_i64(field, &[1, 0, 0]));
    }
    let (_, factors) = factor_univariate(&q, rng)?;
    for (g, mult) in factors {
        if g.deg() == 1 {
            let u0 = field.neg(&g.coeff(0));
            points.push(ProjPoint::new_n(
                field,
                vec![u0, field.one(), field.zero()],
            )?);
        } else {
            packets.push(SingularPacket {
                points_per_root: 1,
                min_poly: g,
                multiplicity: mult,
                at_infinity: true,
            });
        }
    }
    Ok(())
}

/// Local equation of a curve at one of its points: dehomogenize at a
/// nonzero coordinate and translate the point to the origin.
pub fn local_germ(f: &SparsePolynomial, point: &ProjPoint) -> Result<CurveGerm> {
    if f.nvars() != 3 || point.dim() != 3 {
        return Err(Error::ArityMismatch(f.nvars(), 3));
    }
    let field = f.field().clone();
    if !field.is_zero(&f.eval(point.coords())?) {
        return Err(Error::NotOnCurve);
    }
    let chart = point
        .coords()
        .iter()
        .position(|c| !field.is_zero(c))
        .expect("projective point");
    debug_assert_eq!(point.coords()[chart], field.one());
    let affine = f.dehomogenize(chart, &field.one())?.drop_var(chart)?;
    let local: Vec<Coeff> = point
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chart)
        .map(|(_, c)| c.clone())
        .collect();
    let translated = affine.translate(&local)?;
    CurveGerm::new(translated)
}

/// Analyzes every rational singular point of a homogeneous curve equation.
pub fn singular_point_records(
    f: &SparsePolynomial,
    opts: JetOptions,
    rng: &mut impl Rng,
) -> Result<Vec<SingularPointRecord>> {
    let locus = singular_locus(f, rng)?;
    let mut out = vec![];
    for p in locus.points {
        let germ = local_germ(f, &p)?;
        let mu = milnor_number(&germ, opts)?
            .ok_or(Error::Undetermined(opts.ceiling as usize))?;
        let tau = tjurina_number(&germ, opts)?
            .ok_or(Error::Undetermined(opts.ceiling as usize))?;
        let class = classify_simple(&germ, opts)?;
        out.push(SingularPointRecord {
            point: p,
            germ,
            mu,
            tau,
            class,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// germs on the surface and the transfer check
// ---------------------------------------------------------------------------

/// The germ of the section curve at a point of the surface: solve the
/// smooth surface chart as a power series and substitute it into the cone
/// equation.
pub fn surface_chart_germ(
    cs: &ConeSection,
    point: &ProjPoint,
    order: u32,
) -> Result<CurveGerm> {
    let field = cs.cone().field().clone();
    if !field.is_zero(&cs.surface().eval(point.coords())?)
        || !field.is_zero(&cs.cone().eval(point.coords())?)
    {
        return Err(Error::NotOnCurve);
    }
    let grad_zero = (0..4)
        .map(|v| {
            cs.surface()
                .differentiate(v)
                .and_then(|d| d.eval(point.coords()))
        })
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|c| field.is_zero(c));
    if grad_zero {
        return Err(Error::SurfaceSingularAtPoint);
    }
    let chart = point
        .coords()
        .iter()
        .position(|c| !field.is_zero(c))
        .expect("projective point");
    let g_aff = cs
        .surface()
        .dehomogenize(chart, &field.one())?
        .drop_var(chart)?;
    let f_aff = cs
        .cone()
        .dehomogenize(chart, &field.one())?
        .drop_var(chart)?;
    let local: Vec<Coeff> = point
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chart)
        .map(|(_, c)| c.clone())
        .collect();
    // pick a solvable direction among the three affine coordinates
    let mut solve_var = None;
    for v in 0..3 {
        let d = g_aff.differentiate(v)?.eval(&local)?;
        if !field.is_zero(&d) {
            solve_var = Some(v);
            break;
        }
    }
    let solve_var = solve_var.ok_or(Error::SurfaceSingularAtPoint)?;
    let series = implicit_series_solve(&g_aff, &local, solve_var, order)?;
    // substitute into the cone equation, with the other coordinates moved
    // to the point
    let mut shift = local.clone();
    shift[solve_var] = field.zero();
    let f_shifted = f_aff.translate(&shift)?;
    let germ3 = series.substitute_into(&f_shifted, solve_var)?;
    let germ2 = germ3.poly().drop_var(solve_var)?;
    CurveGerm::with_truncation(germ2, Some(order))
}

/// Verdict for one fiber point of the transfer check.
#[derive(Debug, Clone)]
pub enum FiberVerdict {
    SameType {
        point: ProjPoint,
        class: SingularityClass,
        mu: u64,
        tau: u64,
    },
    Different {
        point: ProjPoint,
        expected: SingularityClass,
        found: SingularityClass,
    },
    SurfaceSingular {
        point: ProjPoint,
    },
    UnresolvedPacket {
        degree: usize,
    },
}

impl FiberVerdict {
    pub fn is_same(&self) -> bool {
        matches!(self, FiberVerdict::SameType { .. })
    }

    pub fn is_different(&self) -> bool {
        matches!(self, FiberVerdict::Different { .. })
    }
}

/// The full transfer report for one singular point of the base curve.
#[derive(Debug, Clone)]
pub struct TransferEntry {
    /// singular point in plane coordinates
    pub base_point: ProjPoint,
    /// its class on the base curve
    pub expected: SingularityClass,
    pub mu: u64,
    pub tau: u64,
    pub transversal: bool,
    pub fiber: Vec<FiberVerdict>,
}

/// Result of checking that the section curve carries a singularity of the
/// base type over every singular point of the base curve.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub entries: Vec<TransferEntry>,
    /// conjugate singular-point clusters of the base curve that were not
    /// analyzed pointwise
    pub unresolved_base_packets: usize,
}

impl TransferReport {
    pub fn any_different(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.fiber.iter().any(|v| v.is_different()))
    }

    pub fn all_resolved_same(&self) -> bool {
        !self.any_different()
            && self
                .entries
                .iter()
                .all(|e| e.fiber.iter().all(|v| !matches!(v, FiberVerdict::SurfaceSingular { .. })))
    }
}

/// Runs the whole pipeline: singular points of the base curve, fiber lines
/// through the vertex, transversality, and per-point classification of the
/// section germs.
pub fn transfer_check(
    curve: &PlaneCurve,
    vertex: &ProjPoint,
    surface: &SparsePolynomial,
    opts: JetOptions,
    rng: &mut impl Rng,
) -> Result<TransferReport> {
    let field = curve.field().clone();
    let cs = cone_section(curve, vertex, surface)?;
    let locus = singular_locus(curve.equation(), rng)?;
    let mut entries = vec![];
    for base_point in locus.points {
        let germ = local_germ(curve.equation(), &base_point)?;
        let mu = milnor_number(&germ, opts)?
            .ok_or(Error::Undetermined(opts.ceiling as usize))?;
        let tau = tjurina_number(&germ, opts)?
            .ok_or(Error::Undetermined(opts.ceiling as usize))?;
        let expected = classify_simple(&germ, opts)?;
        let ambient = curve.embed_point(&base_point)?;
        let line = ProjLine::through(vertex.clone(), ambient)?;
        let transversal = transversality_check(&line, surface, rng)?;
        let fiber_points = line_surface_intersection(&line, surface, rng)?;
        let mut fiber = vec![];
        for fp in fiber_points {
            match fp {
                FiberPoint::Explicit { point, .. } => {
                    let grad_zero = (0..4)
                        .map(|v| {
                            surface
                                .differentiate(v)
                                .and_then(|d| d.eval(point.coords()))
                        })
                        .collect::<Result<Vec<_>>>()?
                        .iter()
                        .all(|c| field.is_zero(c));
                    if grad_zero {
                        fiber.push(FiberVerdict::SurfaceSingular { point });
                        continue;
                    }
                    let mut order = (2 * mu + 2) as u32;
                    let found = loop {
                        let section_germ = surface_chart_germ(&cs, &point, order)?;
                        let class = classify_simple(&section_germ, opts)?;
                        if class.is_simple() || class == SingularityClass::Smooth {
                            break class;
                        }
                        // one doubling before reporting a mismatch
                        if order >= (4 * mu + 4) as u32 {
                            break class;
                        }
                        order *= 2;
                    };
                    if found == expected {
                        fiber.push(FiberVerdict::SameType {
                            point,
                            class: found,
                            mu,
                            tau,
                        });
                    } else {
                        fiber.push(FiberVerdict::Different {
                            point,
                            expected,
                            found,
                        });
                    }
                }
                FiberPoint::Packet { degree, .. } => {
                    fiber.push(FiberVerdict::UnresolvedPacket { degree });
                }
            }
        }
        entries.push(TransferEntry {
            base_point,
            expected,
            mu,
            tau,
            transversal,
            fiber,
        });
    }
    Ok(TransferReport {
        entries,
        unresolved_base_packets: locus.packets.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::qpoly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(41)
    }

    fn germ(s: &str) -> CurveGerm {
        CurveGerm::new(qpoly(s, &["x", "y"])).unwrap()
    }

    fn opts() -> JetOptions {
        JetOptions::default()
    }

    #[test]
    fn milnor_numbers_of_normal_forms() {
        // x^2 - y^5 has milnor number 4
        assert_eq!(milnor_number(&germ("x^2 - y^5"), opts()).unwrap(), Some(4));
        // node
        assert_eq!(milnor_number(&germ("x^2 - y^2"), opts()).unwrap(), Some(1));
        // x^3 - y^5 has milnor number 8
        assert_eq!(milnor_number(&germ("x^3 - y^5"), opts()).unwrap(), Some(8));
        // smooth germ reports 0
        assert_eq!(milnor_number(&germ("x + y^2"), opts()).unwrap(), Some(0));
    }

    #[test]
    fn tjurina_numbers_of_normal_forms() {
        // D5 normal form x^2 y - y^4
        assert_eq!(
            tjurina_number(&germ("x^2*y - y^4"), opts()).unwrap(),
            Some(5)
        );
        assert_eq!(tjurina_number(&germ("x^2 - y^2"), opts()).unwrap(), Some(1));
        // A4 in rotated coordinates
        let g = germ("(x+y)^2 - (x-y)^5");
        assert_eq!(tjurina_number(&g, opts()).unwrap(), Some(4));
        assert_eq!(milnor_number(&g, opts()).unwrap(), Some(4));
    }

    #[test]
    fn hessian_coranks() {
        assert_eq!(hessian_corank(&germ("x^2 - y^2")), 0);
        assert_eq!(hessian_corank(&germ("x^2 - y^3")), 1);
        assert_eq!(hessian_corank(&germ("x^3 - y^4")), 2);
    }

    #[test]
    fn classification_decision_tree() {
        assert_eq!(
            classify_simple(&germ("x^2*y - y^3"), opts()).unwrap(),
            SingularityClass::D(4)
        );
        assert_eq!(
            classify_simple(&germ("x^3 - x*y^3"), opts()).unwrap(),
            SingularityClass::E(7)
        );
        // binary cubic with three distinct rational roots
        assert_eq!(
            classify_simple(&germ("x*(x-y)*(x+y)"), opts()).unwrap(),
            SingularityClass::D(4)
        );
        assert_eq!(
            classify_simple(&germ("(x+y)^2 - (x-y)^5"), opts()).unwrap(),
            SingularityClass::A(4)
        );
        assert_eq!(
            classify_simple(&germ("x^2 - y^2"), opts()).unwrap(),
            SingularityClass::A(1)
        );
        // x^4 + y^4 is not simple: corank 2 with zero cubic part
        assert_eq!(
            classify_simple(&germ("x^4 + y^4"), opts()).unwrap(),
            SingularityClass::NonSimple { mu: 9, corank: 2 }
        );
    }

    #[test]
    fn certification_is_monotone() {
        let g = germ("x^2 - y^5");
        let small = JetOptions { start: 8, ceiling: 8 };
        let big = JetOptions {
            start: 16,
            ceiling: 16,
        };
        assert_eq!(milnor_number(&g, small).unwrap(), Some(4));
        assert_eq!(milnor_number(&g, big).unwrap(), Some(4));
    }

    #[test]
    fn cuspidal_cubic_singular_locus() {
        let f = qpoly("y^2*z - x^3", &["x", "y", "z"]);
        let locus = singular_locus(&f, &mut rng()).unwrap();
        assert_eq!(locus.geometric_count(), 1);
        assert_eq!(locus.points.len(), 1);
        assert_eq!(
            locus.points[0],
            ProjPoint::from_i64(&Field::Rational, &[0, 0, 1])
        );
    }

    #[test]
    fn coordinate_triangle_has_three_nodes() {
        let f = qpoly("x*y*z", &["x", "y", "z"]);
        let locus = singular_locus(&f, &mut rng()).unwrap();
        assert_eq!(locus.geometric_count(), 3);
        let field = Field::Rational;
        for p in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert!(locus.points.contains(&ProjPoint::from_i64(&field, &p)));
        }
    }

    #[test]
    fn fermat_cubic_is_smooth() {
        let f = qpoly("x^3 + y^3 + z^3", &["x", "y", "z"]);
        let locus = singular_locus(&f, &mut rng()).unwrap();
        assert_eq!(locus.geometric_count(), 0);
    }

    #[test]
    fn non_squarefree_rejected() {
        let f = qpoly("x^2*y", &["x", "y", "z"]);
        assert!(matches!(
            singular_locus(&f, &mut rng()),
            Err(Error::NotSquarefree)
        ));
    }

    #[test]
    fn local_germ_extraction() {
        let f = qpoly("y^2*z - x^3", &["x", "y", "z"]);
        let p = ProjPoint::from_i64(&Field::Rational, &[0, 0, 1]);
        let g = local_germ(&f, &p).unwrap();
        assert_eq!(g.poly(), &qpoly("y^2 - x^3", &["x", "y"]));
        // node of the coordinate triangle at (0:0:1)
        let f = qpoly("x*y*z", &["x", "y", "z"]);
        let g = local_germ(&f, &p).unwrap();
        assert_eq!(g.poly(), &qpoly("x*y", &["x", "y"]));
    }

    #[test]
    fn classify_cusp_from_curve() {
        let f = qpoly("y^2*z - x^3", &["x", "y", "z"]);
        let records = singular_point_records(&f, opts(), &mut rng()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].class, SingularityClass::A(2));
        assert_eq!(records[0].mu, 2);
        assert_eq!(records[0].tau, 2);
    }

    #[test]
    fn surface_chart_germ_on_graph_surface() {
        // surface w*z^2 = ... use a graph chart: G = z*w^2 - stuff? use
        // G = z - x^2 - y^2 homogenized: z*w^2? keep simple: G affine
        // graph surface z = x^2 + y^2 embedded as z*w^2 - x^2*w - y^2*w?
        // The clean case: the cone has no w, so the germ is the planar
        // restriction exactly.
        let curve = PlaneCurve::on_w_plane(qpoly("y^2*z - x^3", &["x", "y", "z"])).unwrap();
        let vertex = ProjPoint::from_i64(&Field::Rational, &[0, 0, 0, 1]);
        let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
        let cs = cone_section(&curve, &vertex, &fermat).unwrap();
        let q = ProjPoint::from_i64(&Field::Rational, &[0, 0, 1, -1]);
        let g = surface_chart_germ(&cs, &q, 8).unwrap();
        let class = classify_simple(&g, opts()).unwrap();
        assert_eq!(class, SingularityClass::A(2));
    }

    #[test]
    fn transfer_on_the_cuspidal_cubic() {
        let curve = PlaneCurve::on_w_plane(qpoly("y^2*z - x^3", &["x", "y", "z"])).unwrap();
        let vertex = ProjPoint::from_i64(&Field::Rational, &[0, 0, 0, 1]);
        let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
        let report = transfer_check(&curve, &vertex, &fermat, opts(), &mut rng()).unwrap();
        assert_eq!(report.entries.len(), 1);
        let entry = &report.entries[0];
        assert!(entry.transversal);
        assert_eq!(entry.expected, SingularityClass::A(2));
        let same: usize = entry.fiber.iter().filter(|v| v.is_same()).count();
        let packets: usize = entry
            .fiber
            .iter()
            .filter(|v| matches!(v, FiberVerdict::UnresolvedPacket { .. }))
            .count();
        assert_eq!(same, 1);
        assert_eq!(packets, 1);
        assert!(!report.any_different());
    }

    #[test]
    fn smooth_curve_gives_empty_transfer() {
        let curve = PlaneCurve::on_w_plane(qpoly("x^3 + y^3 + z^3", &["x", "y", "z"])).unwrap();
        let vertex = ProjPoint::from_i64(&Field::Rational, &[0, 0, 0, 1]);
        let quadric = qpoly("x^2 + y^2 + z^2 + w^2", &["x", "y", "z", "w"]);
        let report = transfer_check(&curve, &vertex, &quadric, opts(), &mut rng()).unwrap();
        assert!(report.entries.is_empty());
    }
}
