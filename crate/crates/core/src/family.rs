//! The closed-form calculus for equisingular families of curves in the
//! linear systems `|dH|` on a smooth degree-`n` surface in projective
//! 3-space: dimensions, expected dimensions, the obstruction window, the
//! doubling families with many A_k points, and the T-smoothness
//! conditions with their e*-invariants.
//!
//! Everything here is exact integer and rational arithmetic; overflow is
//! reported as an error rather than wrapped.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::Error;
use crate::singularity::SingularityClass;
use crate::Result;

/// Exact rational on 128-bit integers, wide enough for every parameter
/// range the reports accept.
pub type Rat = Ratio<i128>;

fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// singularity specs
// ---------------------------------------------------------------------------

/// A multiset of simple singularity types with multiplicities:
/// `r_1 S_1, ..., r_s S_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularitySpec {
    entries: Vec<(SingularityClass, i128)>,
}

impl SingularitySpec {
    pub fn new(entries: Vec<(SingularityClass, i128)>) -> Result<SingularitySpec> {
        for (class, count) in &entries {
            if !class.is_simple() {
                return Err(Error::NotSimple(class.to_string()));
            }
            if *count < 0 {
                return Err(Error::InvalidParameter(format!(
                    "negative count {count} for {class}"
                )));
            }
        }
        Ok(SingularitySpec { entries })
    }

    pub fn empty() -> SingularitySpec {
        SingularitySpec { entries: vec![] }
    }

    pub fn single(class: SingularityClass, count: i128) -> Result<SingularitySpec> {
        Self::new(vec![(class, count)])
    }

    /// Parses compact spec strings like `a1:147,d4:2`.
    pub fn parse(s: &str) -> Result<SingularitySpec> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut entries = vec![];
        for part in s.split(',') {
            let (class_str, count_str) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad spec entry '{part}'")))?;
            let class: SingularityClass = class_str.trim().parse()?;
            let count: i128 = count_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in '{part}'")))?;
            entries.push((class, count));
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(SingularityClass, i128)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|(_, c)| *c == 0)
    }

    /// Total number of singular points `r`.
    pub fn point_count(&self) -> i128 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    /// The total Tjurina load, the sum of `r_i * tau(S_i)`.
    pub fn sigma_tau(&self) -> i128 {
        self.entries
            .iter()
            .map(|(class, c)| c * class.tau().expect("simple") as i128)
            .sum()
    }

    /// The largest Tjurina number among the types with positive count;
    /// 0 for the empty spec.
    pub fn max_tau(&self) -> i128 {
        self.entries
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(class, _)| class.tau().expect("simple") as i128)
            .max()
            .unwrap_or(0)
    }

    /// The spec with every count multiplied by `n` (the family cut out by
    /// cones inherits each base singularity `n` times).
    pub fn scaled(&self, n: i128) -> SingularitySpec {
        SingularitySpec {
            entries: self
                .entries
                .iter()
                .map(|(class, c)| (*class, c * n))
                .collect(),
        }
    }
}

impl std::fmt::Display for SingularitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(class, c)| format!("{}:{c}", class.to_string().to_lowercase()))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Surface degree and divisor multiple, with the spec of singularities.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub surface_degree: i128,
    pub divisor_multiple: i128,
    pub spec: SingularitySpec,
}

impl FamilyParams {
    pub fn new(n: i128, d: i128, spec: SingularitySpec) -> Result<FamilyParams> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "surface degree {n} below 2"
            )));
        }
        if d < 1 {
            return Err(Error::InvalidParameter(format!(
                "divisor multiple {d} below 1"
            )));
        }
        Ok(FamilyParams {
            surface_degree: n,
            divisor_multiple: d,
            spec,
        })
    }
}

// ---------------------------------------------------------------------------
// dimension formulas
// ---------------------------------------------------------------------------

fn checked(v: Option<i128>) -> Result<i128> {
    v.ok_or_else(|| Error::InvalidParameter("integer overflow".into()))
}

fn binom3(m: i128) -> Result<i128> {
    if m < 3 {
        return Ok(0);
    }
    let p = checked(m.checked_mul(m - 1))?;
    let p = checked(p.checked_mul(m - 2))?;
    Ok(p / 6)
}

/// Dimension of the linear system `|dH|` on a smooth degree-`n` surface:
/// the count of degree-`d` monomials in four variables, minus multiples of
/// the surface equation, minus one.
pub fn dim_linear_system(n: i128, d: i128) -> Result<i128> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidParameter(format!(
            "dim |dH| needs n >= 1 and d >= 1, got n={n}, d={d}"
        )));
    }
    Ok(binom3(d + 3)? - binom3(d - n + 3)? - 1)
}

/// The cubic closed form `(nd^2 + (4n - n^2)d)/2 + (n^3 - 6n^2 + 11n - 6)/6`,
/// which agrees with [`dim_linear_system`] whenever `d >= n - 3`.
pub fn dim_linear_system_closed_form(n: i128, d: i128) -> Result<i128> {
    let quad = checked(n.checked_mul(checked(d.checked_mul(d))?))?;
    let lin = checked((4 * n - n * n).checked_mul(d))?;
    let cubic = n * n * n - 6 * n * n + 11 * n - 6;
    debug_assert_eq!((quad + lin) % 2, 0);
    debug_assert_eq!(cubic % 6, 0);
    Ok((quad + lin) / 2 + cubic / 6)
}

/// Tjurina number of a simple class.
pub fn tau_of(class: SingularityClass) -> Result<i128> {
    Ok(class.tau()? as i128)
}

/// Expected dimension of the family on the surface:
/// `dim |dH| - sum r_i tau(S_i)`. May be negative.
pub fn surface_family_expdim(fp: &FamilyParams) -> Result<i128> {
    let dim = dim_linear_system(fp.surface_degree, fp.divisor_multiple)?;
    Ok(dim - fp.spec.sigma_tau())
}

/// Expected dimension of the plane family: `d(d+3)/2 - sum r_i tau(S_i)`.
pub fn plane_family_expdim(d: i128, spec: &SingularitySpec) -> Result<i128> {
    if d < 1 {
        return Err(Error::InvalidParameter(format!("degree {d} below 1")));
    }
    Ok(d * (d + 3) / 2 - spec.sigma_tau())
}

/// Non-emptiness of the plane family with simple singularities:
/// `sum r_i tau_i <= d^2/2 - m d - 3` (exact rational comparison).
pub fn westenberger_nonempty_check(d: i128, spec: &SingularitySpec) -> bool {
    let m = spec.max_tau();
    2 * spec.sigma_tau() <= d * d - 2 * m * d - 6
}

// ---------------------------------------------------------------------------
// the obstruction window
// ---------------------------------------------------------------------------

/// Verdict of an obstruction analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "obstructed")]
    Obstructed,
    #[serde(rename = "not-concluded")]
    NotConcluded,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Obstructed => write!(f, "obstructed"),
            Verdict::NotConcluded => write!(f, "not-concluded"),
        }
    }
}

/// The full arithmetic ledger of one obstruction analysis: the dimension
/// of the ambient system, both expected dimensions, the window and
/// non-emptiness checks, the dimension lower bound carried over from the
/// plane family, and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub n: i128,
    pub d: i128,
    pub spec: String,
    /// largest Tjurina number in the spec
    pub m: i128,
    #[serde(rename = "dim_dH")]
    pub dim_dh: i128,
    /// Tjurina load of the plane spec
    pub sigma_tau: i128,
    /// expected dimension of the plane family of the base curves
    pub plane_expdim: i128,
    /// expected dimension of the scaled family on the surface
    pub expdim: i128,
    /// `(n-1)/2 * d - m`: the dimension carried by the cone construction
    pub lower_bound: String,
    /// window for `sum r_i tau_i` (both ends inclusive)
    pub window_lo: String,
    pub window_hi: String,
    pub window_ok: bool,
    /// right-hand side `d^2/2 - m d - 3` of the non-emptiness bound
    pub westenberger_rhs: String,
    pub westenberger_ok: bool,
    /// the effective meaning of `d >> n`
    pub threshold_d: String,
    pub threshold_ok: bool,
    /// hypothesis `n > 2m + 4`
    pub hypothesis_n_ok: bool,
    /// the a-priori bound `(n^3 - 6n^2 + 5n - 6)/6` on the scaled
    /// expected dimension inside the window
    pub expdim_upper_bound: i128,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Analyzes the obstruction window: the scaled family is obstructed when
/// the parameters satisfy every hypothesis and the dimension lower bound
/// exceeds the expected dimension.
pub fn example1_analyze(
    n: i128,
    d: i128,
    spec: &SingularitySpec,
) -> Result<ObstructionReport> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and d >= 1, got n={n}, d={d}"
        )));
    }
    let m = spec.max_tau();
    let st = spec.sigma_tau();
    let hypothesis_n_ok = n > 2 * m + 4;
    // window: (d^2 + (4-n)d + 2)/2 <= sigma_tau <= same + m - 1
    let window_lo = rat(d * d + (4 - n) * d + 2, 2);
    let window_hi = window_lo + rat(m - 1, 1);
    let st_rat = rat(st, 1);
    let window_ok = window_lo <= st_rat && st_rat <= window_hi;
    let westenberger_rhs = rat(d * d, 2) - rat(m * d + 3, 1);
    let westenberger_ok = st_rat <= westenberger_rhs;
    let threshold_d = rat(n * n * n - 6 * n * n + 5 * n - 6 + 6 * m, 3 * n - 3);
    let threshold_ok = rat(d, 1) > threshold_d;
    let dim_dh = dim_linear_system(n, d)?;
    let plane_expdim = plane_family_expdim(d, spec)?;
    let scaled = FamilyParams::new(n, d, spec.scaled(n))?;
    let expdim = surface_family_expdim(&scaled)?;
    let lower_bound = rat((n - 1) * d, 2) - rat(m, 1);
    let numerator = n * n * n - 6 * n * n + 5 * n - 6;
    debug_assert_eq!(numerator % 6, 0);
    let expdim_upper_bound = numerator / 6;
    let all_checks = hypothesis_n_ok && window_ok && westenberger_ok && threshold_ok;
    let obstructed = all_checks && rat(expdim, 1) < lower_bound;
    let mut notes = vec![];
    if !hypothesis_n_ok {
        notes.push(format!("hypothesis n>2m+4 fails: n={n}, m={m}"));
    }
    if !window_ok {
        notes.push(format!(
            "sigma_tau {st} outside window [{}, {}]",
            fmt_rat(&window_lo),
            fmt_rat(&window_hi)
        ));
    }
    if !westenberger_ok {
        notes.push(format!(
            "non-emptiness bound fails: sigma_tau {st} > {}",
            fmt_rat(&westenberger_rhs)
        ));
    }
    if !threshold_ok {
        notes.push(format!("d {d} below threshold {}", fmt_rat(&threshold_d)));
    }
    Ok(ObstructionReport {
        n,
        d,
        spec: spec.to_string(),
        m,
        dim_dh,
        sigma_tau: st,
        plane_expdim,
        expdim,
        lower_bound: fmt_rat(&lower_bound),
        window_lo: fmt_rat(&window_lo),
        window_hi: fmt_rat(&window_hi),
        window_ok,
        westenberger_rhs: fmt_rat(&westenberger_rhs),
        westenberger_ok,
        threshold_d: fmt_rat(&threshold_d),
        threshold_ok,
        hypothesis_n_ok,
        expdim_upper_bound,
        verdict: if obstructed {
            Verdict::Obstructed
        } else {
            Verdict::NotConcluded
        },
        notes,
    })
}

/// The count filling the window for a single type of Tjurina number `k`:
/// `r = ceil((d^2 + (4-n)d + 2) / (2k))`.
pub fn example1_ceiling_count(n: i128, d: i128, k: i128) -> i128 {
    let window_lo = rat(d * d + (4 - n) * d + 2, 2);
    (window_lo / rat(k, 1)).ceil().to_integer()
}

/// Scans a range of divisor multiples for a single simple type, deriving
/// the count from the window-filling formula. Requires `n > 3k + 4`.
pub fn example1_scan(
    n: i128,
    d_range: std::ops::RangeInclusive<i128>,
    class: SingularityClass,
) -> Result<Vec<ObstructionReport>> {
    let k = tau_of(class)?;
    if n <= 3 * k + 4 {
        return Err(Error::InvalidParameter(format!(
            "need n > 3k+4, got n={n}, k={k}"
        )));
    }
    if d_range.is_empty() {
        return Err(Error::InvalidParameter("empty degree range".into()));
    }
    let mut out = vec![];
    for d in d_range {
        let r = example1_ceiling_count(n, d, k);
        let spec = SingularitySpec::single(class, r)?;
        out.push(example1_analyze(n, d, &spec)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// the doubling families with many A_k points
// ---------------------------------------------------------------------------

/// Degree and point count of the classical plane curves with many A_k
/// points: `d = 2(k+1)^m` and `r = 3(k+1)((k+1)^{2m} - 1)/((k+1)^2 - 1)`.
pub fn hirano_params(k: i128, m: i128) -> Result<(i128, i128)> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "k must be an even positive integer, got {k}"
        )));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(format!("m must be >= 1, got {m}")));
    }
    let base = k + 1;
    let mut pow_m: i128 = 1;
    for _ in 0..m {
        pow_m = checked(pow_m.checked_mul(base))?;
    }
    let d = checked(pow_m.checked_mul(2))?;
    let pow_2m = checked(pow_m.checked_mul(pow_m))?;
    let numerator = checked((pow_2m - 1).checked_mul(3 * base))?;
    let denominator = base * base - 1;
    if numerator % denominator != 0 {
        return Err(Error::Internal(
            "geometric series count is not integral".into(),
        ));
    }
    Ok((d, numerator / denominator))
}

/// Report for one of the doubling families.
#[derive(Debug, Clone, Serialize)]
pub struct HiranoReport {
    pub n: i128,
    pub k: i128,
    pub m: i128,
    pub d: i128,
    /// A_k points on the plane curve
    pub r: i128,
    #[serde(rename = "dim_dH")]
    pub dim_dh: i128,
    /// Tjurina load of the scaled family: `k * n * r`
    pub sigma_tau: i128,
    pub expdim: i128,
    /// exact leading coefficient `2 - 3(k^2+k)/(k^2+2k) = (1-k)/(k+2)`
    pub leading_coefficient: String,
    pub verdict: Verdict,
    pub note: String,
}

/// Evaluates the expected dimension of the scaled family
/// `V_{|dH|}(n r A_k)` built over the classical plane curves. The family
/// is non-empty by construction, so negative expected dimension proves
/// obstruction outright.
pub fn hirano_analyze(n: i128, k: i128, m: i128) -> Result<HiranoReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "surface degree {n} below 2"
        )));
    }
    let (d, r) = hirano_params(k, m)?;
    let class = SingularityClass::A(u32::try_from(k).map_err(|_| {
        Error::InvalidParameter(format!("k={k} out of range"))
    })?);
    let spec = SingularitySpec::single(class, r)?.scaled(n);
    let dim_dh = dim_linear_system(n, d)?;
    let sigma_tau = spec.sigma_tau();
    let expdim = dim_dh - sigma_tau;
    let leading = rat(1 - k, k + 2);
    let (verdict, note) = if expdim < 0 {
        (
            Verdict::Obstructed,
            "non-empty by construction, expected dimension negative".to_string(),
        )
    } else {
        (
            Verdict::NotConcluded,
            "expected dimension nonnegative at these parameters".to_string(),
        )
    };
    Ok(HiranoReport {
        n,
        k,
        m,
        d,
        r,
        dim_dh,
        sigma_tau,
        expdim,
        leading_coefficient: fmt_rat(&leading),
        verdict,
        note,
    })
}

// ---------------------------------------------------------------------------
// e*-invariants and T-smoothness conditions
// ---------------------------------------------------------------------------

/// An e*-value: exact from the table, or an upper bound beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EStar {
    pub value: i128,
    /// true when the value is the bound formula rather than a table entry
    pub is_bound: bool,
}

/// The tabulated e*-invariant of a simple type; beyond the table the
/// closed-form upper bounds apply and are flagged.
pub fn e_star(class: SingularityClass) -> Result<EStar> {
    let exact = |value| EStar {
        value,
        is_bound: false,
    };
    let bound = |value| EStar {
        value,
        is_bound: true,
    };
    match class {
        SingularityClass::A(1) => Ok(exact(2)),
        SingularityClass::A(2) => Ok(exact(3)),
        SingularityClass::A(k) if (3..=7).contains(&k) => Ok(exact(4)),
        SingularityClass::A(k) if (8..=10).contains(&k) => Ok(exact(5)),
        SingularityClass::A(k) => Ok(bound(2 * isqrt(k as i128 + 5))),
        SingularityClass::D(4) => Ok(exact(3)),
        SingularityClass::D(5) => Ok(exact(4)),
        SingularityClass::D(k) if (6..=10).contains(&k) => Ok(exact(5)),
        SingularityClass::D(k) if (11..=13).contains(&k) => Ok(exact(6)),
        SingularityClass::D(k) => Ok(bound(2 * isqrt(k as i128 + 7) + 1)),
        SingularityClass::E(6) => Ok(exact(4)),
        SingularityClass::E(7) => Ok(exact(4)),
        SingularityClass::E(8) => Ok(exact(5)),
        other => Err(Error::NotSimple(other.to_string())),
    }
}

/// Integer square root (floor).
pub fn isqrt(v: i128) -> i128 {
    if v < 0 {
        panic!("isqrt of negative");
    }
    let mut x = (v as f64).sqrt() as i128;
    while x > 0 && x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Upper bounds for e* of a general singularity from its invariants:
/// the analytic bound `3*sqrt(mu) - 2` and the topological bound
/// `(9/sqrt(6))*sqrt(delta) - 1`, both floored exactly with integer
/// square roots.
pub fn e_star_bounds(mu: i128, delta: i128) -> Result<(i128, i128)> {
    if mu < 1 || delta < 1 {
        return Err(Error::InvalidParameter(
            "invariants must be positive".into(),
        ));
    }
    // floor(3 sqrt(mu)) - 2 = isqrt(9 mu) - 2
    let analytic = isqrt(9 * mu) - 2;
    // floor(9 sqrt(delta) / sqrt(6)) - 1 = floor(sqrt(81 delta / 6)) - 1
    //   = floor(isqrt(54 delta) / 2) - 1
    let topological = isqrt(54 * delta) / 2 - 1;
    Ok((analytic, topological))
}

/// Result of the first T-smoothness condition:
/// `sum r_i e*(e*+1)/2 < dim |(d-1)H|`.
#[derive(Debug, Clone, Serialize)]
pub struct Condition1 {
    pub holds: bool,
    #[serde(rename = "cond1_lhs")]
    pub lhs: i128,
    #[serde(rename = "cond1_rhs")]
    pub rhs: i128,
    /// true when some e* value was only an upper bound, making a positive
    /// verdict conservative
    pub uses_bound: bool,
    pub caveat: String,
}

pub fn tsmooth_condition1(n: i128, d: i128, spec: &SingularitySpec) -> Result<Condition1> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "condition needs d >= 2, got {d}"
        )));
    }
    let mut lhs: i128 = 0;
    let mut uses_bound = false;
    for (class, count) in spec.entries() {
        let e = e_star(*class)?;
        uses_bound |= e.is_bound && *count > 0;
        lhs += count * e.value * (e.value + 1) / 2;
    }
    let rhs = dim_linear_system(n, d - 1)?;
    let mut caveat = String::from(
        "existence additionally requires d >= d(S), a non-effective threshold",
    );
    if uses_bound {
        caveat.push_str("; left-hand side uses e* upper bounds");
    }
    Ok(Condition1 {
        holds: lhs < rhs,
        lhs,
        rhs,
        uses_bound,
        caveat,
    })
}

/// Result of the second (leading-order) T-smoothness condition:
/// `2 sum r_i tau_i <= dim |dH|`, with the exact ratio reported.
#[derive(Debug, Clone, Serialize)]
pub struct Condition2 {
    pub holds: bool,
    pub doubled_sigma_tau: i128,
    #[serde(rename = "dim_dH")]
    pub dim_dh: i128,
    /// exact ratio `2 sum tau / dim |dH|`
    #[serde(rename = "cond2_ratio")]
    pub ratio: String,
    pub note: String,
}

pub fn tsmooth_condition2(n: i128, d: i128, spec: &SingularitySpec) -> Result<Condition2> {
    let dim_dh = dim_linear_system(n, d)?;
    let doubled = 2 * spec.sigma_tau();
    let ratio = rat(doubled, dim_dh);
    Ok(Condition2 {
        holds: doubled <= dim_dh,
        doubled_sigma_tau: doubled,
        dim_dh,
        ratio: fmt_rat(&ratio),
        note: "leading-order form; the lower-order sqrt(tau) correction is dropped"
            .to_string(),
    })
}

/// Pairwise existence precondition `d*H^2 - g(H) >= m_i + m_j` with
/// `H^2 = n`, sectional genus `g(H) = (n-1)(n-2)/2` and `m_i = e*(S_i)`,
/// over all unordered pairs including `i = j`.
pub fn existence_precondition_pairs(
    n: i128,
    d: i128,
    spec: &SingularitySpec,
) -> Result<bool> {
    let genus = (n - 1) * (n - 2) / 2;
    let budget = d * n - genus;
    let values: Vec<i128> = spec
        .entries()
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(class, _)| e_star(*class).map(|e| e.value))
        .collect::<Result<_>>()?;
    for (i, a) in values.iter().enumerate() {
        for b in values.iter().skip(i) {
            if budget < a + b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-type line of a gap report.
#[derive(Debug, Clone, Serialize)]
pub struct TypeContribution {
    pub class: String,
    pub count: i128,
    pub tau: i128,
    pub sigma_tau: i128,
    pub e_star: i128,
    pub e_star_is_bound: bool,
    pub cond1_load: i128,
}

/// Bundle of both conditions with the exact shortfall ratios; no verdict
/// beyond the raw numbers.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub n: i128,
    pub d: i128,
    pub spec: String,
    pub condition1: Condition1,
    pub condition2: Condition2,
    pub pairs_ok: bool,
    pub per_type: Vec<TypeContribution>,
}

pub fn gap_report(n: i128, d: i128, spec: &SingularitySpec) -> Result<GapReport> {
    let condition1 = tsmooth_condition1(n, d, spec)?;
    let condition2 = tsmooth_condition2(n, d, spec)?;
    let pairs_ok = existence_precondition_pairs(n, d, spec)?;
    let per_type = spec
        .entries()
        .iter()
        .map(|(class, count)| {
            let tau = tau_of(*class)?;
            let e = e_star(*class)?;
            Ok(TypeContribution {
                class: class.to_string(),
                count: *count,
                tau,
                sigma_tau: count * tau,
                e_star: e.value,
                e_star_is_bound: e.is_bound,
                cond1_load: count * e.value * (e.value + 1) / 2,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GapReport {
        n,
        d,
        spec: spec.to_string(),
        condition1,
        condition2,
        pairs_ok,
        per_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: u32) -> SingularityClass {
        SingularityClass::A(k)
    }

    fn spec(s: &str) -> SingularitySpec {
        SingularitySpec::parse(s).unwrap()
    }

    #[test]
    fn dimension_formula_examples() {
        // plane cubics
        assert_eq!(dim_linear_system(1, 3).unwrap(), 9);
        // hyperplanes on the quadric: binom(4,3) - 0 - 1
        assert_eq!(dim_linear_system(2, 1).unwrap(), 3);
        // the window example: binom(11,3) - binom(4,3) - 1 = 165 - 4 - 1
        assert_eq!(dim_linear_system(7, 8).unwrap(), 160);
        assert_eq!(dim_linear_system(5, 6).unwrap(), 79);
        assert_eq!(dim_linear_system(7, 7).unwrap(), 118);
        assert_eq!(dim_linear_system(2, 9).unwrap(), 99);
    }

    #[test]
    fn closed_form_matches_in_range() {
        for n in 1..=10i128 {
            for d in (n - 3).max(1)..=40 {
                assert_eq!(
                    dim_linear_system(n, d).unwrap(),
                    dim_linear_system_closed_form(n, d).unwrap(),
                    "n={n}, d={d}"
                );
            }
        }
    }

    #[test]
    fn expdim_examples() {
        let fp = FamilyParams::new(7, 8, spec("a1:147")).unwrap();
        assert_eq!(surface_family_expdim(&fp).unwrap(), 13);
        let fp = FamilyParams::new(5, 6, spec("a2:45")).unwrap();
        assert_eq!(surface_family_expdim(&fp).unwrap(), -11);
        let fp = FamilyParams::new(4, 5, SingularitySpec::empty()).unwrap();
        assert_eq!(
            surface_family_expdim(&fp).unwrap(),
            dim_linear_system(4, 5).unwrap()
        );
    }

    #[test]
    fn plane_expdim_examples() {
        assert_eq!(plane_family_expdim(8, &spec("a1:21")).unwrap(), 23);
        assert_eq!(
            plane_family_expdim(5, &SingularitySpec::empty()).unwrap(),
            20
        );
        assert_eq!(plane_family_expdim(6, &spec("a2:9")).unwrap(), 9);
    }

    #[test]
    fn westenberger_bound_examples() {
        assert!(westenberger_nonempty_check(8, &spec("a1:21")));
        assert!(!westenberger_nonempty_check(5, &spec("a1:6")));
        assert!(westenberger_nonempty_check(3, &SingularitySpec::empty()));
    }

    #[test]
    fn window_analysis_obstructed_instance() {
        let r = example1_ceiling_count(7, 8, 1);
        assert_eq!(r, 21);
        let report = example1_analyze(7, 8, &spec("a1:21")).unwrap();
        assert!(report.hypothesis_n_ok);
        assert!(report.window_ok);
        assert_eq!(report.window_lo, "21");
        assert_eq!(report.window_hi, "21");
        assert!(report.westenberger_ok);
        assert_eq!(report.westenberger_rhs, "21");
        assert!(report.threshold_ok);
        assert_eq!(report.threshold_d, "14/3");
        assert_eq!(report.dim_dh, 160);
        assert_eq!(report.plane_expdim, 23);
        assert_eq!(report.lower_bound, "23");
        assert_eq!(report.expdim, 13);
        assert_eq!(report.expdim_upper_bound, 13);
        assert_eq!(report.verdict, Verdict::Obstructed);
    }

    #[test]
    fn window_violations_are_not_concluded() {
        let report = example1_analyze(7, 8, &spec("a1:20")).unwrap();
        assert!(!report.window_ok);
        assert_eq!(report.verdict, Verdict::NotConcluded);
        // the hypothesis n > 2m+4 fails for n = 6, m = 1
        let report = example1_analyze(6, 8, &spec("a1:21")).unwrap();
        assert!(!report.hypothesis_n_ok);
        assert_eq!(report.verdict, Verdict::NotConcluded);
    }

    #[test]
    fn scan_requires_large_n_and_emits_reports() {
        // k = 1 needs n > 7
        assert!(example1_scan(7, 8..=8, a(1)).is_err());
        let reports = example1_scan(10, 12..=12, a(1)).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].sigma_tau, 37);
        // the threshold gates this instance
        assert!(!reports[0].threshold_ok);
        assert_eq!(reports[0].verdict, Verdict::NotConcluded);
    }

    #[test]
    fn doubling_family_parameters() {
        assert_eq!(hirano_params(2, 1).unwrap(), (6, 9));
        assert_eq!(hirano_params(2, 2).unwrap(), (18, 90));
        assert_eq!(hirano_params(4, 1).unwrap(), (10, 15));
        assert!(hirano_params(3, 1).is_err());
        // integrality holds across the announced range
        for k in (2..=20i128).step_by(2) {
            for m in 1..=6 {
                hirano_params(k, m).unwrap();
            }
        }
    }

    #[test]
    fn doubling_family_analysis() {
        let report = hirano_analyze(5, 2, 1).unwrap();
        assert_eq!(report.d, 6);
        assert_eq!(report.r, 9);
        assert_eq!(report.dim_dh, 79);
        assert_eq!(report.expdim, -11);
        assert_eq!(report.leading_coefficient, "-1/4");
        assert_eq!(report.verdict, Verdict::Obstructed);
        // strictly decreasing expected dimension in m
        let mut last = report.expdim;
        for m in 2..=4 {
            let r = hirano_analyze(5, 2, m).unwrap();
            assert!(r.expdim < last);
            last = r.expdim;
        }
    }

    #[test]
    fn leading_coefficient_is_negative_for_even_k() {
        for k in (2..=20i128).step_by(2) {
            assert!(rat(1 - k, k + 2) < rat(0, 1));
        }
    }

    #[test]
    fn e_star_table() {
        let cases = [
            (a(1), 2),
            (a(2), 3),
            (a(3), 4),
            (a(7), 4),
            (a(8), 5),
            (a(10), 5),
            (SingularityClass::D(4), 3),
            (SingularityClass::D(5), 4),
            (SingularityClass::D(6), 5),
            (SingularityClass::D(10), 5),
            (SingularityClass::D(11), 6),
            (SingularityClass::D(13), 6),
            (SingularityClass::E(6), 4),
            (SingularityClass::E(7), 4),
            (SingularityClass::E(8), 5),
        ];
        for (class, want) in cases {
            let e = e_star(class).unwrap();
            assert_eq!(e.value, want, "{class}");
            assert!(!e.is_bound);
        }
        let e = e_star(a(20)).unwrap();
        assert_eq!(e.value, 10);
        assert!(e.is_bound);
        let e = e_star(SingularityClass::D(14)).unwrap();
        assert_eq!(e.value, 2 * isqrt(21) + 1);
        assert!(e.is_bound);
    }

    #[test]
    fn e_star_bound_formulas() {
        assert_eq!(e_star_bounds(1, 1).unwrap().0, 1);
        assert_eq!(e_star_bounds(4, 1).unwrap().0, 4);
        assert_eq!(e_star_bounds(1, 6).unwrap().1, 8);
    }

    #[test]
    fn condition_one_examples() {
        let c = tsmooth_condition1(7, 8, &spec("a1:147")).unwrap();
        assert!(!c.holds);
        assert_eq!(c.lhs, 441);
        assert_eq!(c.rhs, 118);
        let c = tsmooth_condition1(2, 10, &spec("a1:32")).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, 96);
        assert_eq!(c.rhs, 99);
        let c = tsmooth_condition1(3, 5, &SingularitySpec::empty()).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, 0);
    }

    #[test]
    fn condition_two_examples() {
        let c = tsmooth_condition2(7, 8, &spec("a1:147")).unwrap();
        assert!(!c.holds);
        assert_eq!(c.ratio, "147/80");
        let c = tsmooth_condition2(2, 10, &spec("a1:24")).unwrap();
        assert!(c.holds);
        let c = tsmooth_condition2(3, 6, &SingularitySpec::empty()).unwrap();
        assert!(c.holds);
        assert_eq!(c.ratio, "0");
    }

    #[test]
    fn pairwise_precondition_examples() {
        assert!(existence_precondition_pairs(7, 8, &spec("a1:3")).unwrap());
        assert!(!existence_precondition_pairs(2, 1, &spec("e8:1")).unwrap());
        assert!(existence_precondition_pairs(5, 2, &SingularitySpec::empty()).unwrap());
    }

    #[test]
    fn gap_report_itemizes_types() {
        let g = gap_report(7, 8, &spec("a1:10,d4:5")).unwrap();
        assert_eq!(g.per_type.len(), 2);
        assert_eq!(g.per_type[0].sigma_tau, 10);
        assert_eq!(g.per_type[1].sigma_tau, 20);
        let total: i128 = g.per_type.iter().map(|t| t.cond1_load).sum();
        assert_eq!(total, g.condition1.lhs);
    }

    #[test]
    fn spec_parsing_round_trip() {
        let s = spec("a1:147,d4:2,e8:1");
        assert_eq!(s.to_string(), "a1:147,d4:2,e8:1");
        assert_eq!(s.point_count(), 150);
        assert_eq!(s.sigma_tau(), 147 + 8 + 8);
        assert_eq!(s.max_tau(), 8);
        assert!(SingularitySpec::parse("q9:1").is_err());
    }
}
