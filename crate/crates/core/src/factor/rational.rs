//! Univariate factorization over the rationals: squarefree split, modular
//! factorization, Hensel lifting to a Mignotte-sized modulus, and subset
//! recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::dense::DensePoly;
use crate::error::Error;
use crate::factor::modp::factor_fp;
use crate::field::{Coeff, Field};
use crate::Result;

/// Primes used for modular certificates and lifting, all comfortably odd
/// and large enough for the degrees this crate meets.
pub const WORKING_PRIMES: [u64; 6] = [32003, 65521, 30011, 1000003, 65537, 4000037];

/// Factors a univariate rational polynomial into monic irreducible factors
/// with multiplicities, together with the leading unit.
pub fn factor_rational(
    f: &DensePoly,
    rng: &mut impl Rng,
) -> Result<(Coeff, Vec<(DensePoly, usize)>)> {
    if f.field() != &Field::Rational {
        return Err(Error::FieldMismatch(f.field().label(), "Q".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput("factorization".into()));
    }
    let unit = f.leading();
    if f.is_constant() {
        return Ok((unit, vec![]));
    }
    let (_, squarefree) = f.squarefree_decomposition()?;
    let mut out: Vec<(DensePoly, usize)> = vec![];
    for (g, mult) in squarefree {
        let zpoly = to_primitive_integer(&g);
        for factor in factor_squarefree_integer(&zpoly, rng)? {
            out.push((from_integer_monic(&factor), mult));
        }
    }
    out.sort_by(|a, b| cmp_q(&a.0, &b.0));
    Ok((unit, out))
}

/// Rational roots with multiplicities, read off the linear factors.
pub fn rational_roots(
    f: &DensePoly,
    rng: &mut impl Rng,
) -> Result<Vec<(BigRational, usize)>> {
    let (_, factors) = factor_rational(f, rng)?;
    let mut roots = vec![];
    for (g, m) in factors {
        if g.deg() == 1 {
            // monic: y + c has root -c
            let c = match g.coeff(0) {
                Coeff::Rat(r) => r,
                _ => unreachable!(),
            };
            roots.push((-c, m));
        }
    }
    Ok(roots)
}

fn cmp_q(a: &DensePoly, b: &DensePoly) -> std::cmp::Ordering {
    let key = |p: &DensePoly| {
        let mut v: Vec<String> = p.coeffs().iter().map(|c| format!("{c:?}")).collect();
        v.reverse();
        (p.coeffs().len(), v)
    };
    key(a).cmp(&key(b))
}

/// Primitive integer image of a rational polynomial, positive leading
/// coefficient, as a BigInt coefficient vector (low degree first).
fn to_primitive_integer(f: &DensePoly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        if let Coeff::Rat(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let mut ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| match c {
            Coeff::Rat(r) => (r * BigRational::from(lcm.clone())).to_integer(),
            _ => unreachable!(),
        })
        .collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if ints.last().unwrap().is_negative() {
        gcd = -gcd;
    }
    for v in ints.iter_mut() {
        *v = &*v / &gcd;
    }
    ints
}

fn from_integer_monic(z: &[BigInt]) -> DensePoly {
    let f = Field::Rational;
    let lead = BigRational::from(z.last().unwrap().clone());
    DensePoly::from_coeffs(
        &f,
        z.iter()
            .map(|c| Coeff::Rat(BigRational::from(c.clone()) / &lead))
            .collect(),
    )
}

fn reduce_vec_mod_p(z: &[BigInt], p: u64) -> DensePoly {
    let field = Field::prime(p).expect("working prime");
    let pb = BigInt::from(p);
    DensePoly::from_coeffs(
        &field,
        z.iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                Coeff::Mod(r.to_u64_digits().1.first().copied().unwrap_or(0))
            })
            .collect(),
    )
}

/// Factors a primitive squarefree integer polynomial into primitive
/// irreducible integer polynomials.
fn factor_squarefree_integer(z: &[BigInt], rng: &mut impl Rng) -> Result<Vec<Vec<BigInt>>> {
    let n = z.len() - 1;
    if n <= 1 {
        return Ok(vec![z.to_vec()]);
    }
    // choose a prime preserving degree and squarefreeness
    let mut chosen = None;
    for &p in &WORKING_PRIMES {
        let pb = BigInt::from(p);
        if (z.last().unwrap() % &pb).is_zero() {
            continue;
        }
        let fp = reduce_vec_mod_p(z, p);
        if fp.is_squarefree() {
            chosen = Some((p, fp));
            break;
        }
    }
    let (p, fp) = chosen.ok_or_else(|| {
        Error::Internal("no working prime preserves squarefreeness".into())
    })?;
    let (_, modular) = factor_fp(&fp.monic()?, rng)?;
    debug_assert!(modular.iter().all(|(_, m)| *m == 1));
    let base: Vec<DensePoly> = modular.into_iter().map(|(g, _)| g).collect();
    if base.len() == 1 {
        return Ok(vec![z.to_vec()]);
    }

    // lift modulus beyond twice the Mignotte-style bound
    let height = z.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt =
        BigInt::from(n + 1) * (BigInt::one() << n) * height * z.last().unwrap().abs();
    let mut modulus = BigInt::from(p);
    let mut lifts = 0u32;
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
        lifts += 1;
    }
    let target_modulus = modulus;
    let base_z: Vec<Vec<BigInt>> = base
        .iter()
        .map(|g| {
            g.coeffs()
                .iter()
                .map(|c| match c {
                    Coeff::Mod(v) => BigInt::from(*v),
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    let f_monic_mod = make_monic_mod(z, &target_modulus);
    let lifted = lift_tree_z(&f_monic_mod, &base_z, BigInt::from(p), lifts)?;

    // recombination against the (possibly shrinking) remaining polynomial
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut current = z.to_vec();
    let mut found: Vec<Vec<BigInt>> = vec![];
    let mut size = 1usize;
    'sizes: while 2 * size <= remaining.len() {
        let k = remaining.len();
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut cand = vec![current.last().unwrap().mod_floor(&target_modulus)];
            for &i in &subset {
                cand = mp_mul(&cand, &remaining[i], &target_modulus);
            }
            let cand = balance(&cand, &target_modulus);
            let cand = primitive_of(&cand);
            if let Some(quot) = try_div_integer(&current, &cand) {
                found.push(cand);
                current = quot;
                let mut idx = 0usize;
                remaining = remaining
                    .into_iter()
                    .filter(|_| {
                        let keep = !subset.contains(&idx);
                        idx += 1;
                        keep
                    })
                    .collect();
                continue 'sizes;
            }
            if !next_subset(&mut subset, k) {
                break;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        found.push(primitive_of(&current));
    }
    Ok(found)
}

fn next_subset(subset: &mut Vec<usize>, k: usize) -> bool {
    let size = subset.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if subset[i] != i + k - size {
            subset[i] += 1;
            for j in i + 1..size {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn primitive_of(z: &[BigInt]) -> Vec<BigInt> {
    let mut gcd = BigInt::zero();
    for v in z {
        gcd = gcd.gcd(v);
    }
    if z.last().unwrap().is_negative() {
        gcd = -gcd;
    }
    z.iter().map(|v| v / &gcd).collect()
}

/// Exact division of integer polynomials; the divisor is primitive so an
/// exact rational quotient is automatically integral.
fn try_div_integer(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() > a.len() {
        return None;
    }
    let f = Field::Rational;
    let aq = DensePoly::from_coeffs(
        &f,
        a.iter()
            .map(|c| Coeff::Rat(BigRational::from(c.clone())))
            .collect(),
    );
    let bq = DensePoly::from_coeffs(
        &f,
        b.iter()
            .map(|c| Coeff::Rat(BigRational::from(c.clone())))
            .collect(),
    );
    let (q, r) = aq.divmod(&bq).ok()?;
    if !r.is_zero() {
        return None;
    }
    let mut out = vec![];
    for c in q.coeffs() {
        match c {
            Coeff::Rat(r) if r.is_integer() => out.push(r.to_integer()),
            _ => return None,
        }
    }
    while out.len() < a.len() - b.len() + 1 {
        out.push(BigInt::zero());
    }
    Some(out)
}

// --- arithmetic on integer polynomials modulo m ---

fn mp_trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn mp_reduce(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.iter().map(|c| c.mod_floor(m)).collect();
    mp_trim(&mut out);
    out
}

fn mp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    mp_reduce(&out, m)
}

fn mp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    mp_reduce(&out, m)
}

fn mp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mp_reduce(&out, m)
}

/// Division by a monic divisor, coefficients mod m.
fn mp_divmod_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().map_or(false, |c| c.is_one()));
    let mut rem = mp_reduce(a, m);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![BigInt::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let c = rem.last().unwrap().clone();
        let shift = rem.len() - b.len();
        quo[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let v = (&rem[shift + i] - &c * bc).mod_floor(m);
            rem[shift + i] = v;
        }
        mp_trim(&mut rem);
        if rem.len() <= shift + b.len() - 1 && rem.len() < b.len() {
            break;
        }
        if rem.len() > shift + b.len() - 1 {
            rem.truncate(shift + b.len() - 1);
            mp_trim(&mut rem);
        }
    }
    (mp_reduce(&quo, m), rem)
}

fn balance(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    mp_trim(&mut out);
    out
}

/// Monic image of a primitive integer polynomial modulo m
/// (divide by the leading coefficient, invertible mod m).
fn make_monic_mod(z: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let lc = z.last().unwrap().mod_floor(m);
    let inv = mod_inverse(&lc, m).expect("leading coefficient invertible");
    mp_reduce(
        &z.iter().map(|c| c * &inv).collect::<Vec<_>>(),
        m,
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0.is_one() {
        Some(s0.mod_floor(m))
    } else {
        None
    }
}

/// One quadratic Hensel step over the integers: refines a factorization
/// mod m to mod m^2.
fn hensel_step_z(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = mp_sub(f, &mp_mul(g, h, &m2), &m2);
    let (q, r) = mp_divmod_monic(&mp_mul(s, &e, &m2), h, &m2);
    let g_new = mp_add(&mp_add(g, &mp_mul(t, &e, &m2), &m2), &mp_mul(&q, g, &m2), &m2);
    let h_new = mp_add(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = mp_sub(
        &mp_add(&mp_mul(s, &g_new, &m2), &mp_mul(t, &h_new, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = mp_divmod_monic(&mp_mul(s, &b, &m2), &h_new, &m2);
    let s_new = mp_sub(s, &d, &m2);
    let t_new = mp_sub(&mp_sub(t, &mp_mul(t, &b, &m2), &m2), &mp_mul(&c, &g_new, &m2), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lifts a pairwise-coprime monic factorization of `f` from mod p to
/// mod p^(2^lifts) by a splitting tree of quadratic steps.
fn lift_tree_z(
    f: &[BigInt],
    base: &[Vec<BigInt>],
    p: BigInt,
    lifts: u32,
) -> Result<Vec<Vec<BigInt>>> {
    if base.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    let mid = base.len() / 2;
    let field = Field::prime(u64::try_from(&p).expect("small prime")).expect("prime");
    let to_dense = |v: &[BigInt]| {
        DensePoly::from_coeffs(
            &field,
            v.iter()
                .map(|c| {
                    Coeff::Mod(
                        c.mod_floor(&p)
                            .to_u64_digits()
                            .1
                            .first()
                            .copied()
                            .unwrap_or(0),
                    )
                })
                .collect(),
        )
    };
    let mut g0 = vec![BigInt::one()];
    for b in &base[..mid] {
        g0 = mp_mul(&g0, b, &p);
    }
    let mut h0 = vec![BigInt::one()];
    for b in &base[mid..] {
        h0 = mp_mul(&h0, b, &p);
    }
    let (d, s0, t0) = to_dense(&g0).extended_gcd(&to_dense(&h0));
    if !d.is_constant() || d.is_zero() {
        return Err(Error::Internal("modular factors not coprime".into()));
    }
    let from_dense = |q: &DensePoly| -> Vec<BigInt> {
        q.coeffs()
            .iter()
            .map(|c| match c {
                Coeff::Mod(v) => BigInt::from(*v),
                _ => unreachable!(),
            })
            .collect()
    };
    let mut g = g0;
    let mut h = h0;
    let mut s = from_dense(&s0);
    let mut t = from_dense(&t0);
    let mut m = p.clone();
    for _ in 0..lifts {
        let (g2, h2, s2, t2) = hensel_step_z(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let mut left = lift_tree_z(&g, &base[..mid], p.clone(), lifts)?;
    let mut right = lift_tree_z(&h, &base[mid..], p, lifts)?;
    left.append(&mut right);
    Ok(left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn q() -> Field {
        Field::Rational
    }

    fn reassemble(unit: &Coeff, factors: &[(DensePoly, usize)]) -> DensePoly {
        let mut acc = DensePoly::constant(&q(), unit.clone());
        for (g, m) in factors {
            acc = acc.mul(&g.pow(*m as u32));
        }
        acc
    }

    #[test]
    fn factors_product_of_cyclotomics() {
        // (x^2+x+1)(x^2+1)(x-3)^2
        let f = DensePoly::from_i64(&q(), &[1, 1, 1])
            .mul(&DensePoly::from_i64(&q(), &[1, 0, 1]))
            .mul(&DensePoly::from_i64(&q(), &[-3, 1]).pow(2));
        let (unit, factors) = factor_rational(&f, &mut rng()).unwrap();
        assert_eq!(reassemble(&unit, &factors), f);
        assert_eq!(factors.len(), 3);
        let mults: Vec<usize> = factors.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults.iter().sum::<usize>(), 4);
    }

    #[test]
    fn quartic_z4_plus_1_is_irreducible() {
        // z^4 + 1 factors modulo every prime but not over Q
        let f = DensePoly::from_i64(&q(), &[1, 0, 0, 0, 1]);
        let (_, factors) = factor_rational(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.deg(), 4);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // minimal polynomial of sqrt(2)+sqrt(3): x^4 - 10x^2 + 1,
        // splits into quadratics modulo every prime
        let f = DensePoly::from_i64(&q(), &[1, 0, -10, 0, 1]);
        let (_, factors) = factor_rational(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.deg(), 4);
    }

    #[test]
    fn rational_roots_found() {
        // roots 1/2 (double) and -3
        let f = DensePoly::from_i64(&q(), &[-1, 2])
            .pow(2)
            .mul(&DensePoly::from_i64(&q(), &[3, 1]));
        let roots = rational_roots(&f, &mut rng()).unwrap();
        assert_eq!(roots.len(), 2);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(roots.contains(&(half, 2)));
        assert!(roots.contains(&(BigRational::from(BigInt::from(-3)), 1)));
    }

    #[test]
    fn binary_cubic_split() {
        // z^3 + 1 = (z+1)(z^2-z+1): the fiber factorization over the
        // diagonal point of the Fermat cubic
        let f = DensePoly::from_i64(&q(), &[1, 0, 0, 1]);
        let (_, factors) = factor_rational(&f, &mut rng()).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].0, DensePoly::from_i64(&q(), &[1, 1]));
        assert_eq!(factors[1].0, DensePoly::from_i64(&q(), &[1, -1, 1]));
    }

    #[test]
    fn large_coefficient_factors() {
        // (x^3 - 2)(x^2 + 7x - 5): checks the lifting bound handling
        let f = DensePoly::from_i64(&q(), &[-2, 0, 0, 1])
            .mul(&DensePoly::from_i64(&q(), &[-5, 7, 1]));
        let (unit, factors) = factor_rational(&f, &mut rng()).unwrap();
        assert_eq!(reassemble(&unit, &factors), f);
        assert_eq!(factors.len(), 2);
    }
}
