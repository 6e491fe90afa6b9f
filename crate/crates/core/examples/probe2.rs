use eqlab_core::field::Field;
use eqlab_core::geometry::*;
use eqlab_core::parse::qpoly;
use eqlab_core::linalg::Matrix;
use rand::SeedableRng;
use std::time::Instant;

fn main() {
    let q = Field::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let c = PlaneCurve::on_w_plane(qpoly("y^2*z - x^3", &["x", "y", "z"])).unwrap();
    let p = ProjPoint::from_i64(&q, &[0, 0, 0, 1]);
    let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
    let cs = cone_section(&c, &p, &fermat).unwrap();
    let center = sample_point(&q, 25, &mut rng);
    let mut m = Matrix::identity(&q, 4);
    for i in 0..4 {
        m.set(i, 3, center.coords()[i].clone());
    }
    let f2 = substitute_matrix(cs.cone(), &m).unwrap();
    let g2 = substitute_matrix(cs.surface(), &m).unwrap();
    let r = eqlab_core::resultant::resultant(&f2, &g2, 3).unwrap();
    let r3 = r.drop_var(3).unwrap();
    // normalize to integer coefficients first
    let t0 = Instant::now();
    let rp = r3.primitive_integer().unwrap();
    eprintln!("primitive: {:?}", t0.elapsed());
    let affine = rp.dehomogenize(2, &q.one()).unwrap().drop_var(2).unwrap();
    eprintln!("affine terms: {}, deg {}", affine.terms().len(), affine.total_degree());
    let fx = affine.differentiate(0).unwrap();
    let t0 = Instant::now();
    let g = eqlab_core::gcd::gcd(&affine, &fx).unwrap();
    eprintln!("gcd(f, fx): {:?} -> deg {}", t0.elapsed(), g.total_degree());
}
