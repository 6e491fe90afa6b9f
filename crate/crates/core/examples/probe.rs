use eqlab_core::field::Field;
use eqlab_core::geometry::*;
use eqlab_core::parse::qpoly;
use eqlab_core::poly::SparsePolynomial;
use eqlab_core::linalg::Matrix;
use rand::SeedableRng;
use std::time::Instant;

fn main() {
    let q = Field::Rational;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let c = PlaneCurve::on_w_plane(qpoly("y^2*z - x^3", &["x", "y", "z"])).unwrap();
    let p = ProjPoint::from_i64(&q, &[0, 0, 0, 1]);
    let fermat = qpoly("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]);
    let t0 = Instant::now();
    let cs = cone_section(&c, &p, &fermat).unwrap();
    eprintln!("cone_section: {:?}", t0.elapsed());

    let center = sample_point(&q, 25, &mut rng);
    eprintln!("center: {}", center.format());
    let mut m = Matrix::identity(&q, 4);
    for i in 0..4 {
        m.set(i, 3, center.coords()[i].clone());
    }
    let t0 = Instant::now();
    let f2 = substitute_matrix(cs.cone(), &m).unwrap();
    let g2 = substitute_matrix(cs.surface(), &m).unwrap();
    eprintln!("substitutions: {:?} (f2 {} terms, g2 {} terms)", t0.elapsed(), f2.terms().len(), g2.terms().len());
    let t0 = Instant::now();
    let r = eqlab_core::resultant::resultant(&f2, &g2, 3).unwrap();
    eprintln!("resultant: {:?} ({} terms, deg {})", t0.elapsed(), r.terms().len(), r.total_degree());
    let r3 = r.drop_var(3).unwrap();
    let t0 = Instant::now();
    let sf = eqlab_core::gcd::squarefree_part(&r3).unwrap();
    eprintln!("squarefree: {:?} ({} terms, deg {})", t0.elapsed(), sf.terms().len(), sf.total_degree());
    let t0 = Instant::now();
    let verdict = eqlab_core::factor::irreducibility_test(&sf, &mut rng).unwrap();
    eprintln!("irreducibility: {:?} -> {}", t0.elapsed(), verdict);
    let _ = SparsePolynomial::zero(&q, 2);
}
