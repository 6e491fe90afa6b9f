//! Exact-arithmetic toolkit for curves on surfaces in projective 3-space.
//!
//! The crate has four layers:
//!
//! * [`field`] and [`poly`] — exact coefficient fields (rationals, prime
//!   fields, simple extensions of the rationals) and sparse multivariate
//!   polynomial arithmetic on top of them, including resultants,
//!   multivariate gcd, squarefree parts, factorization and truncated
//!   power series.
//! * [`geometry`] — projective points, planes, lines, plane curves with an
//!   embedding frame, and cones over plane curves together with their
//!   sections by a surface.
//! * [`singularity`] — local analysis of plane-curve germs: singular loci,
//!   Milnor and Tjurina numbers via certified jet linear algebra, ADE
//!   classification, and the transfer of singularity types from a plane
//!   curve to a cone section.
//! * [`family`] — the closed-form dimension and obstruction calculus for
//!   equisingular families of curves in the linear systems `|dH|` on a
//!   smooth surface of degree `n`.

pub mod dense;
pub mod dual;
pub mod error;
pub mod factor;
pub mod family;
pub mod field;
pub mod gcd;
pub mod geometry;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod resultant;
pub mod series;
pub mod singularity;

pub use error::Error;
pub use field::{Coeff, Field};
pub use poly::SparsePolynomial;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
