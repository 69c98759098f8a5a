//! Exact elementary transformations of vector bundles on the projective line,
//! curvilinear subschemes of the associated scroll, and the span/defect
//! identities relating them.
//!
//! Bundles are lattice pairs inside `k(t)^r`: a `k[t]`-lattice for the finite
//! chart and a lattice over the local ring at infinity. Every computation is
//! exact over the rationals or a prime field.

pub mod brillnoether;
pub mod eltrans;
pub mod error;
pub mod exactalg;
pub mod hilbquot;
pub mod p1bundles;
pub mod random;
pub mod spans;

pub use error::{Error, Result};
pub use exactalg::{CurvePoint, Field, LaurentJet, MatrixK, MatrixR, Poly, RatFunc, Scalar};
pub use p1bundles::Bundle;
