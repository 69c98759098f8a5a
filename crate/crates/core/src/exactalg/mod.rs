//! Exact arithmetic: scalars, polynomials, rational functions, Laurent jets,
//! matrices over the field and over `k(t)`, Hermite forms and Birkhoff
//! factorization.

pub mod birkhoff;
pub mod hnf;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod polymat;
pub mod ratfunc;
pub mod scalar;

pub use birkhoff::{birkhoff_factorize, Splitting};
pub use hnf::hermite_normal_form;
pub use laurent::{laurent_expand, CurvePoint, LaurentJet};
pub use matrix::MatrixK;
pub use poly::Poly;
pub use polymat::MatrixR;
pub use ratfunc::RatFunc;
pub use scalar::{Field, Scalar};

/// Rank and a kernel basis of a matrix over the base field.
pub fn kernel_rank(m: &MatrixK) -> (usize, Vec<Vec<Scalar>>) {
    m.kernel_rank()
}
