//! The genus-zero curve backend: bundles on `P^1` as lattice pairs, their
//! cohomology, Čech classes and the residue pairing.

pub mod bundle;
pub mod cohomology;
pub mod lattice;
pub mod psi;

pub use crate::exactalg::CurvePoint;
pub use bundle::Bundle;
pub use cohomology::{oracle_h0, Cohomology, H1Space};
pub use psi::{psi_embedding_check, PsiReport};
