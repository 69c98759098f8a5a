//! Principal parts, torsion quotients and the elementary transformations
//! they define.

pub mod normal_form;
pub mod principal;
pub mod quot;

pub use normal_form::{normal_form, NormalForm};
pub use principal::{pairing_principal, PrincipalPart, TorsionModule};
pub use quot::{quot_equal, quotient_module, vtilde_from_tau, QuotPoint, VTilde};
