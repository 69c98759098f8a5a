//! Petri maps, restricted cup products and the span and defect identities
//! attached to a subspace of sections of a fixed bundle.

pub mod identities;
pub mod petri;

pub use identities::{
    bn_span_identity_check, find_lambda, genrks_defect_check, kernel_span_check, merindol_construct, secant_membership, GenRksReport,
    MerindolReport, SpanIdentity,
};
pub use petri::{
    cup_petri_duality, petri_m_injective, petri_rank, restricted_cup, zlambda, MInjectivity, PetriData, SectionSubspace, ZLambda,
};
