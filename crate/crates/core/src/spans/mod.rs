//! Spans and defects of subschemes of the scroll in `P H^1`, and the
//! generalized geometric Riemann-Roch identities.

pub mod span;

pub use span::{
    exactness_check, ggrr_check, psi_delta, psi_point, rel_span, relggrr_check, same_span_check, span_of, span_routes, DeltaPoint,
    H1Subspace, IdentityReport, SpanResult,
};
