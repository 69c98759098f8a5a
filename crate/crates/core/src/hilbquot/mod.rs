//! Curvilinear subschemes of the scroll, the map `Z -> V_Z`, the inverse
//! construction from torsion quotients, and small-field censuses.

pub mod census;
pub mod scheme;

pub use census::{enumerate_reduced, enumerate_reduced_over, CensusReport};
pub use scheme::{alpha, pi_defect, point_cluster, quot_to_hilb, roundtrip_check, Alpha, Cluster, PiDefect, ZScheme};
