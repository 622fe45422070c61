//! Whitney-type extension of polynomial jets from a closed coset union.

mod closed;
mod glue;
mod jets;
mod partition;

pub use closed::{dist_to_set, CosetUnion};
pub use glue::{verify_whitney, whitney_extend, PackingScan, PartitionCheck, WhitneyExtension, WhitneyReport, WhitneyRow};
pub use jets::{jet_from_function, JetField, PolyMap};
pub use partition::{build_h, disjoint_ball_family, FamilySite, PartitionFamily, RadiusFunction, WhitneyParams};
