//! Exact arithmetic in Q_p and Q_p^m.

mod dense;
mod number;
mod order;
mod vector;

pub use dense::{completed_depth, depth_count, vdp_dense_sequence};
pub use number::{is_prime, max_prec, PAdicNumber, DEFAULT_PREC};
pub use order::{vdp_cmp, vdp_compare, vdp_compare_vec, VdpOrder};
pub use vector::{Ball, BallRelation, CosetKey, PAdicVector};
