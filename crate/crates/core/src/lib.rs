//! Exact computation in non-archimedean analysis over Q_p.

pub mod diffquot;
pub mod error;
pub mod function;
pub mod haar;
pub mod lipschitz;
pub mod magnitude;
pub mod padic;
pub mod whitney;

pub use error::{Error, Result};
pub use function::PointFunction;
pub use magnitude::Magnitude;
pub use padic::{Ball, PAdicNumber, PAdicVector};
