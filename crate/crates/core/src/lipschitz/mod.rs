//! Ultrametric Lipschitz and Hölder extension.

mod chebyshev;
mod ej;
mod extend;
mod packing;
mod sample;

pub use chebyshev::{chebyshev_radius, level_of, ChebyshevResult};
pub use ej::{decompose_ej, EjClass, EjDecomposition};
pub use extend::{extend_lipschitz, extend_to_grid, nearest_point, verify_extension, ExtensionCheck};
pub use packing::{check_family, packing_check, PackingFamily, PackingParams, PackingReport};
pub use sample::{CertifyReport, SampleSet};
