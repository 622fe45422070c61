//! Haar measure, coset enumeration, densities and step-function series.

mod density;
mod grid;
mod measure;
mod series;

pub use density::{
    ap_limit, density_at, sparse_set_indicator, verdict, ApLimitReport, ApOutcome, DensityEstimate,
    ResolutionRule, Verdict, SPARSE_RULE, VERDICT_WINDOW,
};
pub use grid::GridFunction;
pub use measure::{
    ball_measure, coset_count, enumerate_cosets, set_measure, sphere_measure, CosetEnumerator, COSET_CAP,
};
pub use series::{decompose_series, SeriesDecomposition, SeriesTerm};
