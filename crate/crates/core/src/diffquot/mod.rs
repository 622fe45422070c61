//! Difference quotients, Taylor expansion, exact quotient identities and
//! smoothness diagnostics.

mod approx;
mod expr;
mod holder;
mod identities;
mod poly;
mod quotient;
mod suite;
mod taylor;

pub use approx::{ap_derivative, stepanoff_scan, ApDerivativeReport, StepanoffReport, STEPANOFF_DEPTH};
pub use expr::{Expr, SymbolicFunction};
pub use holder::{holder_scan, HolderReport};
pub use identities::{chain_rule_check, product_rule_check, telescope_check, IdentityCheck};
pub use poly::{eval_polys, Poly};
pub use quotient::{phi1, phin, phin_limit, LimitReport, LimitSchedule, LinearMap, QuotientPoint};
pub use suite::{identity_suite, Family, Identity, IdentitySuite, IdentityTally, IdentityWitness};
pub use taylor::{taylor_eval, TaylorMethod, TaylorReport};
