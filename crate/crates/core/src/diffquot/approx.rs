use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::quotient::{phin_limit, LimitSchedule, LinearMap};
use crate::error::Result;
use crate::function::PointFunction;
use crate::haar::{density_at, enumerate_cosets, DensityEstimate, ResolutionRule, Verdict};
use crate::padic::{Ball, PAdicVector};

#[derive(Clone, Debug, Serialize)]
pub struct ApDerivativeReport {
    pub t: LinearMap,
    /// Density profile of `{z : |f(z) - f(x) - T(z - x)| > eps |z - x|}` at `x`.
    pub estimate: DensityEstimate,
    pub differentiable: bool,
}

/// Approximate differential at `x`: `T` is assembled from the partial
/// quotient limits `Φ̄¹f(x; e_i; 0)`, then the bad set's density is measured.
pub fn ap_derivative<F: PointFunction + ?Sized>(
    f: &F,
    x: &PAdicVector,
    j_range: &[i64],
    eps: &BigRational,
    rule: ResolutionRule,
    schedule: &LimitSchedule,
) -> Result<ApDerivativeReport> {
    let p = f.prime();
    let m = x.dim();
    let cols = (0..m)
        .map(|i| Ok(phin_limit(f, x, &[PAdicVector::basis(p, m, i)], schedule)?.value))
        .collect::<Result<Vec<_>>>()?;
    let t = LinearMap::from_columns(&cols)?;
    let fx = f.eval(x)?;
    let bad = |z: &PAdicVector| -> Result<bool> {
        let h = z.try_sub(x)?;
        if h.is_zero() {
            return Ok(false);
        }
        let r = f.eval(z)?.try_sub(&fx)?.try_sub(&t.apply(&h)?)?;
        let bound = h.sup_norm() * eps;
        Ok(!r.magnitude().le_rational(&bound))
    };
    let estimate = density_at(bad, x, j_range, rule, &BigRational::one())?;
    let differentiable = estimate.verdict == Verdict::ConvergesTo0;
    Ok(ApDerivativeReport { t, estimate, differentiable })
}

#[derive(Clone, Debug, Serialize)]
pub struct StepanoffReport {
    #[serde(serialize_with = "ser_fraction")]
    pub fraction: BigRational,
    pub successes: usize,
    pub total: usize,
    /// Grid points where differentiability was not confirmed.
    pub failures: Vec<PAdicVector>,
}

fn ser_fraction<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::magnitude::format_rational(r))
}

/// Radii probed around each grid point: `p^{-j}` for `j = K+1..=K+3`.
pub const STEPANOFF_DEPTH: i64 = 3;

/// Fraction of resolution-`K` grid points of `domain` at which the
/// approximate derivative is confirmed within `eps`.
pub fn stepanoff_scan<F: PointFunction + ?Sized>(
    f: &F,
    domain: &Ball,
    k: i64,
    eps: &BigRational,
    schedule: &LimitSchedule,
) -> Result<StepanoffReport> {
    let points = enumerate_cosets(domain, k)?;
    let js: Vec<i64> = (k + 1..=k + STEPANOFF_DEPTH).collect();
    let rule = ResolutionRule::new(1, 2);
    let ok = points
        .par_iter()
        .map(|x| match ap_derivative(f, x, &js, eps, rule, schedule) {
            Ok(r) => Ok(r.differentiable),
            Err(crate::Error::NonConvergent(_)) => Ok(false),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = ok.iter().filter(|&&b| b).count();
    let failures = points.iter().zip(&ok).filter(|(_, &b)| !b).map(|(x, _)| x.clone()).collect();
    Ok(StepanoffReport {
        fraction: BigRational::new(BigInt::from(successes), BigInt::from(points.len())),
        successes,
        total: points.len(),
        failures,
    })
}
