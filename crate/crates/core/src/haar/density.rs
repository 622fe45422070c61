use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::measure::{CosetEnumerator, COSET_CAP};
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::magnitude::{format_rational, pow_rational};
use crate::padic::{Ball, PAdicVector};

/// Enumeration resolution `K = scale * j + offset` used for the ball of
/// radius `p^{-j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionRule {
    pub scale: i64,
    pub offset: i64,
}

impl ResolutionRule {
    pub const fn new(scale: i64, offset: i64) -> Self {
        ResolutionRule { scale, offset }
    }

    pub fn at(&self, j: i64) -> i64 {
        (self.scale * j + self.offset).max(j)
    }
}

impl Default for ResolutionRule {
    fn default() -> Self {
        ResolutionRule { scale: 1, offset: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvergesTo0,
    ConvergesTo1,
    Inconclusive,
}

/// Exact density ratios on shrinking balls plus the decay verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    #[serde(serialize_with = "ser_ratios")]
    pub ratios: Vec<(i64, BigRational)>,
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_rational")]
    pub theta: BigRational,
    pub rule: ResolutionRule,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_ratios<S: serde::Serializer>(
    rs: &[(i64, BigRational)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(i64, String)> = rs.iter().map(|(j, r)| (*j, format_rational(r))).collect();
    v.serialize(s)
}

impl DensityEstimate {
    /// CSV rows `j,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,numerator,denominator\n");
        for (j, r) in &self.ratios {
            out.push_str(&format!("{j},{},{}\n", r.numer(), r.denom()));
        }
        out
    }
}

/// Number of trailing resolutions the verdict inspects.
pub const VERDICT_WINDOW: usize = 3;

/// `Converges-to-0` when the last three ratios sit under `theta * p^{-(j - j0)}`,
/// `converges-to-1` when their complements do, otherwise inconclusive.
pub fn verdict(p: u32, ratios: &[(i64, BigRational)], theta: &BigRational) -> Verdict {
    if ratios.len() < VERDICT_WINDOW {
        return Verdict::Inconclusive;
    }
    let j0 = ratios[0].0;
    let tail = &ratios[ratios.len() - VERDICT_WINDOW..];
    let decays = |f: &dyn Fn(&BigRational) -> BigRational| {
        tail.iter().all(|(j, r)| f(r) <= theta * pow_rational(p, j0 - j))
    };
    if decays(&|r| r.clone()) {
        Verdict::ConvergesTo0
    } else if decays(&|r| BigRational::one() - r) {
        Verdict::ConvergesTo1
    } else {
        Verdict::Inconclusive
    }
}

/// `mu(B(x, p^{-j}) ∩ A) / mu(B(x, p^{-j}))` for each `j`, by enumeration at
/// resolution `rule.at(j)`.
pub fn density_at<F>(
    indicator: F,
    x: &PAdicVector,
    j_range: &[i64],
    rule: ResolutionRule,
    theta: &BigRational,
) -> Result<DensityEstimate>
where
    F: Fn(&PAdicVector) -> Result<bool> + Sync,
{
    if j_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("resolutions must be strictly increasing".into()));
    }
    let mut ratios = Vec::with_capacity(j_range.len());
    for &j in j_range {
        let b = Ball::new(x.clone(), j);
        let e = CosetEnumerator::new(&b, rule.at(j), COSET_CAP)?;
        let hits = e.count_where(&indicator)?;
        ratios.push((j, BigRational::new(BigInt::from(hits), BigInt::from(e.len()))));
    }
    let verdict = verdict(x.prime(), &ratios, theta);
    Ok(DensityEstimate { ratios, verdict, theta: theta.clone(), rule })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApOutcome {
    Confirmed,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApLimitReport {
    pub outcome: ApOutcome,
    /// Density profile of the set where `|f - y| > eps`.
    pub estimate: DensityEstimate,
}

/// Tests whether `y` is an approximate limit of `f` at `x`: the set where
/// `f` leaves the `eps`-ball around `y` must have density 0 at `x`.
pub fn ap_limit<F: PointFunction + ?Sized>(
    f: &F,
    x: &PAdicVector,
    y: &PAdicVector,
    eps: &BigRational,
    j_range: &[i64],
    rule: ResolutionRule,
    theta: &BigRational,
) -> Result<ApLimitReport> {
    let outside = |z: &PAdicVector| -> Result<bool> {
        Ok(!f.eval(z)?.try_sub(y)?.magnitude().le_rational(eps))
    };
    let estimate = density_at(outside, x, j_range, rule, theta)?;
    let floor = pow_rational(x.prime(), -1);
    let stuck = estimate.ratios.len() >= VERDICT_WINDOW
        && estimate.ratios[estimate.ratios.len() - VERDICT_WINDOW..]
            .iter()
            .all(|(_, r)| *r >= floor);
    let outcome = match estimate.verdict {
        Verdict::ConvergesTo0 => ApOutcome::Confirmed,
        Verdict::ConvergesTo1 => ApOutcome::Refuted,
        Verdict::Inconclusive if stuck => ApOutcome::Refuted,
        Verdict::Inconclusive => ApOutcome::Inconclusive,
    };
    Ok(ApLimitReport { outcome, estimate })
}

/// Membership in the sparse set `⋃_k {z : |z| = p^{-k}, digits k+1..2k of z are 0}`,
/// which has density 0 at the origin yet meets every ball around it.
pub fn sparse_set_indicator(z: &PAdicVector) -> Result<bool> {
    let x = z.get(0);
    let Some(k) = x.valuation() else { return Ok(false) };
    if k < 1 {
        return Ok(false);
    }
    for n in k + 1..=2 * k {
        match x.digit_at(n) {
            Some(0) => {}
            Some(_) => return Ok(false),
            None => return Err(Error::InsufficientPrecision { needed: 2 * k + 1, known: n }),
        }
    }
    Ok(true)
}

/// Resolution rule that resolves the sparse set on `B(0, p^{-j})`.
pub const SPARSE_RULE: ResolutionRule = ResolutionRule::new(2, 2);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::GridFunction;
    use crate::padic::PAdicNumber;
    use num_traits::Zero;

    fn origin() -> PAdicVector {
        PAdicVector::zeros(5, 1)
    }

    #[test]
    fn full_density() {
        let x = PAdicVector::from_ints(5, &[3]).unwrap();
        let d = density_at(|_| Ok(true), &x, &[1, 2, 3], ResolutionRule::default(), &BigRational::one()).unwrap();
        assert!(d.ratios.iter().all(|(_, r)| r.is_one()));
        assert_eq!(d.verdict, Verdict::ConvergesTo1);
    }

    #[test]
    fn small_ball_density() {
        let a = Ball::origin(5, 1, 1);
        let d = density_at(|z| a.contains(z), &origin(), &[1, 2, 3], ResolutionRule::default(), &BigRational::one())
            .unwrap();
        assert!(d.ratios.iter().all(|(_, r)| r.is_one()));
    }

    #[test]
    fn sparse_set_has_zero_density() {
        let js = [1, 2, 3, 4];
        let d = density_at(sparse_set_indicator, &origin(), &js, SPARSE_RULE, &BigRational::one()).unwrap();
        for (j, r) in &d.ratios {
            assert!(*r <= BigRational::from_integer(5.into()) * pow_rational(5, -j));
            assert!(!r.is_zero());
        }
        assert_eq!(d.verdict, Verdict::ConvergesTo0);
        assert!(d.to_csv().starts_with("j,numerator,denominator\n1,"));
    }

    #[test]
    fn too_few_resolutions_is_inconclusive() {
        let d = density_at(|_| Ok(false), &origin(), &[1, 2], ResolutionRule::default(), &BigRational::one()).unwrap();
        assert_eq!(d.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn ap_limit_cases() {
        let half = BigRational::new(1.into(), 2.into());
        let one = BigRational::one();
        let dom = Ball::origin(5, 1, 0);
        let c = GridFunction::from_fn(&dom, 1, 1, |_| PAdicVector::from_ints(5, &[3])).unwrap();
        let r = ap_limit(&c, &origin(), &PAdicVector::from_ints(5, &[3]).unwrap(), &half, &[1, 2, 3], ResolutionRule::default(), &one)
            .unwrap();
        assert_eq!(r.outcome, ApOutcome::Confirmed);

        let ball = Ball::origin(5, 1, 1);
        let ch = GridFunction::from_fn(&dom, 1, 1, |z| {
            PAdicVector::from_ints(5, &[ball.contains(z)? as i64])
        })
        .unwrap();
        let r = ap_limit(&ch, &origin(), &origin(), &half, &[1, 2, 3], ResolutionRule::default(), &one).unwrap();
        assert_eq!(r.outcome, ApOutcome::Refuted);
    }

    #[test]
    fn sparse_indicator_digits() {
        let inside: PAdicNumber = "1,0e1@5".parse().unwrap();
        let outside: PAdicNumber = "1,2e1@5".parse().unwrap();
        assert!(sparse_set_indicator(&PAdicVector::scalar(inside)).unwrap());
        assert!(!sparse_set_indicator(&PAdicVector::scalar(outside)).unwrap());
        assert!(!sparse_set_indicator(&origin()).unwrap());
    }
}
