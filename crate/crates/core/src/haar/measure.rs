use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::magnitude::pow_rational;
use crate::padic::{max_prec, Ball, PAdicNumber, PAdicVector, DEFAULT_PREC};

/// Default ceiling on the number of cosets a single enumeration may visit.
pub const COSET_CAP: u128 = 10_000_000;

/// `mu(B(c, p^{-k})) = p^{-k m}`.
pub fn ball_measure(b: &Ball) -> BigRational {
    pow_rational(b.prime(), -b.rad_exp * b.dim() as i64)
}

/// `mu{x in Q_p : |x| = p^{-l}} = p^{-l} - p^{-l-1}`.
pub fn sphere_measure(p: u32, l: i64) -> BigRational {
    pow_rational(p, -l) - pow_rational(p, -l - 1)
}

/// Number of radius-`p^{-K}` cosets inside `b`, or `None` on overflow.
pub fn coset_count(b: &Ball, k: i64) -> Option<u128> {
    let depth = u32::try_from(k.checked_sub(b.rad_exp)?).ok()?;
    (b.prime() as u128).checked_pow(depth.checked_mul(b.dim() as u32)?)
}

fn checked_count(b: &Ball, k: i64, cap: u128) -> Result<u128> {
    if k < b.rad_exp {
        return Err(Error::Precondition(format!(
            "resolution {k} is coarser than the ball radius exponent {}",
            b.rad_exp
        )));
    }
    match coset_count(b, k) {
        Some(c) if c <= cap => Ok(c),
        Some(c) => Err(Error::ResourceCap { count: c, cap }),
        None => Err(Error::ResourceCap { count: u128::MAX, cap }),
    }
}

/// Enumerates canonical coset representatives with a caller-chosen cap.
pub struct CosetEnumerator {
    p: u32,
    k: i64,
    base: Vec<BigRational>,
    step: BigRational,
    per_coord: u128,
    count: u128,
    prec: u32,
}

impl CosetEnumerator {
    pub fn new(b: &Ball, k: i64, cap: u128) -> Result<Self> {
        let count = checked_count(b, k, cap)?;
        let p = b.prime();
        let base = b
            .center
            .coords()
            .iter()
            .map(|c| Ok(c.truncate(b.rad_exp, DEFAULT_PREC)?.to_rational()))
            .collect::<Result<Vec<_>>>()?;
        let low = b.center.valuation().unwrap_or(b.rad_exp).min(b.rad_exp);
        let span = u32::try_from(k - low).unwrap_or(u32::MAX);
        let prec = DEFAULT_PREC.max(span.saturating_add(1)).min(max_prec(p));
        Ok(CosetEnumerator {
            p,
            k,
            base,
            step: pow_rational(p, b.rad_exp),
            per_coord: (p as u128).pow((k - b.rad_exp) as u32),
            count,
            prec,
        })
    }

    pub fn len(&self) -> u128 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn resolution(&self) -> i64 {
        self.k
    }

    /// Representative number `idx`; coordinate 0 is the most significant.
    pub fn get(&self, idx: u128) -> PAdicVector {
        let m = self.base.len();
        let mut rest = idx;
        let mut ns = vec![0u128; m];
        for j in (0..m).rev() {
            ns[j] = rest % self.per_coord;
            rest /= self.per_coord;
        }
        let coords = (0..m)
            .map(|j| {
                let v = &self.base[j] + &self.step * BigRational::from_integer(BigInt::from(ns[j]));
                PAdicNumber::from_ratio(self.p, &v, self.prec).expect("representable coset")
            })
            .collect();
        PAdicVector::new(coords).expect("nonempty")
    }

    /// All representatives in enumeration order, built in parallel.
    pub fn collect(&self) -> Vec<PAdicVector> {
        (0..self.count as u64).into_par_iter().map(|i| self.get(i as u128)).collect()
    }

    /// Number of representatives satisfying `pred`.
    pub fn count_where<F>(&self, pred: F) -> Result<u128>
    where
        F: Fn(&PAdicVector) -> Result<bool> + Sync,
    {
        (0..self.count as u64)
            .into_par_iter()
            .map(|i| pred(&self.get(i as u128)).map(u128::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
}

/// Canonical representatives of the radius-`p^{-K}` cosets inside `b`.
pub fn enumerate_cosets(b: &Ball, k: i64) -> Result<Vec<PAdicVector>> {
    Ok(CosetEnumerator::new(b, k, COSET_CAP)?.collect())
}

/// Haar measure of `{x in b : indicator(x)}` for an indicator constant on
/// radius-`p^{-K}` cosets.
pub fn set_measure<F>(indicator: F, b: &Ball, k: i64) -> Result<BigRational>
where
    F: Fn(&PAdicVector) -> Result<bool> + Sync,
{
    let e = CosetEnumerator::new(b, k, COSET_CAP)?;
    let hits = e.count_where(indicator)?;
    Ok(BigRational::from_integer(BigInt::from(hits)) * pow_rational(b.prime(), -k * b.dim() as i64))
}
