//! Weighted Chebyshev radius in an ultrametric space.
//!
//! For `H = {(z_i, x_i)}` and `w_i = |x_i|^r`, the set
//! `X_t = ⋂ B(z_i, w_i t)` is nonempty iff every pair of balls meets, i.e.
//! iff `t >= |z_i - z_j| / max(w_i, w_j)` for all pairs. So the optimal level
//! is the largest such pair ratio, and `X_c` is the smallest of the balls.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnitude::{Exponent, Magnitude};
use crate::padic::{PAdicNumber, PAdicVector};

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevResult {
    pub c: Magnitude,
    pub q: PAdicVector,
    /// Indices of constraints tight at `q`: `|q - z_i| = w_i c`.
    pub tight: Vec<usize>,
    /// `c = 0`: all sites coincide and every constraint is trivially tight.
    pub degenerate: bool,
}

fn weights(h: &[(PAdicVector, PAdicNumber)], r: Exponent) -> Result<Vec<Magnitude>> {
    h.iter()
        .map(|(_, x)| {
            if x.is_zero() {
                Err(Error::Precondition("weight x must be nonzero".into()))
            } else {
                Ok(x.magnitude().powr(r))
            }
        })
        .collect()
}

pub fn chebyshev_radius(h: &[(PAdicVector, PAdicNumber)], r: Exponent) -> Result<ChebyshevResult> {
    if h.is_empty() {
        return Err(Error::Invalid("empty weighted site set".into()));
    }
    let w = weights(h, r)?;
    let p = h[0].0.prime();
    let mut c = Magnitude::zero(p);
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            let d = h[i].0.dist(&h[j].0)?;
            c = c.max(d.div(&w[i].max(w[j])).expect("nonzero weight"));
        }
    }
    let mut best = 0;
    for i in 1..h.len() {
        if w[i] < w[best] {
            best = i;
        }
    }
    let q = h[best].0.clone();
    let tight = (0..h.len())
        .filter(|&i| q.dist(&h[i].0).map(|d| d == w[i].mul(&c)).unwrap_or(false))
        .collect();
    Ok(ChebyshevResult { c, q, tight, degenerate: c.is_zero() })
}

/// `max_i |y - z_i| / w_i`: the least level `t` with `y ∈ X_t`.
pub fn level_of(h: &[(PAdicVector, PAdicNumber)], r: Exponent, y: &PAdicVector) -> Result<Magnitude> {
    let w = weights(h, r)?;
    let mut t = Magnitude::zero(y.prime());
    for ((z, _), wi) in h.iter().zip(&w) {
        t = t.max(y.dist(z)?.div(wi).expect("nonzero weight"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::enumerate_cosets;
    use crate::padic::{Ball, DEFAULT_PREC};

    fn pt(x: i64) -> PAdicVector {
        PAdicVector::from_ints(5, &[x]).unwrap()
    }

    fn n(x: i64) -> PAdicNumber {
        PAdicNumber::from_int(5, x, DEFAULT_PREC).unwrap()
    }

    fn brute(h: &[(PAdicVector, PAdicNumber)], r: Exponent) -> Magnitude {
        let mut reps = enumerate_cosets(&Ball::origin(5, 1, 0), 3).unwrap();
        reps.extend(h.iter().map(|(z, _)| z.clone()));
        reps.iter().map(|y| level_of(h, r, y).unwrap()).min().unwrap()
    }

    #[test]
    fn singleton() {
        let h = vec![(pt(7), n(3))];
        let c = chebyshev_radius(&h, Exponent::from_integer(1)).unwrap();
        assert!(c.c.is_zero() && c.degenerate);
        assert_eq!(c.q, pt(7));
        assert_eq!(c.tight, vec![0]);
    }

    #[test]
    fn two_unit_sites() {
        let one = Exponent::from_integer(1);
        let h = vec![(pt(0), n(1)), (pt(1), n(2))];
        let c = chebyshev_radius(&h, one).unwrap();
        assert_eq!(c.c, Magnitude::one(5));
        assert_eq!(c.q, pt(0));
        assert_eq!(brute(&h, one), c.c);
    }

    #[test]
    fn clustered_sites_and_weights() {
        let r = Exponent::new(1, 2);
        let h = vec![(pt(25), n(1)), (pt(50), n(5)), (pt(100), n(1)), (pt(0), n(25))];
        let c = chebyshev_radius(&h, r).unwrap();
        assert_eq!(c.c, Magnitude::pow(5, Exponent::new(-3, 2)));
        assert_eq!(level_of(&h, r, &c.q).unwrap(), c.c);
        assert!(!c.tight.is_empty());
        assert_eq!(brute(&h, r), c.c);
    }
}
