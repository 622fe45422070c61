use rayon::prelude::*;
use serde::Serialize;

use super::sample::SampleSet;
use crate::error::{Error, Result};
use crate::haar::GridFunction;
use crate::magnitude::Magnitude;
use crate::padic::{Ball, PAdicVector};

/// Index of the first point of `t` closest to `v`, and that distance.
pub fn nearest_point(t: &[PAdicVector], v: &PAdicVector) -> Result<(usize, Magnitude)> {
    let mut best: Option<(usize, Magnitude)> = None;
    for (i, x) in t.iter().enumerate() {
        let d = v.dist(x)?;
        if best.as_ref().map_or(true, |(_, b)| d < *b) {
            best = Some((i, d));
        }
    }
    best.ok_or_else(|| Error::Invalid("empty point set".into()))
}

/// Nearest-site extension: the value of the first closest site. Preserves
/// the certified `(C, r)` bound in an ultrametric space.
pub fn extend_lipschitz(s: &SampleSet, v: &PAdicVector) -> Result<PAdicVector> {
    if !s.is_certified() {
        return Err(Error::Uncertified);
    }
    let (i, _) = nearest_point(&s.sites(), v)?;
    Ok(s.points[i].1.clone())
}

/// The extension tabulated on every radius-`p^{-K}` coset of `domain`.
pub fn extend_to_grid(s: &SampleSet, domain: &Ball, k: i64) -> Result<GridFunction> {
    if !s.is_certified() {
        return Err(Error::Uncertified);
    }
    let sites = s.sites();
    GridFunction::from_fn(domain, k, s.dim_out(), |x| {
        let (i, _) = nearest_point(&sites, x)?;
        Ok(s.points[i].1.clone())
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionCheck {
    pub holds: bool,
    pub max_ratio: Magnitude,
    pub pairs_checked: u64,
    pub witness: Option<(PAdicVector, PAdicVector)>,
}

/// Checks `|g(a) - g(b)| <= C |a - b|^r` over all pairs drawn from the sites
/// and the extended points.
pub fn verify_extension(s: &SampleSet, extended: &[(PAdicVector, PAdicVector)]) -> Result<ExtensionCheck> {
    let all: Vec<&(PAdicVector, PAdicVector)> = s.points.iter().chain(extended.iter()).collect();
    let ns = s.points.len();
    let r = s.r;
    let per_row = (0..all.len())
        .into_par_iter()
        .map(|i| -> Result<(Magnitude, u64, Option<usize>)> {
            let mut max = Magnitude::zero(s.prime());
            let mut count = 0;
            let mut bad = None;
            // site-site pairs are the certificate itself
            let start = if i < ns { ns } else { i + 1 };
            for j in start.max(i + 1)..all.len() {
                let dx = all[i].0.dist(&all[j].0)?;
                let dv = all[i].1.dist(&all[j].1)?;
                if dx.is_zero() {
                    if !dv.is_zero() {
                        bad.get_or_insert(j);
                    }
                    continue;
                }
                let q = dv.div(&dx.powr(r)).expect("nonzero distance");
                count += 1;
                if q > max {
                    max = q;
                }
                if bad.is_none() && !q.le_rational(&s.c) {
                    bad = Some(j);
                }
            }
            Ok((max, count, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = per_row.iter().map(|r| r.0).max().unwrap_or(Magnitude::zero(s.prime()));
    let pairs_checked = per_row.iter().map(|r| r.1).sum();
    let witness = per_row
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.2.map(|j| (all[i].0.clone(), all[j].0.clone())));
    Ok(ExtensionCheck { holds: witness.is_none(), max_ratio, pairs_checked, witness })
}
