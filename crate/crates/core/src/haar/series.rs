//! Decomposition of a step function into `Σ y_n ch_{A_n}` with the `y_n`
//! drawn from an ordered dense sequence.

use std::collections::HashMap;

use serde::Serialize;

use super::grid::GridFunction;
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::padic::{completed_depth, depth_count, PAdicNumber, PAdicVector, DEFAULT_PREC};

#[derive(Clone, Debug, Serialize)]
pub struct SeriesTerm {
    /// Position of `y` in the dense sequence.
    pub index: usize,
    pub y: PAdicNumber,
    /// Smallest digit depth whose prefix of the sequence contains `y`.
    pub net_level: u32,
    /// Coset representatives making up `A_n`.
    pub cosets: Vec<PAdicVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesDecomposition {
    pub terms: Vec<SeriesTerm>,
    /// `sup |f - partial sum|` before any term and after each term.
    pub residual_profile: Vec<Magnitude>,
    pub tol_exp: i64,
}

impl SeriesDecomposition {
    pub fn max_residual(&self) -> Magnitude {
        *self.residual_profile.last().expect("profile starts with the initial residual")
    }

    /// `Σ y_n ch_{A_n}(x)`.
    pub fn eval(&self, x: &PAdicVector, f: &GridFunction) -> Result<PAdicNumber> {
        let i = f.locate(x)?;
        let rep = &f.table()[i].0;
        let mut acc = PAdicNumber::zero(f.domain().prime());
        for t in &self.terms {
            if t.cosets.iter().any(|c| c.identical(rep)) {
                acc = acc.try_add(&t.y)?;
            }
        }
        Ok(acc)
    }
}

/// Assigns each coset to the earliest `y_n` agreeing with `f` modulo
/// `p^{tol_exp}`, so the residual is at most `p^{-tol_exp}` everywhere.
pub fn decompose_series(f: &GridFunction, ys: &[PAdicNumber], tol_exp: i64) -> Result<SeriesDecomposition> {
    if f.dims().1 != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.dims().1 });
    }
    let p = f.domain().prime();
    let mut first: HashMap<(i64, u64), usize> = HashMap::new();
    for (n, y) in ys.iter().enumerate() {
        if y.prime() != p {
            return Err(Error::PrimeMismatch(p, y.prime()));
        }
        if let Ok(t) = y.truncate(tol_exp, DEFAULT_PREC) {
            first.entry(t.key()).or_insert(n);
        }
    }
    let values: Vec<&PAdicNumber> = f.table().iter().map(|(_, v)| v.get(0)).collect();
    let mut pick = Vec::with_capacity(values.len());
    for v in &values {
        let key = v.truncate(tol_exp, DEFAULT_PREC)?.key();
        match first.get(&key) {
            Some(&n) => pick.push(n),
            None => {
                let vmin = values.iter().map(|v| v.valuation_floor()).min().unwrap_or(tol_exp);
                let needed = u32::try_from(tol_exp - vmin.min(tol_exp)).unwrap_or(u32::MAX);
                return Err(Error::SequenceTooShallow { needed, count: depth_count(p, needed), got: ys.len() });
            }
        }
    }
    let mut order: Vec<usize> = pick.clone();
    order.sort_unstable();
    order.dedup();

    let mut residual: Vec<Magnitude> = values.iter().map(|v| v.magnitude()).collect();
    let sup = |r: &[Magnitude]| r.iter().copied().max().unwrap_or(Magnitude::zero(p));
    let mut profile = vec![sup(&residual)];
    let mut terms = Vec::with_capacity(order.len());
    for n in order {
        let y = ys[n];
        let mut cosets = Vec::new();
        for (i, &k) in pick.iter().enumerate() {
            if k == n {
                residual[i] = values[i].try_sub(&y)?.magnitude();
                cosets.push(f.table()[i].0.clone());
            }
        }
        profile.push(sup(&residual));
        let net_level = if n == 0 { 0 } else { completed_depth(p, n) + 1 };
        terms.push(SeriesTerm { index: n, y, net_level, cosets });
    }
    Ok(SeriesDecomposition { terms, residual_profile: profile, tol_exp })
}
