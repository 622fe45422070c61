//! Splitting a grid function into classes `E_j` on which a local Hölder
//! bound `|f(x) - f(z)| <= p^j |x - z|^r` holds.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::function::PointFunction;
use crate::haar::{CosetEnumerator, GridFunction, COSET_CAP};
use crate::magnitude::{Exponent, Magnitude};
use crate::padic::{Ball, PAdicVector};

#[derive(Clone, Debug, Serialize)]
pub struct EjClass {
    pub j: i64,
    pub points: Vec<PAdicVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EjDecomposition {
    pub classes: Vec<EjClass>,
    pub unassigned: Vec<PAdicVector>,
    /// Close pairs checked against `p^j |x - z|^r`.
    pub pairs_checked: u64,
    pub violations: Vec<(PAdicVector, PAdicVector)>,
}

/// Radius exponents `i` probed for level `j`: `R = p^{-i}` with
/// `max(j + 1, k_dom) <= i < K`.
fn radii(j: i64, k_dom: i64, k: i64) -> std::ops::Range<i64> {
    (j + 1).max(k_dom)..k
}

fn bound(p: u32, j: i64, d: Magnitude, r: Exponent) -> Magnitude {
    Magnitude::pow(p, Exponent::from_integer(j)).mul(&d.powr(r))
}

/// Whether `z` meets the level-`j` condition: at every probed radius, the
/// cosets `x` with `|f(x) - f(z)| > p^j |x - z|^r` fill less than half the ball.
fn satisfies(f: &GridFunction, z: &PAdicVector, fz: &PAdicVector, j: i64, r: Exponent) -> Result<bool> {
    let k = f.resolution();
    let p = f.domain().prime();
    for i in radii(j, f.domain().rad_exp, k) {
        let e = CosetEnumerator::new(&Ball::new(z.clone(), i), k, COSET_CAP)?;
        let bad = e.count_where(|x| {
            let d = x.dist(z)?;
            let df = f.eval(x)?.dist(fz)?;
            Ok(df > bound(p, j, d, r))
        })?;
        if 2 * bad >= e.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Assigns every grid point to the least `j` in `j_range` meeting the
/// measure condition, then verifies the Hölder bound on close pairs.
pub fn decompose_ej(f: &GridFunction, r: Exponent, j_range: std::ops::RangeInclusive<i64>) -> Result<EjDecomposition> {
    let p = f.domain().prime();
    let k_dom = f.domain().rad_exp;
    let table = f.table();
    let level: Vec<Option<i64>> = table
        .par_iter()
        .map(|(z, fz)| {
            for j in j_range.clone() {
                if satisfies(f, z, fz, j, r)? {
                    return Ok(Some(j));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;

    let mut classes: BTreeMap<i64, Vec<PAdicVector>> = BTreeMap::new();
    let mut unassigned = Vec::new();
    for ((z, _), l) in table.iter().zip(&level) {
        match l {
            Some(j) => classes.entry(*j).or_default().push(z.clone()),
            None => unassigned.push(z.clone()),
        }
    }

    // x, z assigned at levels <= j and |x - z| <= p^{-max(j+1, k_dom)}
    let checks = (0..table.len())
        .into_par_iter()
        .map(|a| -> Result<(u64, Vec<(usize, usize)>)> {
            let mut n = 0;
            let mut bad = Vec::new();
            let Some(ja) = level[a] else { return Ok((0, bad)) };
            for b in a + 1..table.len() {
                let Some(jb) = level[b] else { continue };
                let j = ja.max(jb);
                let d = table[a].0.dist(&table[b].0)?;
                if d > Magnitude::from_valuation(p, Some((j + 1).max(k_dom))) {
                    continue;
                }
                n += 1;
                if table[a].1.dist(&table[b].1)? > bound(p, j, d, r) {
                    bad.push((a, b));
                }
            }
            Ok((n, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs_checked = checks.iter().map(|c| c.0).sum();
    let violations = checks
        .iter()
        .flat_map(|c| c.1.iter().map(|&(a, b)| (table[a].0.clone(), table[b].0.clone())))
        .collect();

    Ok(EjDecomposition {
        classes: classes.into_iter().map(|(j, points)| EjClass { j, points }).collect(),
        unassigned,
        pairs_checked,
        violations,
    })
}
