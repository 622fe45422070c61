use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::GridFunction;
use crate::magnitude::{Exponent, Magnitude};
use crate::padic::PAdicVector;

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    /// `max |f(x) - f(y)| / |x - y|^r` over distinct grid points.
    pub constant: Magnitude,
    pub witness: Option<(PAdicVector, PAdicVector)>,
}

/// Smallest `C` with `|f(x) - f(y)| <= C |x - y|^r` on the grid, computed
/// exactly as a power of `p` with rational exponent.
pub fn holder_scan(f: &GridFunction, r: Exponent) -> Result<HolderReport> {
    if r <= Exponent::from_integer(0) || r > Exponent::from_integer(1) {
        return Err(Error::Precondition(format!("exponent {r} outside (0, 1]")));
    }
    let t = f.table();
    let p = f.domain().prime();
    let best = (0..t.len())
        .into_par_iter()
        .map(|i| -> Result<Option<(Magnitude, usize, usize)>> {
            let mut best: Option<(Magnitude, usize, usize)> = None;
            for j in i + 1..t.len() {
                let num = t[i].1.dist(&t[j].1)?;
                let den = t[i].0.dist(&t[j].0)?.powr(r);
                let q = num.div(&den).expect("distinct grid points");
                if best.as_ref().map_or(true, |b| q > b.0) {
                    best = Some((q, i, j));
                }
            }
            Ok(best)
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) { y } else { x }),
                    (x, None) => x,
                    (None, y) => y,
                })
            },
        )?;
    Ok(match best {
        Some((c, i, j)) => HolderReport { constant: c, witness: Some((t[i].0.clone(), t[j].0.clone())) },
        None => HolderReport { constant: Magnitude::zero(p), witness: None },
    })
}
