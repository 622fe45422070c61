//! The van der Put linear ordering: compare digit expansions from the
//! lowest index upward.

use std::cmp::Ordering;

use super::number::PAdicNumber;
use super::vector::PAdicVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VdpOrder {
    pub ordering: Ordering,
    /// Set when the values agree on every known digit but could still
    /// differ beyond the shared precision window.
    pub precision_limited: bool,
}

pub fn vdp_compare(x: &PAdicNumber, y: &PAdicNumber) -> Result<VdpOrder> {
    if x.prime() != y.prime() {
        return Err(Error::PrimeMismatch(x.prime(), y.prime()));
    }
    let hi = match (x.abs_prec(), y.abs_prec()) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.min(b)),
    };
    let lo = match (x.valuation(), y.valuation()) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.min(b)),
    };
    if let Some(lo) = lo {
        // nonzero digits of an exactly known value stop after its window
        let end = hi.unwrap_or_else(|| x.abs_prec().max(y.abs_prec()).unwrap_or(lo));
        for n in lo..end {
            let (a, b) = (x.digit_at(n).unwrap_or(0), y.digit_at(n).unwrap_or(0));
            if a != b {
                return Ok(VdpOrder { ordering: a.cmp(&b), precision_limited: false });
            }
        }
    }
    Ok(VdpOrder { ordering: Ordering::Equal, precision_limited: hi.is_some() })
}

/// Lexicographic extension to vectors, coordinate 0 first.
pub fn vdp_compare_vec(x: &PAdicVector, y: &PAdicVector) -> Result<VdpOrder> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    let mut limited = false;
    for (a, b) in x.coords().iter().zip(y.coords()) {
        let o = vdp_compare(a, b)?;
        if o.ordering != Ordering::Equal {
            return Ok(o);
        }
        limited |= o.precision_limited;
    }
    Ok(VdpOrder { ordering: Ordering::Equal, precision_limited: limited })
}

impl VdpOrder {
    pub fn label(&self) -> &'static str {
        match self.ordering {
            Ordering::Less => "Less",
            Ordering::Equal => "Equal",
            Ordering::Greater => "Greater",
        }
    }
}

/// Total-order comparator for sorting (prime mismatch panics).
pub fn vdp_cmp(x: &PAdicNumber, y: &PAdicNumber) -> Ordering {
    vdp_compare(x, y).expect("same prime").ordering
}
