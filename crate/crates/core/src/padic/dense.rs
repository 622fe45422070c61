use super::number::{max_prec, PAdicNumber, DEFAULT_PREC};
use crate::error::{Error, Result};

/// Breadth-first enumeration of `p^{val_floor} * Z_p`: element `n` is
/// `p^{val_floor} * n`, so the first `p^d` elements exhaust every residue
/// modulo `p^{val_floor + d}`.
pub fn vdp_dense_sequence(p: u32, val_floor: i64, count: usize) -> Result<Vec<PAdicNumber>> {
    if count == 0 {
        return Err(Error::Invalid("count must be at least 1".into()));
    }
    let prec = DEFAULT_PREC.max(completed_depth(p, count) + 1).min(max_prec(p));
    let scale = PAdicNumber::p_pow(p, val_floor, prec)?;
    (0..count as i64)
        .map(|n| Ok(PAdicNumber::from_int(p, n, prec)? * scale))
        .collect()
}

/// Number of elements needed to exhaust digit depth `depth`.
pub fn depth_count(p: u32, depth: u32) -> u128 {
    (p as u128).pow(depth)
}

/// The deepest digit level fully covered by a prefix of length `count`.
pub fn completed_depth(p: u32, count: usize) -> u32 {
    let mut d = 0;
    while depth_count(p, d + 1) <= count as u128 {
        d += 1;
    }
    d
}
