//! Difference quotients `Φ̄ⁿf(x; v_1..v_n; t_1..t_n)` and their limits at
//! vanishing increments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::magnitude::Magnitude;
use crate::padic::{PAdicNumber, PAdicVector, DEFAULT_PREC};

/// The tuple `(x; v_1..v_n; t_1..t_n)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientPoint {
    pub x: PAdicVector,
    pub vs: Vec<PAdicVector>,
    pub ts: Vec<PAdicNumber>,
}

impl QuotientPoint {
    pub fn new(x: PAdicVector, vs: Vec<PAdicVector>, ts: Vec<PAdicNumber>) -> Result<Self> {
        if vs.len() != ts.len() {
            return Err(Error::DimensionMismatch { expected: vs.len(), got: ts.len() });
        }
        if let Some(v) = vs.iter().find(|v| v.dim() != x.dim()) {
            return Err(Error::DimensionMismatch { expected: x.dim(), got: v.dim() });
        }
        Ok(QuotientPoint { x, vs, ts })
    }

    pub fn order(&self) -> usize {
        self.vs.len()
    }
}

/// `[f(x + v t) - f(x)] / t`.
pub fn phi1<F: PointFunction + ?Sized>(f: &F, x: &PAdicVector, v: &PAdicVector, t: &PAdicNumber) -> Result<PAdicVector> {
    if t.is_zero() {
        return Err(Error::ZeroIncrement);
    }
    let moved = x.try_add(&v.scale(t)?)?;
    let diff = f.eval(&moved)?.try_sub(&f.eval(x)?)?;
    divide(&diff, t)
}

fn divide(v: &PAdicVector, t: &PAdicNumber) -> Result<PAdicVector> {
    PAdicVector::new(v.coords().iter().map(|c| c.try_div(t)).collect::<Result<_>>()?)
}

/// Iterated base-point quotient without the `1/n!` normalization.
fn raw_quotient<F: PointFunction + ?Sized>(f: &F, x: &PAdicVector, vs: &[PAdicVector], ts: &[PAdicNumber]) -> Result<PAdicVector> {
    match vs.len() {
        0 => f.eval(x),
        k => {
            let (v, t) = (&vs[k - 1], &ts[k - 1]);
            let moved = x.try_add(&v.scale(t)?)?;
            let hi = raw_quotient(f, &moved, &vs[..k - 1], &ts[..k - 1])?;
            let lo = raw_quotient(f, x, &vs[..k - 1], &ts[..k - 1])?;
            divide(&hi.try_sub(&lo)?, t)
        }
    }
}

/// `Φ̄ⁿf` at a quotient point: the `n`-fold iterated quotient in the base
/// point, scaled by `1/n!` so that at vanishing increments it is the
/// `n`-linear Taylor coefficient (for `f(x) = x²`, `Φ̄²f = v_1 v_2`).
pub fn phin<F: PointFunction + ?Sized>(f: &F, q: &QuotientPoint) -> Result<PAdicVector> {
    if q.ts.iter().any(|t| t.is_zero()) {
        return Err(Error::ZeroIncrement);
    }
    let raw = raw_quotient(f, &q.x, &q.vs, &q.ts)?;
    let n = q.order() as i64;
    if n <= 1 {
        return Ok(raw);
    }
    let fact = PAdicNumber::from_int(f.prime(), (1..=n).product(), raw_prec(&raw))?;
    divide(&raw, &fact)
}

fn raw_prec(v: &PAdicVector) -> u32 {
    v.coords().iter().map(|c| c.prec()).filter(|&n| n > 0).max().unwrap_or(DEFAULT_PREC)
}

/// Increment schedule for limits at `t = 0`: `t_i = p^j` for `j` in
/// `j_start..=j_end`, stopping once `stable` consecutive values agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LimitSchedule {
    pub j_start: i64,
    pub j_end: i64,
    pub stable: usize,
    /// Agreement is checked modulo `p^min(cap, known precision)`.
    pub cap: i64,
}

impl Default for LimitSchedule {
    fn default() -> Self {
        LimitSchedule { j_start: 1, j_end: 2 * DEFAULT_PREC as i64 + 3, stable: 3, cap: DEFAULT_PREC as i64 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    /// The stabilized value, reduced to the agreed window.
    pub value: PAdicVector,
    /// Values are known to agree modulo `p^agreed_abs_prec`.
    pub agreed_abs_prec: i64,
    /// Schedule exponent `j` at which the stable run ended.
    pub j_final: i64,
    pub trace: Vec<(i64, PAdicVector)>,
}

fn abs_window(v: &PAdicVector) -> Option<i64> {
    v.coords().iter().filter_map(|c| c.abs_prec()).min()
}

fn lowest_digit(v: &PAdicVector) -> i64 {
    v.coords().iter().filter_map(|c| c.valuation()).min().unwrap_or(0).min(0)
}

/// Common agreement window of a run of values, if informative.
fn agreement(run: &[(i64, PAdicVector)], cap: i64) -> Option<i64> {
    let w = run.iter().filter_map(|(_, v)| abs_window(v)).min().unwrap_or(cap).min(cap);
    let lo = run.iter().map(|(_, v)| lowest_digit(v)).min().unwrap_or(0);
    if w <= lo {
        return None;
    }
    let last = &run[run.len() - 1].1;
    let all = run.iter().all(|(_, v)| {
        v.try_sub(last).map(|d| d.coords().iter().all(|c| c.valuation_floor() >= w)).unwrap_or(false)
    });
    all.then_some(w)
}

/// `lim_{t -> 0} Φ̄ⁿf(x; v_1..v_n; t, .., t)` along `t = p^j`.
pub fn phin_limit<F: PointFunction + ?Sized>(
    f: &F,
    x: &PAdicVector,
    vs: &[PAdicVector],
    schedule: &LimitSchedule,
) -> Result<LimitReport> {
    let p = f.prime();
    let stable = schedule.stable.max(1);
    let mut trace: Vec<(i64, PAdicVector)> = Vec::new();
    for j in schedule.j_start..=schedule.j_end {
        let t = PAdicNumber::p_pow(p, j, DEFAULT_PREC)?;
        let q = QuotientPoint::new(x.clone(), vs.to_vec(), vec![t; vs.len()])?;
        let value = match phin(f, &q) {
            Ok(v) => v,
            Err(Error::DivisionByZero) => break,
            Err(e) => return Err(e),
        };
        trace.push((j, value));
        if trace.len() >= stable {
            let run = &trace[trace.len() - stable..];
            if let Some(w) = agreement(run, schedule.cap) {
                let last = &run[stable - 1].1;
                let value = PAdicVector::new(last.coords().iter().map(|c| c.reduce_abs(w)).collect())?;
                return Ok(LimitReport { value, agreed_abs_prec: w, j_final: j, trace });
            }
            let lo = lowest_digit(&trace[trace.len() - 1].1);
            if abs_window(&trace[trace.len() - 1].1).is_some_and(|w| w <= lo) {
                break;
            }
        }
    }
    Err(Error::NonConvergent(format!(
        "no {stable} consecutive agreeing values for t = {p}^j, j in {}..={}",
        schedule.j_start, schedule.j_end
    )))
}

/// An `n × m` matrix over Q_p acting on column vectors.
#[derive(Clone, Debug, Serialize)]
pub struct LinearMap {
    pub rows: Vec<PAdicVector>,
}

impl LinearMap {
    pub fn from_columns(cols: &[PAdicVector]) -> Result<Self> {
        let n = cols.first().ok_or_else(|| Error::Invalid("no columns".into()))?.dim();
        let rows = (0..n)
            .map(|i| PAdicVector::new(cols.iter().map(|c| *c.get(i)).collect()))
            .collect::<Result<_>>()?;
        Ok(LinearMap { rows })
    }

    pub fn apply(&self, v: &PAdicVector) -> Result<PAdicVector> {
        let out = self
            .rows
            .iter()
            .map(|r| {
                if r.dim() != v.dim() {
                    return Err(Error::DimensionMismatch { expected: r.dim(), got: v.dim() });
                }
                r.coords().iter().zip(v.coords()).try_fold(PAdicNumber::zero(v.prime()), |acc, (a, b)| acc.try_add(&a.try_mul(b)?))
            })
            .collect::<Result<_>>()?;
        PAdicVector::new(out)
    }

    /// Sup-norm operator norm: the largest entry norm.
    pub fn op_norm(&self) -> Magnitude {
        self.rows.iter().map(|r| r.magnitude()).max().expect("nonempty map")
    }
}
