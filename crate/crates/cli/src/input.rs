//! Text inputs: points, sets, rationals and sample files.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_core::magnitude::{parse_exponent, parse_rational, Exponent};
use padic_core::padic::is_prime;
use padic_core::{Ball, Error, PAdicNumber, PAdicVector, Result};
use serde::Deserialize;

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

pub fn check_prime(p: u32) -> Result<u32> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// A coordinate: a p-adic literal `d0,d1,...eV@p` or an exact rational `a` / `a/b`.
pub fn scalar(p: u32, s: &str, prec: u32) -> Result<PAdicNumber> {
    let t = s.trim();
    if t.contains('@') {
        let x: PAdicNumber = t.parse()?;
        if x.prime() != p {
            return Err(Error::PrimeMismatch(p, x.prime()));
        }
        return Ok(x);
    }
    let r = parse_rational(t).ok_or_else(|| parse_err(0, format!("expected a rational or p-adic literal, got {t:?}")))?;
    PAdicNumber::from_ratio(p, &r, prec)
}

/// Coordinates separated by `|`, e.g. `1|2` or `3,1e0@5|0`.
pub fn point(p: u32, s: &str, prec: u32) -> Result<PAdicVector> {
    let mut coords = Vec::new();
    let mut offset = 0;
    for part in s.split('|') {
        coords.push(scalar(p, part, prec).map_err(|e| shift(e, offset))?);
        offset += part.len() + 1;
    }
    PAdicVector::new(coords)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse { offset: offset + by, message },
        other => other,
    }
}

pub fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| parse_err(0, format!("invalid rational {s:?}")))
}

pub fn exponent(s: &str) -> Result<Exponent> {
    parse_exponent(s).ok_or_else(|| parse_err(0, format!("invalid exponent {s:?}")))
}

/// `p^-k` for `--eps` style arguments given as an exponent `k` or a rational.
pub fn tolerance(p: u32, s: &str) -> Result<BigRational> {
    match s.strip_prefix("p^") {
        Some(k) => {
            let k: i64 = k.parse().map_err(|_| parse_err(2, "invalid power"))?;
            Ok(padic_core::magnitude::pow_rational(p, k))
        }
        None => rational(s),
    }
}

/// Comma-separated integers or an inclusive range `a..b`.
pub fn int_list(s: &str) -> Result<Vec<i64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| parse_err(0, "invalid range start"))?;
        let b: i64 = b.trim().parse().map_err(|_| parse_err(s.len() - b.len(), "invalid range end"))?;
        return Ok((a..=b).collect());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        out.push(part.trim().parse().map_err(|_| parse_err(offset, "invalid integer"))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// `ball(c;k)` with `c` a point.
pub fn ball(p: u32, s: &str, prec: u32) -> Result<Ball> {
    let t = s.trim();
    let inner = t
        .strip_prefix("ball(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(0, format!("expected ball(center;k), got {t:?}")))?;
    let (c, k) = inner.rsplit_once(';').ok_or_else(|| parse_err(5, "missing ';k' in ball"))?;
    let k: i64 = k.trim().parse().map_err(|_| parse_err(5 + c.len() + 1, "invalid radius exponent"))?;
    Ok(Ball::new(point(p, c, prec).map_err(|e| shift(e, 5))?, k))
}

/// A measurable set for the density verbs.
pub enum SetSpec {
    Balls(Vec<Ball>),
    /// `sphere(l)`: `{|x| = p^-l}`.
    Sphere(i64),
    Sparse,
}

impl SetSpec {
    pub fn contains(&self, x: &PAdicVector) -> Result<bool> {
        match self {
            SetSpec::Balls(bs) => {
                for b in bs {
                    if b.contains(x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SetSpec::Sphere(l) => Ok(x.valuation() == Some(*l)),
            SetSpec::Sparse => padic_core::haar::sparse_set_indicator(x),
        }
    }
}

/// `sparse`, `sphere(l)` or a `+`-separated union of balls.
pub fn set(p: u32, s: &str, prec: u32) -> Result<SetSpec> {
    let t = s.trim();
    if t == "sparse" {
        return Ok(SetSpec::Sparse);
    }
    if let Some(l) = t.strip_prefix("sphere(").and_then(|r| r.strip_suffix(')')) {
        return Ok(SetSpec::Sphere(l.trim().parse().map_err(|_| parse_err(7, "invalid sphere index"))?));
    }
    let mut balls = Vec::new();
    let mut offset = 0;
    for part in t.split('+') {
        balls.push(ball(p, part, prec).map_err(|e| shift(e, offset))?);
        offset += part.len() + 1;
    }
    Ok(SetSpec::Balls(balls))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { offset: byte_offset(text, e.line(), e.column()), message: e.to_string() })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum::<usize>() + column.saturating_sub(1)
}

/// Sample file: `{"p": 5, "C": "25", "r": "1/2", "points": [["site", "value"], ...]}`
/// with points in the `|`-separated coordinate syntax.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    pub p: u32,
    #[serde(rename = "C")]
    pub c: String,
    pub r: String,
    pub points: Vec<(String, String)>,
}

impl SampleFile {
    pub fn build(&self, prec: u32) -> Result<padic_core::lipschitz::SampleSet> {
        let p = check_prime(self.p)?;
        let points = self
            .points
            .iter()
            .map(|(s, v)| Ok((point(p, s, prec)?, point(p, v, prec)?)))
            .collect::<Result<Vec<_>>>()?;
        padic_core::lipschitz::SampleSet::new(points, rational(&self.c)?, exponent(&self.r)?)
    }
}

/// Signed integer view of a value with nonnegative valuation, reduced
/// modulo the known window into `(-p^N/2, p^N/2]`.
pub fn integer_view(x: &PAdicNumber) -> Option<String> {
    if x.is_zero() {
        return Some("0".into());
    }
    let val = x.valuation()?;
    if val < 0 {
        return None;
    }
    let p = BigInt::from(x.prime());
    let mut n = BigInt::from(0);
    for d in x.digits().iter().rev() {
        n = n * &p + BigInt::from(*d);
    }
    n *= p.pow(val as u32);
    let modulus = p.pow((val + x.prec() as i64) as u32);
    if n.clone() * 2 > modulus {
        n -= modulus;
    }
    Some(n.to_string())
}
