use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::number::{PAdicNumber, DEFAULT_PREC};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

/// Hashable identity of a vector's canonical representative.
pub type CosetKey = Vec<(i64, u64)>;

/// A point of Q_p^m under the sup-norm.
#[derive(Clone, Debug, PartialEq)]
pub struct PAdicVector {
    p: u32,
    coords: Vec<PAdicNumber>,
}

impl PAdicVector {
    pub fn new(coords: Vec<PAdicNumber>) -> Result<Self> {
        let p = coords
            .first()
            .ok_or_else(|| Error::Invalid("empty coordinate list".into()))?
            .prime();
        if let Some(c) = coords.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(PAdicVector { p, coords })
    }

    pub fn from_ints(p: u32, xs: &[i64]) -> Result<Self> {
        let coords = xs
            .iter()
            .map(|&x| PAdicNumber::from_int(p, x, DEFAULT_PREC))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn scalar(x: PAdicNumber) -> Self {
        PAdicVector { p: x.prime(), coords: vec![x] }
    }

    pub fn zeros(p: u32, m: usize) -> Self {
        PAdicVector { p, coords: vec![PAdicNumber::zero(p); m] }
    }

    /// The standard basis vector `e_i` of Q_p^m.
    pub fn basis(p: u32, m: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, m);
        v.coords[i] = PAdicNumber::p_pow(p, 0, DEFAULT_PREC).expect("default precision fits");
        v
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[PAdicNumber] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &PAdicNumber {
        &self.coords[i]
    }

    pub fn into_coords(self) -> Vec<PAdicNumber> {
        self.coords
    }

    /// Minimum coordinate valuation; `None` when every coordinate is zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coords.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn valuation_floor(&self) -> i64 {
        self.coords.iter().map(|c| c.valuation_floor()).min().unwrap_or(i64::MAX)
    }

    pub fn magnitude(&self) -> Magnitude {
        Magnitude::from_valuation(self.p, self.valuation())
    }

    /// `max_j |x_j|` as an exact rational.
    pub fn sup_norm(&self) -> BigRational {
        self.magnitude().to_rational().expect("integral exponent")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| *a + *b).collect();
        Ok(PAdicVector { p: self.p, coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| *a - *b).collect();
        Ok(PAdicVector { p: self.p, coords })
    }

    pub fn scale(&self, t: &PAdicNumber) -> Result<Self> {
        let coords = self.coords.iter().map(|c| c.try_mul(t)).collect::<Result<_>>()?;
        Ok(PAdicVector { p: self.p, coords })
    }

    /// `|self - other|` as a magnitude.
    pub fn dist(&self, other: &Self) -> Result<Magnitude> {
        Ok(self.try_sub(other)?.magnitude())
    }

    /// Coordinate-wise truncation below digit index `k`.
    pub fn truncate(&self, k: i64, prec: u32) -> Result<Self> {
        let coords = self.coords.iter().map(|c| c.truncate(k, prec)).collect::<Result<_>>()?;
        Ok(PAdicVector { p: self.p, coords })
    }

    pub fn key(&self) -> CosetKey {
        self.coords.iter().map(|c| c.key()).collect()
    }

    pub fn identical(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.identical(b))
    }

    /// Replaces coordinate `i`.
    pub fn with_coord(&self, i: usize, x: PAdicNumber) -> Self {
        let mut v = self.clone();
        v.coords[i] = x;
        v
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PAdicVector { p: self.p, coords })
    }
}

impl Add for &PAdicVector {
    type Output = PAdicVector;
    fn add(self, rhs: Self) -> PAdicVector {
        self.try_add(rhs).expect("incompatible vectors")
    }
}

impl Sub for &PAdicVector {
    type Output = PAdicVector;
    fn sub(self, rhs: Self) -> PAdicVector {
        self.try_sub(rhs).expect("incompatible vectors")
    }
}

impl fmt::Display for PAdicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

impl FromStr for PAdicVector {
    type Err = Error;

    /// Accepts a JSON array of literals or `;`-separated literals, with
    /// optional surrounding brackets.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') && t.contains('"') {
            let lits: Vec<String> = serde_json::from_str(t)
                .map_err(|e| Error::Parse { offset: e.column().saturating_sub(1), message: e.to_string() })?;
            return Self::new(lits.iter().map(|l| l.parse()).collect::<Result<_>>()?);
        }
        let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(t);
        let mut coords = Vec::new();
        let mut offset = 0;
        for part in inner.split(';') {
            let x: PAdicNumber = part.parse().map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse { offset: offset + o, message },
                other => other,
            })?;
            coords.push(x);
            offset += part.len() + 1;
        }
        Self::new(coords)
    }
}

impl Serialize for PAdicVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lits: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        lits.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<String>::deserialize(d)?;
        let coords = lits
            .iter()
            .map(|l| l.parse())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Self::new(coords).map_err(serde::de::Error::custom)
    }
}

/// How two balls sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallRelation {
    Equal,
    Disjoint,
    /// The first ball strictly contains the second.
    Contains,
    /// The first ball is strictly contained in the second.
    ContainedIn,
}

/// Closed ball `{y : |y - center| <= p^{-rad_exp}}` in Q_p^m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: PAdicVector,
    pub rad_exp: i64,
}

impl Ball {
    pub fn new(center: PAdicVector, rad_exp: i64) -> Self {
        Ball { center, rad_exp }
    }

    /// `B(0, p^{-k})` in Q_p^m.
    pub fn origin(p: u32, m: usize, k: i64) -> Self {
        Ball { center: PAdicVector::zeros(p, m), rad_exp: k }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn prime(&self) -> u32 {
        self.center.prime()
    }

    pub fn radius(&self) -> Magnitude {
        Magnitude::from_valuation(self.prime(), Some(self.rad_exp))
    }

    pub fn contains(&self, y: &PAdicVector) -> Result<bool> {
        Ok(y.try_sub(&self.center)?.valuation_floor() >= self.rad_exp)
    }

    pub fn relation(&self, other: &Ball) -> Result<BallRelation> {
        let gap = self.center.try_sub(&other.center)?.valuation_floor();
        let k = self.rad_exp.min(other.rad_exp);
        Ok(if gap < k {
            BallRelation::Disjoint
        } else if self.rad_exp == other.rad_exp {
            BallRelation::Equal
        } else if self.rad_exp < other.rad_exp {
            BallRelation::Contains
        } else {
            BallRelation::ContainedIn
        })
    }

    /// The same ball with its center truncated below digit `rad_exp`.
    pub fn canonical(&self) -> Result<Ball> {
        Ok(Ball { center: self.center.truncate(self.rad_exp, DEFAULT_PREC)?, rad_exp: self.rad_exp })
    }
}
