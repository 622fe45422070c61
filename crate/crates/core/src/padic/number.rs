//! Elements of Q_p with an explicit window of known digits.
//!
//! A nonzero value is `p^val * unit` where `unit` is an integer in
//! `[1, p^prec)` prime to `p`, known modulo `p^prec`. Zero is a sentinel with
//! valuation +inf; it is either exact or "zero modulo `p^abs_prec`" when it
//! arose from cancellation of inexact operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

/// Default number of known digits for freshly constructed values.
pub const DEFAULT_PREC: u32 = 12;

const MODULUS_LIMIT: u128 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// `abs_prec == None` is the exact zero.
    Zero { abs_prec: Option<i64> },
    Unit { val: i64, unit: u64, prec: u32 },
}

#[derive(Clone, Copy, Debug)]
pub struct PAdicNumber {
    p: u32,
    repr: Repr,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Largest digit count whose modulus fits the arithmetic kernel.
pub fn max_prec(p: u32) -> u32 {
    let mut n = 0;
    let mut m: u128 = 1;
    while m * p as u128 <= MODULUS_LIMIT {
        m *= p as u128;
        n += 1;
    }
    n
}

fn modulus(p: u32, prec: u32) -> u64 {
    (p as u64).pow(prec)
}

fn check_prec(p: u32, prec: u32) -> Result<()> {
    let max = max_prec(p);
    if prec == 0 || prec > max {
        return Err(Error::PrecisionTooLarge { p, prec, max });
    }
    Ok(())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// Splits `n > 0` into `(k, n / p^k)` with the quotient prime to `p`.
fn strip(p: u64, mut n: u64) -> (u32, u64) {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (k, n)
}

impl PAdicNumber {
    pub fn zero(p: u32) -> Self {
        PAdicNumber { p, repr: Repr::Zero { abs_prec: None } }
    }

    /// Zero known only modulo `p^abs_prec`.
    pub fn zero_mod(p: u32, abs_prec: i64) -> Self {
        PAdicNumber { p, repr: Repr::Zero { abs_prec: Some(abs_prec) } }
    }

    fn unit_raw(p: u32, val: i64, unit: u64, prec: u32) -> Self {
        debug_assert!(unit % p as u64 != 0 && unit < modulus(p, prec));
        PAdicNumber { p, repr: Repr::Unit { val, unit, prec } }
    }

    /// Builds `p^val * n` from an arbitrary residue `n`, normalizing the
    /// valuation; `n` is known modulo `p^prec`.
    fn from_residue(p: u32, val: i64, n: u64, prec: u32) -> Self {
        let m = modulus(p, prec);
        let n = n % m;
        if n == 0 {
            return Self::zero_mod(p, val + prec as i64);
        }
        let (k, u) = strip(p as u64, n);
        Self::unit_raw(p, val + k as i64, u, prec - k)
    }

    pub fn from_int(p: u32, n: i64, prec: u32) -> Result<Self> {
        Self::from_ratio(p, &BigRational::from_integer(n.into()), prec)
    }

    /// `p^k` exactly (to `prec` digits).
    pub fn p_pow(p: u32, k: i64, prec: u32) -> Result<Self> {
        check_prec(p, prec)?;
        Ok(Self::unit_raw(p, k, 1, prec))
    }

    pub fn from_ratio(p: u32, r: &BigRational, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        check_prec(p, prec)?;
        if r.is_zero() {
            return Ok(Self::zero(p));
        }
        let pb = BigInt::from(p);
        let mut num = r.numer().abs();
        let mut den = r.denom().clone();
        let mut val = 0i64;
        while (&num % &pb).is_zero() {
            num /= &pb;
            val += 1;
        }
        while (&den % &pb).is_zero() {
            den /= &pb;
            val -= 1;
        }
        let m = modulus(p, prec);
        let mb = BigInt::from(m);
        let nm = (num % &mb).to_u64().expect("reduced residue");
        let dm = (den % &mb).to_u64().expect("reduced residue");
        let mut unit = mul_mod(nm, inv_mod(dm, m), m);
        if r.is_negative() {
            unit = m - unit;
        }
        Ok(Self::unit_raw(p, val, unit, prec))
    }

    /// `p^val * (d0 + d1 p + ...)`; leading zero digits shift the valuation.
    pub fn from_digits(p: u32, val: i64, digits: &[u8]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if digits.is_empty() {
            return Err(Error::Invalid("empty digit list".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d as u32 >= p) {
            return Err(Error::Invalid(format!("digit {d} out of range for p = {p}")));
        }
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        if lead == digits.len() {
            return Ok(Self::zero_mod(p, val + digits.len() as i64));
        }
        let rest = &digits[lead..];
        check_prec(p, rest.len() as u32)?;
        let unit = rest.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64);
        Ok(Self::unit_raw(p, val + lead as i64, unit, rest.len() as u32))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs_prec: None })
    }

    /// Valuation; `None` for the zero sentinel.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, .. } => Some(val),
            Repr::Zero { .. } => None,
        }
    }

    /// Lower bound on the valuation: the true valuation for nonzero values,
    /// the known window for inexact zeros, `i64::MAX` for the exact zero.
    pub fn valuation_floor(&self) -> i64 {
        match self.repr {
            Repr::Unit { val, .. } => val,
            Repr::Zero { abs_prec } => abs_prec.unwrap_or(i64::MAX),
        }
    }

    /// Number of known digits (relative precision); 0 for zeros.
    pub fn prec(&self) -> u32 {
        match self.repr {
            Repr::Unit { prec, .. } => prec,
            Repr::Zero { .. } => 0,
        }
    }

    /// Value known modulo `p^abs_prec`; `None` means exact.
    pub fn abs_prec(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, prec, .. } => Some(val + prec as i64),
            Repr::Zero { abs_prec } => abs_prec,
        }
    }

    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    /// Known digits `d0..d_{N-1}` of the unit (empty for zero).
    pub fn digits(&self) -> Vec<u8> {
        match self.repr {
            Repr::Unit { mut unit, prec, .. } => (0..prec)
                .map(|_| {
                    let d = (unit % self.p as u64) as u8;
                    unit /= self.p as u64;
                    d
                })
                .collect(),
            Repr::Zero { .. } => Vec::new(),
        }
    }

    /// The expansion coefficient `a_n`, or `None` beyond the known window.
    pub fn digit_at(&self, n: i64) -> Option<u8> {
        match self.repr {
            Repr::Zero { abs_prec } => match abs_prec {
                Some(a) if n >= a => None,
                _ => Some(0),
            },
            Repr::Unit { val, unit, prec } => {
                if n < val {
                    Some(0)
                } else if n >= val + prec as i64 {
                    None
                } else {
                    let shift = (n - val) as u32;
                    Some(((unit / (self.p as u64).pow(shift)) % self.p as u64) as u8)
                }
            }
        }
    }

    /// `|x| = p^{-val}` as an exact rational (0 for zero).
    pub fn norm(&self) -> BigRational {
        self.magnitude().to_rational().expect("integral exponent")
    }

    pub fn magnitude(&self) -> Magnitude {
        Magnitude::from_valuation(self.p, self.valuation())
    }

    /// Sum of the digits with index `< k`, as an exact value carried at
    /// `prec` digits. Fails if digits below `k` are not all known.
    pub fn truncate(&self, k: i64, prec: u32) -> Result<Self> {
        match self.repr {
            Repr::Zero { abs_prec } => match abs_prec {
                Some(a) if a < k => Err(Error::InsufficientPrecision { needed: k, known: a }),
                _ => Ok(Self::zero(self.p)),
            },
            Repr::Unit { val, unit, prec: own } => {
                let known = val + own as i64;
                if known < k {
                    return Err(Error::InsufficientPrecision { needed: k, known });
                }
                if val >= k {
                    return Ok(Self::zero(self.p));
                }
                let keep = (k - val) as u32;
                let prec = prec.max(keep);
                check_prec(self.p, prec)?;
                let t = unit % modulus(self.p, keep);
                Ok(Self::unit_raw(self.p, val, t, prec))
            }
        }
    }

    /// Re-expresses the value with at most `prec` known digits.
    pub fn reduce_prec(&self, prec: u32) -> Self {
        match self.repr {
            Repr::Unit { val, unit, prec: own } if own > prec && prec > 0 => {
                Self::unit_raw(self.p, val, unit % modulus(self.p, prec), prec)
            }
            _ => *self,
        }
    }

    /// Re-expresses the value modulo `p^abs`, possibly becoming an inexact zero.
    pub fn reduce_abs(&self, abs: i64) -> Self {
        match self.repr {
            Repr::Unit { val, .. } if val >= abs => Self::zero_mod(self.p, abs),
            Repr::Unit { val, prec, .. } if val + prec as i64 > abs => {
                self.reduce_prec((abs - val) as u32)
            }
            Repr::Zero { abs_prec } if abs_prec.map_or(true, |a| a > abs) => {
                Self::zero_mod(self.p, abs)
            }
            _ => *self,
        }
    }

    /// Treats the known digits as exact and pads with zero digits up to
    /// `prec`. Only sound for values that are exactly representable.
    pub fn assume_exact(&self, prec: u32) -> Result<Self> {
        check_prec(self.p, prec)?;
        Ok(match self.repr {
            Repr::Unit { val, unit, prec: own } if own < prec => {
                Self::unit_raw(self.p, val, unit, prec)
            }
            Repr::Zero { .. } => Self::zero(self.p),
            _ => *self,
        })
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_signed(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_signed(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let (vb, ub, nb) = match other.repr {
            Repr::Zero { .. } => return Err(Error::DivisionByZero),
            Repr::Unit { val, unit, prec } => (val, unit, prec),
        };
        Ok(match self.repr {
            Repr::Zero { abs_prec: None } => *self,
            Repr::Zero { abs_prec: Some(a) } => Self::zero_mod(self.p, a - vb),
            Repr::Unit { val, unit, prec } => {
                let n = prec.min(nb);
                let m = modulus(self.p, n);
                let u = mul_mod(unit % m, inv_mod(ub % m, m), m);
                Self::unit_raw(self.p, val - vb, u, n)
            }
        })
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        let p = self.p;
        let rhs = if negate { other.neg_impl() } else { *other };
        let abs = match (self.abs_prec(), rhs.abs_prec()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match (self.repr, rhs.repr) {
            (Repr::Zero { abs_prec: None }, _) => rhs,
            (_, Repr::Zero { abs_prec: None }) => *self,
            (Repr::Zero { .. }, Repr::Zero { .. }) => Self::zero_mod(p, abs.unwrap()),
            (Repr::Zero { .. }, Repr::Unit { .. }) => rhs.reduce_abs(abs.unwrap()),
            (Repr::Unit { .. }, Repr::Zero { .. }) => self.reduce_abs(abs.unwrap()),
            (
                Repr::Unit { val: va, unit: ua, .. },
                Repr::Unit { val: vb, unit: ub, .. },
            ) => {
                let abs = abs.unwrap();
                let vmin = va.min(vb);
                if vmin >= abs {
                    return Self::zero_mod(p, abs);
                }
                let w = (abs - vmin) as u32;
                let m = modulus(p, w);
                let lift = |u: u64, v: i64| -> u64 {
                    let shift = (v - vmin) as u32;
                    if shift >= w {
                        0
                    } else {
                        let mm = modulus(p, w - shift);
                        (u % mm) * (p as u64).pow(shift)
                    }
                };
                let s = (lift(ua, va) + lift(ub, vb)) % m;
                Self::from_residue(p, vmin, s, w)
            }
        }
    }

    fn neg_impl(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => *self,
            Repr::Unit { val, unit, prec } => {
                Self::unit_raw(self.p, val, modulus(self.p, prec) - unit, prec)
            }
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let p = self.p;
        match (self.repr, other.repr) {
            (Repr::Zero { abs_prec: None }, _) | (_, Repr::Zero { abs_prec: None }) => {
                Self::zero(p)
            }
            (Repr::Zero { abs_prec: Some(a) }, _) => Self::zero_mod(p, a + other.valuation_floor()),
            (_, Repr::Zero { abs_prec: Some(b) }) => Self::zero_mod(p, b + self.valuation_floor()),
            (
                Repr::Unit { val: va, unit: ua, prec: na },
                Repr::Unit { val: vb, unit: ub, prec: nb },
            ) => {
                let n = na.min(nb);
                let m = modulus(p, n);
                Self::unit_raw(p, va + vb, mul_mod(ua % m, ub % m, m), n)
            }
        }
    }

    /// Natural-number power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = match self.repr {
            Repr::Unit { prec, .. } => Self::unit_raw(self.p, 0, 1, prec),
            Repr::Zero { .. } => {
                if e == 0 {
                    return Self::unit_raw(self.p, 0, 1, DEFAULT_PREC.min(max_prec(self.p)));
                }
                Self::unit_raw(self.p, 0, 1, 1)
            }
        };
        for _ in 0..e {
            acc = acc.mul_impl(self);
        }
        acc
    }

    /// Exact rational value of the known digits (the canonical representative).
    pub fn to_rational(&self) -> BigRational {
        match self.repr {
            Repr::Zero { .. } => BigRational::zero(),
            Repr::Unit { val, unit, .. } => {
                BigRational::from_integer(unit.into()) * crate::magnitude::pow_rational(self.p, val)
            }
        }
    }

    /// Residue-class equality at the shared precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.p == other.p && self.add_signed(other, true).is_zero()
    }

    /// Structural identity (same digits, same window).
    pub fn identical(&self, other: &Self) -> bool {
        self.p == other.p && self.repr == other.repr
    }

    /// Hashable identity of the canonical representative.
    pub fn key(&self) -> (i64, u64) {
        match self.repr {
            Repr::Zero { .. } => (i64::MAX, 0),
            Repr::Unit { val, unit, .. } => (val, unit),
        }
    }

    pub fn to_literal(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for PAdicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl Add for PAdicNumber {
    type Output = PAdicNumber;
    /// Panics on prime mismatch; use [`PAdicNumber::try_add`] for checked use.
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("prime mismatch")
    }
}

impl Sub for PAdicNumber {
    type Output = PAdicNumber;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("prime mismatch")
    }
}

impl Mul for PAdicNumber {
    type Output = PAdicNumber;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("prime mismatch")
    }
}

impl Neg for PAdicNumber {
    type Output = PAdicNumber;
    fn neg(self) -> Self {
        self.neg_impl()
    }
}

impl fmt::Display for PAdicNumber {
    /// Literal form `d0,d1,...,dK e V @ p` (without spaces); `0@p` is the
    /// exact zero and `0eA@p` a zero known modulo `p^{A+1}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs_prec: None } => write!(f, "0@{}", self.p),
            Repr::Zero { abs_prec: Some(a) } => write!(f, "0e{}@{}", a - 1, self.p),
            Repr::Unit { val, .. } => {
                let ds: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
                write!(f, "{}e{}@{}", ds.join(","), val, self.p)
            }
        }
    }
}

impl FromStr for PAdicNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |offset: usize, message: &str| Error::Parse { offset, message: message.into() };
        let s = s.trim();
        let (body, prime) = s.rsplit_once('@').ok_or_else(|| bad(0, "missing '@p'"))?;
        let p: u32 = prime
            .parse()
            .map_err(|_| bad(body.len() + 1, "invalid prime"))?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if body == "0" {
            return Ok(Self::zero(p));
        }
        let (digits, val) = match body.split_once('e') {
            Some((d, v)) => {
                let val: i64 = v.parse().map_err(|_| bad(d.len() + 1, "invalid exponent"))?;
                (d, val)
            }
            None => (body, 0),
        };
        let mut ds = Vec::new();
        let mut offset = 0;
        for part in digits.split(',') {
            let d: u8 = part.parse().map_err(|_| bad(offset, "invalid digit"))?;
            if d as u32 >= p {
                return Err(bad(offset, "digit out of range"));
            }
            ds.push(d);
            offset += part.len() + 1;
        }
        Self::from_digits(p, val, &ds)
    }
}

#[derive(Serialize, Deserialize)]
struct PAdicJson {
    p: u32,
    val: Option<i64>,
    digits: Vec<u8>,
}

impl Serialize for PAdicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self.repr {
            Repr::Zero { abs_prec: None } => PAdicJson { p: self.p, val: None, digits: vec![] },
            Repr::Zero { abs_prec: Some(a) } => {
                PAdicJson { p: self.p, val: Some(a - 1), digits: vec![0] }
            }
            Repr::Unit { val, .. } => PAdicJson { p: self.p, val: Some(val), digits: self.digits() },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PAdicJson::deserialize(d)?;
        match j.val {
            None if j.digits.is_empty() => {
                if !is_prime(j.p) {
                    return Err(serde::de::Error::custom(Error::NotPrime(j.p)));
                }
                Ok(Self::zero(j.p))
            }
            None => Err(serde::de::Error::custom("digits given without valuation")),
            Some(v) => Self::from_digits(j.p, v, &j.digits).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(p: u32, v: i64) -> PAdicNumber {
        PAdicNumber::from_int(p, v, DEFAULT_PREC).unwrap()
    }

    fn q(p: u32, a: i64, b: i64) -> PAdicNumber {
        PAdicNumber::from_ratio(p, &BigRational::new(a.into(), b.into()), DEFAULT_PREC).unwrap()
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let x = n(5, 37);
        assert!((PAdicNumber::zero(5) + x).identical(&x));
        let z = x - x;
        assert!(z.is_zero());
        assert_eq!(z.valuation(), None);
        assert_eq!(z.abs_prec(), Some(12));
    }

    #[test]
    fn division_example() {
        let a = PAdicNumber::from_digits(5, 2, &[3]).unwrap();
        let b = PAdicNumber::from_digits(5, 1, &[1]).unwrap();
        let c = a.try_div(&b).unwrap();
        assert_eq!(c.valuation(), Some(1));
        assert_eq!(c.digits(), vec![3]);
        // the same through the rational oracle: 75 / 5 = 15
        assert_eq!(n(5, 75).try_div(&n(5, 5)).unwrap(), n(5, 15));
    }

    #[test]
    fn division_by_zero_reported() {
        assert_eq!(n(5, 3).try_div(&PAdicNumber::zero(5)), Err(Error::DivisionByZero));
        let z = n(5, 3) - n(5, 3);
        assert_eq!(n(5, 3).try_div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn prime_mismatch_reported() {
        assert_eq!(n(5, 1).try_add(&n(3, 1)), Err(Error::PrimeMismatch(5, 3)));
    }

    #[test]
    fn norms() {
        assert_eq!(PAdicNumber::zero(5).norm(), BigRational::zero());
        assert_eq!(n(5, 75).norm(), BigRational::new(1.into(), 25.into()));
        assert_eq!(q(5, 1, 5).norm(), BigRational::from_integer(5.into()));
    }

    #[test]
    fn rational_roundtrip_through_residues() {
        let third = q(5, 1, 3);
        assert_eq!(third * n(5, 3), n(5, 1));
        let neg = n(5, -7);
        assert_eq!(neg + n(5, 7), PAdicNumber::zero(5));
    }

    #[test]
    fn precision_propagates_through_cancellation() {
        // (36 - 1) / 5 = 7 with one digit lost to cancellation
        let d = (n(5, 36) - n(5, 1)).try_div(&n(5, 5)).unwrap();
        assert_eq!(d, n(5, 7));
        assert_eq!(d.prec(), 11);
    }

    #[test]
    fn literal_examples() {
        let x: PAdicNumber = "3,0,1e-2@5".parse().unwrap();
        assert_eq!(x.to_rational(), BigRational::new(28.into(), 25.into()));
        assert_eq!(x.to_string(), "3,0,1e-2@5");
        let z: PAdicNumber = "0@5".parse().unwrap();
        assert!(z.is_exact_zero());
        let zm: PAdicNumber = "0,0e3@5".parse().unwrap();
        assert_eq!(zm.abs_prec(), Some(5));
        assert_eq!(zm.to_string().parse::<PAdicNumber>().unwrap().abs_prec(), Some(5));
        assert!(matches!("3,7@5".parse::<PAdicNumber>(), Err(Error::Parse { offset: 2, .. })));
        assert!("1@4".parse::<PAdicNumber>().is_err());
    }

    #[test]
    fn json_form() {
        let x: PAdicNumber = "3,0,1e-2@5".parse().unwrap();
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"p":5,"val":-2,"digits":[3,0,1]}"#);
        let back: PAdicNumber = serde_json::from_str(&j).unwrap();
        assert!(back.identical(&x));
        let z = serde_json::to_string(&PAdicNumber::zero(5)).unwrap();
        assert_eq!(z, r#"{"p":5,"val":null,"digits":[]}"#);
    }

    #[test]
    fn truncation() {
        let x = n(5, 2 + 3 * 5 + 4 * 25);
        let t = x.truncate(2, DEFAULT_PREC).unwrap();
        assert_eq!(t, n(5, 17));
        assert!(x.truncate(0, DEFAULT_PREC).unwrap().is_exact_zero());
        assert!(x.truncate(20, DEFAULT_PREC).is_err());
    }

    #[test]
    fn digit_access() {
        let y = q(5, 1, 5);
        assert_eq!(y.digit_at(-1), Some(1));
        assert_eq!(y.digit_at(0), Some(0));
        assert_eq!(y.digit_at(-5), Some(0));
        assert_eq!(y.digit_at(11), None);
    }

    #[test]
    fn max_prec_bounds() {
        assert_eq!(max_prec(2), 62);
        assert!(max_prec(5) >= 20);
    }
}
