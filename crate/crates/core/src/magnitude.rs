//! Nonnegative reals of the form `p^e` with rational exponent, plus zero.
//!
//! Ultrametric norms, Hölder ratios `|f(x)-f(y)| / |x-y|^r` and Chebyshev
//! radii all live in this set, so comparisons stay exact without floats.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

pub type Exponent = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Magnitude {
    p: u32,
    /// `None` encodes the value 0.
    exp: Option<Exponent>,
}

impl Magnitude {
    pub fn zero(p: u32) -> Self {
        Magnitude { p, exp: None }
    }

    pub fn one(p: u32) -> Self {
        Magnitude { p, exp: Some(Exponent::zero()) }
    }

    pub fn pow(p: u32, exp: Exponent) -> Self {
        Magnitude { p, exp: Some(exp) }
    }

    /// The norm `p^{-v}` of an element of valuation `v` (`None` = zero).
    pub fn from_valuation(p: u32, val: Option<i64>) -> Self {
        Magnitude { p, exp: val.map(|v| Exponent::from_integer(-v)) }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn exponent(&self) -> Option<Exponent> {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.exp.is_none()
    }

    pub fn mul(&self, other: &Magnitude) -> Magnitude {
        match (self.exp, other.exp) {
            (Some(a), Some(b)) => Magnitude::pow(self.p, a + b),
            _ => Magnitude::zero(self.p),
        }
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn div(&self, other: &Magnitude) -> Option<Magnitude> {
        let b = other.exp?;
        Some(match self.exp {
            Some(a) => Magnitude::pow(self.p, a - b),
            None => Magnitude::zero(self.p),
        })
    }

    /// `self^r` for `r > 0`.
    pub fn powr(&self, r: Exponent) -> Magnitude {
        match self.exp {
            Some(a) => Magnitude::pow(self.p, a * r),
            None => Magnitude::zero(self.p),
        }
    }

    /// Exact value when the exponent is an integer.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.exp {
            None => Some(BigRational::zero()),
            Some(e) if e.is_integer() => Some(pow_rational(self.p, *e.numer())),
            Some(_) => None,
        }
    }

    /// Compares `self` against a nonnegative rational exactly.
    pub fn cmp_rational(&self, c: &BigRational) -> Ordering {
        match self.exp {
            None => BigRational::zero().cmp(c),
            Some(_) if !c.is_positive() => Ordering::Greater,
            Some(e) => {
                // p^{a/b} vs c  <=>  p^a vs c^b  (b > 0)
                let a = *e.numer();
                let b = *e.denom();
                let lhs = pow_rational(self.p, a);
                let rhs = pow_big(c, b);
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn le_rational(&self, c: &BigRational) -> bool {
        self.cmp_rational(c) != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        match self.exp {
            None => 0.0,
            Some(e) => (self.p as f64).powf(*e.numer() as f64 / *e.denom() as f64),
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.exp, other.exp) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            None => write!(f, "0"),
            Some(e) if e.is_integer() => write!(f, "{}", pow_rational(self.p, *e.numer())),
            Some(e) => write!(f, "{}^({})", self.p, e),
        }
    }
}

impl serde::Serialize for Magnitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `p^k` as an exact rational, `k` any integer.
pub fn pow_rational(p: u32, k: i64) -> BigRational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

fn pow_big(c: &BigRational, b: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..b {
        acc *= c;
    }
    acc
}

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn parse_exponent(s: &str) -> Option<Exponent> {
    let r = parse_rational(s)?;
    let n: i64 = r.numer().try_into().ok()?;
    let d: i64 = r.denom().try_into().ok()?;
    Some(Exponent::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
