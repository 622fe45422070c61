use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::padic::{Ball, BallRelation, PAdicVector};

/// A closed set at finite resolution: a nonempty union of pairwise
/// disjoint balls in Q_p^m.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetUnion {
    balls: Vec<Ball>,
}

impl CosetUnion {
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        let first = balls.first().ok_or_else(|| Error::Invalid("empty closed set".into()))?;
        let (p, m) = (first.prime(), first.dim());
        let balls = balls
            .iter()
            .map(|b| {
                if b.prime() != p {
                    return Err(Error::PrimeMismatch(p, b.prime()));
                }
                if b.dim() != m {
                    return Err(Error::DimensionMismatch { expected: m, got: b.dim() });
                }
                b.canonical()
            })
            .collect::<Result<Vec<_>>>()?;
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                if balls[i].relation(&balls[j])? != BallRelation::Disjoint {
                    return Err(Error::Invalid(format!("cosets {i} and {j} of the closed set overlap")));
                }
            }
        }
        Ok(CosetUnion { balls })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn prime(&self) -> u32 {
        self.balls[0].prime()
    }

    pub fn dim(&self) -> usize {
        self.balls[0].dim()
    }

    /// Largest radius exponent among the cosets (the finest scale of `A`).
    pub fn finest_exp(&self) -> i64 {
        self.balls.iter().map(|b| b.rad_exp).max().expect("nonempty")
    }

    /// Index of the coset containing `x`.
    pub fn containing(&self, x: &PAdicVector) -> Result<Option<usize>> {
        for (i, b) in self.balls.iter().enumerate() {
            if b.contains(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn contains(&self, x: &PAdicVector) -> Result<bool> {
        Ok(self.containing(x)?.is_some())
    }

    /// `|x - c_i|` for each coset; equal to the distance from `x` to that
    /// coset whenever `x` lies outside it.
    pub fn center_distances(&self, x: &PAdicVector) -> Result<Vec<Magnitude>> {
        self.balls.iter().map(|b| x.dist(&b.center)).collect()
    }
}

/// `dist(x, A)`: zero inside `A`, otherwise the least `|x - c|` over the
/// cosets, since every point of a ball missing `x` sits at that distance.
pub fn dist_to_set(a: &CosetUnion, x: &PAdicVector) -> Result<Magnitude> {
    if a.contains(x)? {
        return Ok(Magnitude::zero(a.prime()));
    }
    Ok(a.center_distances(x)?.into_iter().min().expect("nonempty"))
}

impl Serialize for CosetUnion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.balls.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosetUnion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        CosetUnion::new(Vec::<Ball>::deserialize(d)?).map_err(D::Error::custom)
    }
}
