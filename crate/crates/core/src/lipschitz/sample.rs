use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::magnitude::{format_rational, parse_exponent, parse_rational, Exponent, Magnitude};
use crate::padic::PAdicVector;

/// Finite samples `site ↦ value` with a claimed Hölder bound `C |x - y|^r`.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub points: Vec<(PAdicVector, PAdicVector)>,
    pub c: BigRational,
    pub r: Exponent,
    certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub certified: bool,
    /// `max |f(x) - f(y)| / |x - y|^r` over all pairs.
    pub max_ratio: Magnitude,
    /// First pair (by index) breaking the bound.
    pub witness: Option<(usize, usize)>,
}

impl SampleSet {
    pub fn new(points: Vec<(PAdicVector, PAdicVector)>, c: BigRational, r: Exponent) -> Result<Self> {
        let (first, _) = points.first().ok_or_else(|| Error::Invalid("empty sample set".into()))?;
        let (p, m) = (first.prime(), first.dim());
        let n = points[0].1.dim();
        for (s, v) in &points {
            if s.prime() != p || v.prime() != p {
                return Err(Error::PrimeMismatch(p, if s.prime() != p { s.prime() } else { v.prime() }));
            }
            if s.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, got: s.dim() });
            }
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
            }
        }
        if r <= Exponent::from_integer(0) || r > Exponent::from_integer(1) {
            return Err(Error::Precondition(format!("exponent {r} outside (0, 1]")));
        }
        Ok(SampleSet { points, c, r, certified: false })
    }

    pub fn prime(&self) -> u32 {
        self.points[0].0.prime()
    }

    pub fn dim_in(&self) -> usize {
        self.points[0].0.dim()
    }

    pub fn dim_out(&self) -> usize {
        self.points[0].1.dim()
    }

    pub fn sites(&self) -> Vec<PAdicVector> {
        self.points.iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Checks all pairs exhaustively; marks the set certified on success.
    pub fn certify(&mut self) -> Result<CertifyReport> {
        let mut max_ratio = Magnitude::zero(self.prime());
        let mut witness = None;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let ds = self.points[i].0.dist(&self.points[j].0)?;
                if ds.is_zero() {
                    return Err(Error::Precondition(format!("sites {i} and {j} coincide")));
                }
                let dv = self.points[i].1.dist(&self.points[j].1)?;
                let q = dv.div(&ds.powr(self.r)).expect("nonzero distance");
                max_ratio = max_ratio.max(q);
                if witness.is_none() && !q.le_rational(&self.c) {
                    witness = Some((i, j));
                }
            }
        }
        self.certified = witness.is_none();
        Ok(CertifyReport { certified: self.certified, max_ratio, witness })
    }
}

#[derive(Serialize, Deserialize)]
struct Constants {
    #[serde(rename = "C")]
    c: String,
    r: String,
}

#[derive(Serialize, Deserialize)]
struct SampleJson {
    constants: Constants,
    points: Vec<(PAdicVector, PAdicVector)>,
}

impl Serialize for SampleSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampleJson {
            constants: Constants { c: format_rational(&self.c), r: self.r.to_string() },
            points: self.points.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SampleJson::deserialize(d)?;
        let c = parse_rational(&j.constants.c).ok_or_else(|| D::Error::custom("invalid constant C"))?;
        let r = parse_exponent(&j.constants.r).ok_or_else(|| D::Error::custom("invalid exponent r"))?;
        SampleSet::new(j.points, c, r).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> PAdicVector {
        PAdicVector::from_ints(5, &[x]).unwrap()
    }

    #[test]
    fn certification() {
        let one = BigRational::from_integer(1.into());
        let mut s = SampleSet::new(vec![(v(0), v(0)), (v(1), v(1)), (v(5), v(0))], one.clone(), Exponent::from_integer(1)).unwrap();
        assert!(s.certify().unwrap().certified);
        let mut bad = SampleSet::new(vec![(v(0), v(0)), (v(5), v(1))], one, Exponent::from_integer(1)).unwrap();
        let r = bad.certify().unwrap();
        assert!(!r.certified);
        assert_eq!(r.witness, Some((0, 1)));
        assert_eq!(r.max_ratio, Magnitude::from_valuation(5, Some(-1)));
    }

    #[test]
    fn json_form() {
        let s = SampleSet::new(vec![(v(0), v(0)), (v(1), v(1))], BigRational::new(1.into(), 5.into()), Exponent::new(1, 2)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.starts_with(r#"{"constants":{"C":"1/5","r":"1/2"},"points":[["#));
        let back: SampleSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back.points.len(), 2);
        assert_eq!(back.r, Exponent::new(1, 2));
    }
}
