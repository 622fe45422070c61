//! The radius function `h`, the disjoint ball family `G₀` and its
//! indicator partition of unity on `W`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde::Serialize;

use super::closed::{dist_to_set, CosetUnion};
use crate::error::{Error, Result};
use crate::haar::{CosetEnumerator, COSET_CAP};
use crate::lipschitz::{PackingFamily, PackingParams};
use crate::magnitude::pow_rational;
use crate::padic::{Ball, BallRelation, CosetKey, PAdicNumber, PAdicVector, DEFAULT_PREC};

/// Integer constants of the construction: `b = p^{-s0}`, enlargement
/// factor `p^{-s1}`, packing parameters `α = β = b p^{-s2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WhitneyParams {
    pub s0: i64,
    pub s1: i64,
    pub s2: i64,
}

impl Default for WhitneyParams {
    fn default() -> Self {
        WhitneyParams { s0: 2, s1: 0, s2: -1 }
    }
}

impl WhitneyParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.s0 >= 1 && self.s1 <= 0 && self.s1.abs() + 1 < self.s0 && self.s2 >= -1 && self.s0 + self.s2 >= 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "constants s0={}, s1={}, s2={} need s0 >= 1, s1 <= 0, |s1|+1 < s0, s2 >= -1, s0+s2 >= 0",
                self.s0, self.s1, self.s2
            )))
        }
    }

    pub fn b(&self, p: u32) -> BigRational {
        pow_rational(p, -self.s0)
    }
}

/// `h` on `W = domain \ A` with `|h(x)| = b min(1, dist(x, A))`.
#[derive(Clone, Debug)]
pub struct RadiusFunction {
    a: CosetUnion,
    s0: i64,
}

pub fn build_h(a: &CosetUnion, params: &WhitneyParams) -> Result<RadiusFunction> {
    params.validate()?;
    Ok(RadiusFunction { a: a.clone(), s0: params.s0 })
}

impl RadiusFunction {
    pub fn closed_set(&self) -> &CosetUnion {
        &self.a
    }

    /// Valuation of `h(x)`: `s0 + max(0, v)` where `dist(x, A) = p^{-v}`.
    pub fn valuation(&self, x: &PAdicVector) -> Result<i64> {
        let d = dist_to_set(&self.a, x)?;
        match d.exponent() {
            None => Err(Error::Precondition(format!("h is defined off the closed set only; {x} lies in it"))),
            Some(e) => Ok(self.s0 + (-e.to_integer()).max(0)),
        }
    }

    /// `h(x) = p^{valuation(x)}`.
    pub fn eval(&self, x: &PAdicVector) -> Result<PAdicNumber> {
        PAdicNumber::p_pow(self.a.prime(), self.valuation(x)?, DEFAULT_PREC)
    }

    /// Radius exponent of the support `B(x, |π h(x)|)`.
    pub fn support_exp(&self, x: &PAdicVector) -> Result<i64> {
        Ok(self.valuation(x)? + 1)
    }
}

/// Sites `G₀` with pairwise disjoint supports `B(y, |π h(y)|)` covering `W`.
#[derive(Clone, Debug)]
pub struct PartitionFamily {
    domain: Ball,
    resolution: i64,
    h: RadiusFunction,
    sites: Vec<PAdicVector>,
    support_exps: Vec<i64>,
    /// support exponent ↦ (canonical key ↦ site index)
    index: BTreeMap<i64, HashMap<CosetKey, usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySite {
    pub site: PAdicVector,
    pub h: PAdicNumber,
    pub support: Ball,
}

/// Greedy selection: scan the grid cosets of `domain` at resolution `k` in
/// enumeration order and admit each point of `W` whose support misses every
/// admitted support. Supports of points of `W` are equal or disjoint, since
/// `dist(·, A)` is constant on each of them, so the admitted ones cover `W`.
pub fn disjoint_ball_family(h: &RadiusFunction, domain: &Ball, k: i64) -> Result<PartitionFamily> {
    let domain = domain.canonical()?;
    let a = &h.a;
    if a.dim() != domain.dim() || a.prime() != domain.prime() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: a.dim() });
    }
    for b in a.balls() {
        if b.rad_exp > k {
            return Err(Error::Precondition(format!(
                "resolution {k} is coarser than a coset of the closed set (radius exponent {})",
                b.rad_exp
            )));
        }
        if !matches!(domain.relation(b)?, BallRelation::Contains | BallRelation::Equal) {
            return Err(Error::Precondition("closed set leaves the working domain".into()));
        }
    }
    let reps = CosetEnumerator::new(&domain, k, COSET_CAP)?.collect();
    let mut fam = PartitionFamily {
        domain,
        resolution: k,
        h: h.clone(),
        sites: Vec::new(),
        support_exps: Vec::new(),
        index: BTreeMap::new(),
    };
    for y in reps {
        if a.contains(&y)? {
            continue;
        }
        let e = h.support_exp(&y)?;
        if e > k {
            return Err(Error::Precondition(format!(
                "resolution {k} is too coarse: support of {y} has radius exponent {e}"
            )));
        }
        let key = y.truncate(e, DEFAULT_PREC)?.key();
        let slot = fam.index.entry(e).or_default();
        if !slot.contains_key(&key) {
            slot.insert(key, fam.sites.len());
            fam.sites.push(y);
            fam.support_exps.push(e);
        }
    }
    Ok(fam)
}

impl PartitionFamily {
    pub fn domain(&self) -> &Ball {
        &self.domain
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn radius_function(&self) -> &RadiusFunction {
        &self.h
    }

    pub fn sites(&self) -> &[PAdicVector] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn support(&self, i: usize) -> Ball {
        Ball::new(self.sites[i].clone(), self.support_exps[i])
    }

    pub fn describe(&self) -> Result<Vec<FamilySite>> {
        (0..self.len())
            .map(|i| Ok(FamilySite { site: self.sites[i].clone(), h: self.h.eval(&self.sites[i])?, support: self.support(i) }))
            .collect()
    }

    fn check_in_w(&self, x: &PAdicVector) -> Result<()> {
        if !self.domain.contains(x)? {
            return Err(Error::DomainEscape);
        }
        if self.h.a.contains(x)? {
            return Err(Error::Precondition(format!("{x} lies in the closed set, not in W")));
        }
        Ok(())
    }

    /// Sites whose support contains `x`, found by coset-key lookup at every
    /// support scale in use.
    fn covering(&self, x: &PAdicVector) -> Result<Vec<usize>> {
        let mut hits = Vec::new();
        for (&e, map) in &self.index {
            if let Some(&i) = map.get(&x.truncate(e, DEFAULT_PREC)?.key()) {
                hits.push(i);
            }
        }
        hits.sort_unstable();
        Ok(hits)
    }

    /// The unique site whose support contains `x ∈ W`.
    pub fn site_for(&self, x: &PAdicVector) -> Result<usize> {
        self.check_in_w(x)?;
        match self.covering(x)?.as_slice() {
            [i] => Ok(*i),
            [] => Err(Error::Invalid(format!("no support covers {x}"))),
            _ => Err(Error::Invalid(format!("overlapping supports at {x}"))),
        }
    }

    /// Nonzero weights `(site index, w_y(x))`; every other `w_y(x)` is 0.
    pub fn partition_weights(&self, x: &PAdicVector) -> Result<Vec<(usize, u32)>> {
        self.check_in_w(x)?;
        Ok(self.covering(x)?.into_iter().map(|i| (i, 1)).collect())
    }

    /// `w_y(x) = ch_{B(0,1)}((x - y) / (π h(y)))` for one site, evaluated
    /// literally.
    pub fn weight(&self, i: usize, x: &PAdicVector) -> Result<u32> {
        let y = &self.sites[i];
        let p = y.prime();
        let pi_h = PAdicNumber::from_int(p, p as i64, DEFAULT_PREC)?.try_mul(&self.h.eval(y)?)?;
        let u = x.try_sub(y)?;
        let scaled = PAdicVector::new(u.coords().iter().map(|c| c.try_div(&pi_h)).collect::<Result<_>>()?)?;
        Ok(u32::from(scaled.valuation_floor() >= 0))
    }

    /// The family with radius function `π h`, as a packing family
    /// with Lipschitz constant `b = p^{-s0}`.
    pub fn packing_family(&self, params: &WhitneyParams, alpha: BigRational, beta: BigRational) -> Result<PackingFamily> {
        let p = self.domain.prime();
        let hs = self
            .sites
            .iter()
            .zip(&self.support_exps)
            .map(|(_, &e)| PAdicNumber::p_pow(p, e, DEFAULT_PREC))
            .collect::<Result<Vec<_>>>()?;
        PackingFamily::new(self.sites.clone(), hs, PackingParams { b: params.b(p), alpha, beta })
    }

    /// `π h(x)` for a query point, matching [`Self::packing_family`].
    pub fn pi_h(&self, x: &PAdicVector) -> Result<PAdicNumber> {
        PAdicNumber::p_pow(self.domain.prime(), self.h.support_exp(x)?, DEFAULT_PREC)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::enumerate_cosets;
    use crate::magnitude::Magnitude;
    use num_traits::One;

    fn v(xs: &[i64]) -> PAdicVector {
        PAdicVector::from_ints(5, xs).unwrap()
    }

    fn point_set() -> CosetUnion {
        CosetUnion::new(vec![Ball::new(v(&[0]), 3)]).unwrap()
    }

    #[test]
    fn params_constraints() {
        assert!(WhitneyParams::default().validate().is_ok());
        assert!(WhitneyParams { s0: 1, s1: 0, s2: -1 }.validate().is_err());
        assert!(WhitneyParams { s0: 3, s1: -2, s2: 0 }.validate().is_err());
        assert!(WhitneyParams { s0: 3, s1: -1, s2: -2 }.validate().is_err());
    }

    #[test]
    fn radius_values() {
        let h = build_h(&point_set(), &WhitneyParams::default()).unwrap();
        let b = Magnitude::from_valuation(5, Some(2));
        assert_eq!(h.eval(&v(&[1])).unwrap().magnitude(), b);
        assert_eq!(h.eval(&v(&[3])).unwrap().magnitude(), b);
        assert_eq!(h.eval(&v(&[5])).unwrap().magnitude(), Magnitude::from_valuation(5, Some(3)));
        assert!(matches!(h.eval(&v(&[0])), Err(Error::Precondition(_))));
        // |x| > 1 still caps at b
        let far = PAdicVector::new(vec![PAdicNumber::p_pow(5, -1, DEFAULT_PREC).unwrap()]).unwrap();
        assert_eq!(h.eval(&far).unwrap().magnitude(), b);
    }

    #[test]
    fn h_is_b_lipschitz_on_the_grid() {
        let params = WhitneyParams::default();
        let h = build_h(&point_set(), &params).unwrap();
        let w: Vec<_> = enumerate_cosets(&Ball::origin(5, 1, 0), 5)
            .unwrap()
            .into_iter()
            .filter(|x| !point_set().contains(x).unwrap())
            .collect();
        let hs: Vec<_> = w.iter().map(|x| h.eval(x).unwrap()).collect();
        let b = params.b(5);
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let dh = hs[i].try_sub(&hs[j]).unwrap().norm();
                assert!(dh <= &b * w[i].try_sub(&w[j]).unwrap().sup_norm());
            }
        }
    }

    #[test]
    fn one_residue_class_left() {
        // W = 4 + 5Z_5 sits at distance 1 from A, so supports are grid cosets at K = 3
        let a = CosetUnion::new((0..4).map(|c| Ball::new(v(&[c]), 1)).collect()).unwrap();
        let h = build_h(&a, &WhitneyParams::default()).unwrap();
        let fam = disjoint_ball_family(&h, &Ball::origin(5, 1, 0), 3).unwrap();
        assert_eq!(fam.len(), 25);
        assert_eq!(fam.sites()[0], v(&[4]));
        assert!((0..fam.len()).all(|i| fam.support(i).rad_exp == 3));
    }

    #[test]
    fn spheres_are_tiled() {
        let h = build_h(&point_set(), &WhitneyParams::default()).unwrap();
        let dom = Ball::origin(5, 1, 0);
        assert!(matches!(disjoint_ball_family(&h, &dom, 4), Err(Error::Precondition(_))));
        let fam = disjoint_ball_family(&h, &dom, 5).unwrap();
        let grid = enumerate_cosets(&dom, 5).unwrap();
        for x in &grid {
            if point_set().contains(x).unwrap() {
                assert!(fam.partition_weights(x).is_err());
                continue;
            }
            let dense: Vec<u32> = (0..fam.len()).map(|i| fam.weight(i, x).unwrap()).collect();
            assert_eq!(dense.iter().sum::<u32>(), 1, "x = {x}");
            let i = fam.site_for(x).unwrap();
            assert_eq!(dense[i], 1);
            assert_eq!(fam.partition_weights(x).unwrap(), vec![(i, 1)]);
        }
        for i in 0..fam.len() {
            for j in i + 1..fam.len() {
                assert_eq!(fam.support(i).relation(&fam.support(j)).unwrap(), crate::padic::BallRelation::Disjoint);
            }
        }
        // support radius shrinks with the sphere: |x| = 5^{-l} gives 5^{-(l+3)}
        for i in 0..fam.len() {
            let l = fam.sites()[i].valuation_floor();
            assert_eq!(fam.support(i).rad_exp, l + 3);
        }
    }

    #[test]
    fn site_weight_is_one() {
        let h = build_h(&point_set(), &WhitneyParams::default()).unwrap();
        let fam = disjoint_ball_family(&h, &Ball::origin(5, 1, 0), 5).unwrap();
        for (i, y) in fam.sites().iter().enumerate() {
            assert_eq!(fam.weight(i, y).unwrap(), 1);
        }
    }

    #[test]
    fn packing_passes_on_the_family() {
        let params = WhitneyParams::default();
        let h = build_h(&point_set(), &params).unwrap();
        let dom = Ball::origin(5, 1, 0);
        let fam = disjoint_ball_family(&h, &dom, 5).unwrap();
        let one = BigRational::one();
        let pf = fam.packing_family(&params, one.clone(), one).unwrap();
        let queries: Vec<_> = enumerate_cosets(&dom, 5)
            .unwrap()
            .into_iter()
            .filter(|x| !point_set().contains(x).unwrap())
            .map(|x| {
                let hx = fam.pi_h(&x).unwrap();
                (x, hx)
            })
            .collect();
        for r in pf.reports(&queries).unwrap() {
            assert!(r.ratio_ok && r.card_ok, "{r:?}");
        }
    }
}
