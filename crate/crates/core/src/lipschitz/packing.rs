//! Ratio and cardinality bounds for families of disjoint balls whose radii
//! vary in a lipschitzian way.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnitude::{format_rational, pow_rational};
use crate::padic::{CosetKey, PAdicNumber, PAdicVector, DEFAULT_PREC};

#[derive(Clone, Debug, Serialize)]
pub struct PackingParams {
    #[serde(serialize_with = "ser_q")]
    pub b: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub alpha: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub beta: BigRational,
}

fn ser_q<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl PackingParams {
    fn lower(&self) -> BigRational {
        (BigRational::one() - &self.b * &self.beta) / (BigRational::one() + &self.b * &self.alpha)
    }

    fn upper(&self) -> BigRational {
        (BigRational::one() + &self.b * &self.beta) / (BigRational::one() - &self.b * &self.alpha)
    }

    /// `[max(α, β(1+bα)/(1-bβ))]^m [(1+bβ)/(1-bα)]^m`.
    pub fn card_bound(&self, m: usize) -> BigRational {
        let one = BigRational::one();
        let second = &self.beta * (&one + &self.b * &self.alpha) / (&one - &self.b * &self.beta);
        let base = self.alpha.clone().max(second) * self.upper();
        (0..m).fold(one, |acc, _| acc * &base)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingReport {
    /// Indices `y` of the family with `B(x, α|h(x)|) ∩ B(y, β|h(y)|) ≠ ∅`.
    pub g_x: Vec<usize>,
    pub ratio_ok: bool,
    pub card_ok: bool,
    #[serde(serialize_with = "ser_q")]
    pub card_bound: BigRational,
    /// First `y` in `g_x` whose ratio `|h(x)|/|h(y)|` leaves the bounds.
    pub ratio_witness: Option<usize>,
}

/// Least `e` with `p^{-e} <= rho` (`strict`: `p^{-e} < rho`), for `rho > 0`.
fn exp_at_most(p: u32, rho: &BigRational, strict: bool) -> i64 {
    let fits = |e: i64| {
        let r = pow_rational(p, -e);
        if strict {
            r < *rho
        } else {
            r <= *rho
        }
    };
    let mut e = 0;
    while !fits(e) {
        e += 1;
    }
    while fits(e - 1) {
        e -= 1;
    }
    e
}

fn trunc_key(y: &PAdicVector, e: i64) -> Result<CosetKey> {
    Ok(y.truncate(e, DEFAULT_PREC)?.key())
}

/// Sites grouped by the valuation of `h`, each group indexed by coset keys
/// at the scales needed for ball-intersection lookups.
fn index(sites: &[PAdicVector], members: &[usize], e: i64) -> Result<HashMap<CosetKey, Vec<usize>>> {
    let mut map: HashMap<CosetKey, Vec<usize>> = HashMap::new();
    for &i in members {
        map.entry(trunc_key(&sites[i], e)?).or_default().push(i);
    }
    Ok(map)
}

/// A family `{(y, h(y))}` whose preconditions have been verified once, so
/// that many points `x` can be tested against it.
#[derive(Clone, Debug)]
pub struct PackingFamily {
    sites: Vec<PAdicVector>,
    hs: Vec<PAdicNumber>,
    params: PackingParams,
    /// valuation of `h` ↦ member indices, ascending.
    groups: BTreeMap<i64, Vec<usize>>,
}

impl PackingFamily {
    /// Checks that the balls `B(y, |h(y)|)` are pairwise disjoint and that
    /// `|h(y) - h(y')| <= b |y - y'|`, naming the first offending pair found.
    pub fn new(sites: Vec<PAdicVector>, hs: Vec<PAdicNumber>, params: PackingParams) -> Result<Self> {
        if sites.len() != hs.len() {
            return Err(Error::DimensionMismatch { expected: sites.len(), got: hs.len() });
        }
        if &params.b * &params.alpha >= BigRational::one() || &params.b * &params.beta >= BigRational::one() {
            return Err(Error::Precondition("need b·alpha < 1 and b·beta < 1".into()));
        }
        if params.alpha <= BigRational::zero() || params.beta <= BigRational::zero() {
            return Err(Error::Precondition("alpha and beta must be positive".into()));
        }
        if let Some(i) = hs.iter().position(|h| h.is_zero()) {
            return Err(Error::Precondition(format!("h vanishes at site {i}")));
        }
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, h) in hs.iter().enumerate() {
            groups.entry(h.valuation_floor()).or_default().push(i);
        }
        let fam = PackingFamily { sites, hs, params, groups };
        fam.check_disjoint()?;
        fam.check_lipschitz()?;
        Ok(fam)
    }

    fn check_disjoint(&self) -> Result<()> {
        let overlap = |i: usize, j: usize| {
            let (a, b) = (i.min(j), i.max(j));
            Err(Error::Precondition(format!("balls around sites {a} and {b} intersect")))
        };
        // A smaller ball meets a larger one iff its center lies in the larger one.
        for (&e_big, big) in &self.groups {
            let map = index(&self.sites, big, e_big)?;
            if let Some(v) = map.values().find(|v| v.len() > 1) {
                return overlap(v[0], v[1]);
            }
            for (_, small) in self.groups.range(e_big + 1..) {
                for &j in small {
                    if let Some(v) = map.get(&trunc_key(&self.sites[j], e_big)?) {
                        return overlap(v[0], j);
                    }
                }
            }
        }
        Ok(())
    }

    fn check_lipschitz(&self) -> Result<()> {
        // Pairs with identical h-values pass; otherwise `|h - h'|` is fixed
        // and a violation means `|y - y'|` falls below `|h - h'| / b`.
        let mut classes: BTreeMap<(i64, u64), Vec<usize>> = BTreeMap::new();
        for (i, h) in self.hs.iter().enumerate() {
            classes.entry(h.key()).or_default().push(i);
        }
        let classes: Vec<&Vec<usize>> = classes.values().collect();
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                let (ia, ib) = (classes[a][0], classes[b][0]);
                let dh = self.hs[ia].try_sub(&self.hs[ib])?.norm();
                let e = if self.params.b.is_zero() {
                    None
                } else {
                    Some(exp_at_most(self.sites[0].prime(), &(&dh / &self.params.b), true))
                };
                let hit = match e {
                    // b = 0: any two distinct values already violate
                    None => Some((ia, ib)),
                    Some(e) => {
                        let map = index(&self.sites, classes[a], e)?;
                        let mut found = None;
                        for &j in classes[b] {
                            if let Some(v) = map.get(&trunc_key(&self.sites[j], e)?) {
                                found = Some((v[0], j));
                                break;
                            }
                        }
                        found
                    }
                };
                if let Some((i, j)) = hit {
                    let (i, j) = (i.min(j), i.max(j));
                    return Err(Error::Precondition(format!("h is not b-lipschitz on sites {i} and {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Packing reports for each query `(x, h(x))`, in query order.
    pub fn reports(&self, queries: &[(PAdicVector, PAdicNumber)]) -> Result<Vec<PackingReport>> {
        let p = match self.sites.first() {
            Some(s) => s.prime(),
            None => return Err(Error::Invalid("empty family".into())),
        };
        if let Some((_, h)) = queries.iter().find(|(_, h)| h.is_zero()) {
            return Err(Error::Precondition(format!("h vanishes at a query point ({h})")));
        }
        // B(x, α|h(x)|) meets B(y, β|h(y)|) iff |x - y| <= max of the radii
        let lookup_exp = |hx: &PAdicNumber, e_g: i64| {
            let reach = (&self.params.alpha * hx.norm()).max(&self.params.beta * pow_rational(p, -e_g));
            exp_at_most(p, &reach, false)
        };
        let mut needed: BTreeSet<(i64, i64)> = BTreeSet::new();
        for (_, hx) in queries {
            for &e_g in self.groups.keys() {
                needed.insert((e_g, lookup_exp(hx, e_g)));
            }
        }
        let maps: HashMap<(i64, i64), HashMap<CosetKey, Vec<usize>>> = needed
            .into_par_iter()
            .map(|(e_g, e)| Ok(((e_g, e), index(&self.sites, &self.groups[&e_g], e)?)))
            .collect::<Result<_>>()?;

        let (lo, hi) = (self.params.lower(), self.params.upper());
        let card_bound = self.params.card_bound(self.sites[0].dim());
        queries
            .par_iter()
            .map(|(x, hx)| {
                let mut g_x = Vec::new();
                for &e_g in self.groups.keys() {
                    let e = lookup_exp(hx, e_g);
                    if let Some(v) = maps[&(e_g, e)].get(&trunc_key(x, e)?) {
                        g_x.extend_from_slice(v);
                    }
                }
                g_x.sort_unstable();
                let nx = hx.norm();
                let ratio_witness = g_x.iter().copied().find(|&i| {
                    let q = &nx / self.hs[i].norm();
                    q < lo || q > hi
                });
                let card_ok = BigRational::from_integer(BigInt::from(g_x.len())) <= card_bound;
                Ok(PackingReport {
                    g_x,
                    ratio_ok: ratio_witness.is_none(),
                    card_ok,
                    card_bound: card_bound.clone(),
                    ratio_witness,
                })
            })
            .collect()
    }
}

/// Verifies the family preconditions: disjoint balls `B(y, |h(y)|)` and
/// `|h(y) - h(y')| <= b |y - y'|`.
pub fn check_family(g: &[PAdicVector], hs: &[PAdicNumber], params: &PackingParams) -> Result<()> {
    PackingFamily::new(g.to_vec(), hs.to_vec(), params.clone()).map(|_| ())
}

pub fn packing_check<H>(g: &[PAdicVector], h: H, params: &PackingParams, x: &PAdicVector) -> Result<PackingReport>
where
    H: Fn(&PAdicVector) -> Result<PAdicNumber>,
{
    let hs = g.iter().map(&h).collect::<Result<Vec<_>>>()?;
    let fam = PackingFamily::new(g.to_vec(), hs, params.clone())?;
    let hx = h(x)?;
    Ok(fam.reports(&[(x.clone(), hx)])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> PAdicVector {
        PAdicVector::from_ints(5, &[x]).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn params(b: BigRational, alpha: BigRational, beta: BigRational) -> PackingParams {
        PackingParams { b, alpha, beta }
    }

    fn n(x: i64) -> PAdicNumber {
        PAdicNumber::from_int(5, x, DEFAULT_PREC).unwrap()
    }

    /// Direct all-pairs evaluation of the definitions.
    fn brute_g_x(g: &[PAdicVector], hs: &[PAdicNumber], pr: &PackingParams, x: &PAdicVector, hx: &PAdicNumber) -> Vec<usize> {
        (0..g.len())
            .filter(|&i| {
                let d = x.try_sub(&g[i]).unwrap().sup_norm();
                d <= (&pr.alpha * hx.norm()).max(&pr.beta * hs[i].norm())
            })
            .collect()
    }

    #[test]
    fn exponent_helper() {
        assert_eq!(exp_at_most(5, &q(1, 1), false), 0);
        assert_eq!(exp_at_most(5, &q(1, 1), true), 1);
        assert_eq!(exp_at_most(5, &q(1, 7), false), 2);
        assert_eq!(exp_at_most(5, &q(30, 1), false), -2);
    }

    #[test]
    fn single_site_constant_h() {
        let h = |_: &PAdicVector| Ok(n(5));
        let pr = params(q(1, 2), q(1, 1), q(1, 1));
        let r = packing_check(&[v(0)], h, &pr, &v(0)).unwrap();
        assert_eq!(r.g_x, vec![0]);
        assert!(r.ratio_ok && r.card_ok);
    }

    #[test]
    fn constant_h_on_disjoint_family() {
        let h = |_: &PAdicVector| Ok(n(25));
        let g: Vec<_> = (0..5).map(v).collect();
        let pr = params(q(0, 1), q(1, 1), q(1, 1));
        for x in [0, 1, 7, 30] {
            let r = packing_check(&g, h, &pr, &v(x)).unwrap();
            assert!(r.ratio_ok && r.card_ok, "x = {x}");
        }
    }

    #[test]
    fn small_alpha_cardinality_fails_at_a_site() {
        // with alpha = beta = 1/5 the bound drops below 1, yet x itself is in G_x
        let h = |_: &PAdicVector| Ok(n(25));
        let pr = params(q(0, 1), q(1, 5), q(1, 5));
        let r = packing_check(&[v(0), v(1)], h, &pr, &v(0)).unwrap();
        assert_eq!(r.g_x, vec![0]);
        assert!(r.card_bound < BigRational::one());
        assert!(!r.card_ok);
    }

    #[test]
    fn overlapping_family_rejected() {
        let h = |_: &PAdicVector| Ok(n(1));
        let pr = params(q(0, 1), q(1, 1), q(1, 1));
        let e = packing_check(&[v(0), v(5)], h, &pr, &v(0)).unwrap_err();
        assert_eq!(e, Error::Precondition("balls around sites 0 and 1 intersect".into()));
        // nested radii: B(0, 1/5) swallows B(10, 1/25)
        let hs = [n(5), n(25)];
        let e = check_family(&[v(0), v(10)], &hs, &pr).unwrap_err();
        assert_eq!(e, Error::Precondition("balls around sites 0 and 1 intersect".into()));
    }

    #[test]
    fn lipschitz_violation_named() {
        // |h(0) - h(1)| = |5 - 25| = 1/5 > b |0 - 1| = 1/25
        let hs = [n(5), n(25)];
        let pr = params(q(1, 25), q(1, 1), q(1, 1));
        let e = check_family(&[v(0), v(1)], &hs, &pr).unwrap_err();
        assert_eq!(e, Error::Precondition("h is not b-lipschitz on sites 0 and 1".into()));
        assert!(check_family(&[v(0), v(1)], &hs, &params(q(1, 5), q(1, 1), q(1, 1))).is_ok());
    }

    #[test]
    fn indexed_lookup_matches_definition() {
        // radii 1/25 on residues 1..4 mod 5 and 1/125 on multiples of 5
        let g: Vec<_> = (1..5).chain((1..5).map(|k| 5 * k)).map(v).collect();
        let hs: Vec<_> = (0..8).map(|i| if i < 4 { n(25) } else { n(125) }).collect();
        let pr = params(q(1, 5), q(1, 1), q(1, 1));
        let fam = PackingFamily::new(g.clone(), hs.clone(), pr.clone()).unwrap();
        let queries: Vec<_> = (0..125).map(|x| (v(x), if x % 5 == 0 { n(125) } else { n(25) })).collect();
        let reps = fam.reports(&queries).unwrap();
        for ((x, hx), r) in queries.iter().zip(&reps) {
            assert_eq!(r.g_x, brute_g_x(&g, &hs, &pr, x, hx), "x = {x}");
        }
    }
}
