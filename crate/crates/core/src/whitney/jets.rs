//! Per-point polynomial jets on a closed set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::closed::CosetUnion;
use crate::diffquot::{eval_polys, phin, phin_limit, LimitSchedule, Poly, QuotientPoint, SymbolicFunction};
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::haar::{CosetEnumerator, COSET_CAP};
use crate::magnitude::{Exponent, Magnitude};
use crate::padic::{CosetKey, PAdicNumber, PAdicVector, DEFAULT_PREC};

/// A list of output polynomials viewed as a map `Q_p^m -> Q_p^n`.
#[derive(Clone, Copy, Debug)]
pub struct PolyMap<'a>(pub &'a [Poly]);

impl PointFunction for PolyMap<'_> {
    fn prime(&self) -> u32 {
        self.0[0].prime()
    }

    fn dim_in(&self) -> usize {
        self.0[0].nvars()
    }

    fn dim_out(&self) -> usize {
        self.0.len()
    }

    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector> {
        eval_polys(self.0, x)
    }
}

/// `P_z(y) = f(z) + Σ_{j=1}^{degree} Φ̄ʲf(z; y-z, .., y-z; 0, .., 0)` as
/// polynomials in `y`. Exact for polynomial `f` (its Taylor expansion at
/// `z`, truncated); otherwise the multilinear values on basis directions
/// come from limits of difference quotients.
pub fn jet_from_function(f: &SymbolicFunction, z: &PAdicVector, degree: u32, schedule: &LimitSchedule) -> Result<Vec<Poly>> {
    let (p, m, prec) = (f.prime(), f.dim_in(), f.prec());
    if z.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: z.dim() });
    }
    // s = y - z
    let shift: Vec<Poly> = (0..m)
        .map(|i| Ok(Poly::var(p, m, i, prec)?.add(&Poly::constant(*z.get(i), m, prec))))
        .collect::<Result<_>>()?;
    let back: Vec<Poly> = (0..m)
        .map(|i| Ok(Poly::var(p, m, i, prec)?.sub(&Poly::constant(*z.get(i), m, prec))))
        .collect::<Result<_>>()?;

    let in_s: Vec<Poly> = match Poly::from_function(f) {
        Ok(ps) => ps.iter().map(|q| Ok(q.substitute(&shift)?.truncate_degree(degree))).collect::<Result<_>>()?,
        Err(_) => limit_expansion(f, z, degree, schedule)?,
    };
    in_s.iter().map(|q| q.substitute(&back)).collect()
}

/// `f(z) + Σ_j Σ_{l_1..l_j} Φ̄ʲf(z; e_{l_1}..e_{l_j}; 0) s_{l_1} .. s_{l_j}`
/// with each coefficient a limit at vanishing increments.
fn limit_expansion(f: &SymbolicFunction, z: &PAdicVector, degree: u32, schedule: &LimitSchedule) -> Result<Vec<Poly>> {
    let (p, m, prec) = (f.prime(), f.dim_in(), f.prec());
    let fz = f.eval(z)?;
    let mut out: Vec<Poly> = fz.coords().iter().map(|c| Poly::constant(*c, m, prec)).collect();
    for j in 1..=degree as usize {
        let mut tuple = vec![0usize; j];
        loop {
            let vs: Vec<PAdicVector> = tuple.iter().map(|&l| PAdicVector::basis(p, m, l)).collect();
            let coef = phin_limit(f, z, &vs, schedule)?.value;
            let mut mono = Poly::constant(PAdicNumber::p_pow(p, 0, prec)?, m, prec);
            for &l in &tuple {
                mono = mono.mul(&Poly::var(p, m, l, prec)?);
            }
            for (o, c) in out.iter_mut().zip(coef.coords()) {
                *o = o.add(&mono.scale(c)?);
            }
            // next tuple in {0..m}^j
            let mut i = j;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < m {
                    break;
                }
                tuple[i] = 0;
            }
            if tuple.iter().all(|&l| l == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// Jets `P_z` at every grid representative `z` of a closed set `A`.
#[derive(Clone, Debug)]
pub struct JetField {
    k: u32,
    a: CosetUnion,
    resolution: i64,
    jets: Vec<(PAdicVector, Vec<Poly>)>,
    index: HashMap<CosetKey, usize>,
    /// Smallest jet index inside each coset of `A`.
    first_in_ball: Vec<usize>,
}

impl JetField {
    /// Validates that the jets sit exactly on the representatives of `A` at
    /// `resolution`, one each, with matching dimensions and degree `<= k + 1`.
    pub fn new(k: u32, a: CosetUnion, resolution: i64, jets: Vec<(PAdicVector, Vec<Poly>)>) -> Result<Self> {
        if a.finest_exp() > resolution {
            return Err(Error::Precondition(format!("jet resolution {resolution} is coarser than the closed set")));
        }
        let expected: u128 = a
            .balls()
            .iter()
            .map(|b| CosetEnumerator::new(b, resolution, COSET_CAP).map(|e| e.len()))
            .sum::<Result<u128>>()?;
        if jets.len() as u128 != expected {
            return Err(Error::Invalid(format!("{} jets for {expected} representatives of the closed set", jets.len())));
        }
        let (p, m) = (a.prime(), a.dim());
        let n = jets.first().map_or(0, |j| j.1.len());
        if n == 0 {
            return Err(Error::Invalid("jets need at least one output".into()));
        }
        let mut index = HashMap::with_capacity(jets.len());
        let mut first_in_ball = vec![usize::MAX; a.balls().len()];
        for (i, (z, ps)) in jets.iter().enumerate() {
            if z.prime() != p || ps.iter().any(|q| q.prime() != p) {
                return Err(Error::PrimeMismatch(p, z.prime()));
            }
            if z.dim() != m || ps.iter().any(|q| q.nvars() != m) {
                return Err(Error::DimensionMismatch { expected: m, got: z.dim() });
            }
            if ps.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: ps.len() });
            }
            if let Some(q) = ps.iter().find(|q| q.degree() > k + 1) {
                return Err(Error::Invalid(format!("jet at {z} has degree {} > {}", q.degree(), k + 1)));
            }
            let ball = a.containing(z)?.ok_or_else(|| Error::Invalid(format!("jet site {z} outside the closed set")))?;
            let rep = z.truncate(resolution, DEFAULT_PREC)?;
            if rep.key() != z.key() {
                return Err(Error::Invalid(format!("jet site {z} is not a grid representative")));
            }
            if index.insert(rep.key(), i).is_some() {
                return Err(Error::Invalid(format!("two jets at {z}")));
            }
            first_in_ball[ball] = first_in_ball[ball].min(i);
        }
        Ok(JetField { k, a, resolution, jets, index, first_in_ball })
    }

    /// Jets of `f` at all representatives of `A`, cosets in order and each
    /// enumerated canonically. `truncation` defaults to `k + 1`.
    pub fn from_function(
        f: &SymbolicFunction,
        a: CosetUnion,
        resolution: i64,
        k: u32,
        truncation: Option<u32>,
        schedule: &LimitSchedule,
    ) -> Result<Self> {
        let degree = truncation.unwrap_or(k + 1);
        let mut sites = Vec::new();
        for b in a.balls() {
            sites.extend(CosetEnumerator::new(b, resolution, COSET_CAP)?.collect());
        }
        let jets = sites
            .into_par_iter()
            .map(|z| {
                let ps = jet_from_function(f, &z, degree, schedule)?;
                Ok((z, ps))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, a, resolution, jets)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn closed_set(&self) -> &CosetUnion {
        &self.a
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn jets(&self) -> &[(PAdicVector, Vec<Poly>)] {
        &self.jets
    }

    pub fn prime(&self) -> u32 {
        self.a.prime()
    }

    pub fn dim_in(&self) -> usize {
        self.a.dim()
    }

    pub fn dim_out(&self) -> usize {
        self.jets[0].1.len()
    }

    pub fn site(&self, i: usize) -> &PAdicVector {
        &self.jets[i].0
    }

    pub fn poly(&self, i: usize) -> PolyMap<'_> {
        PolyMap(&self.jets[i].1)
    }

    /// Index of the jet whose grid coset contains `x ∈ A`.
    pub fn jet_at(&self, x: &PAdicVector) -> Result<Option<usize>> {
        if !self.a.contains(x)? {
            return Ok(None);
        }
        Ok(self.index.get(&x.truncate(self.resolution, DEFAULT_PREC)?.key()).copied())
    }

    /// `ψ(x)`: a jet site nearest to `x`, the first in jet order on ties.
    /// Inside `A` this is the site of `x`'s own grid coset.
    pub fn psi(&self, x: &PAdicVector) -> Result<usize> {
        if let Some(i) = self.jet_at(x)? {
            return Ok(i);
        }
        // outside A every site of a coset is at the coset's center distance
        let d = self.a.center_distances(x)?;
        let best = *d.iter().min().expect("nonempty");
        Ok(d.iter()
            .zip(&self.first_in_ball)
            .filter(|(di, _)| **di == best)
            .map(|(_, &i)| i)
            .min()
            .expect("nonempty"))
    }

    /// `ρ(S, δ)` over the sites `s`: the largest
    /// `|Φ̄ʲP_x(z; v; t) - Φ̄ʲP_z(z; v; t)| |x - z|^{j-k}` for
    /// `0 < |x - z| <= δ`, `j <= k`, with the supremum over `(v; t)` taken
    /// over the supplied directions of each order.
    pub fn rho(&self, s: &[usize], delta: Magnitude, directions: &[(Vec<PAdicVector>, Vec<PAdicNumber>)]) -> Result<Magnitude> {
        let p = self.prime();
        let mut best = Magnitude::zero(p);
        for &xi in s {
            for &zi in s {
                let (x, z) = (self.site(xi), self.site(zi));
                let d = x.dist(z)?;
                if d.is_zero() || d > delta {
                    continue;
                }
                let diff: Vec<Poly> = self.jets[xi].1.iter().zip(&self.jets[zi].1).map(|(a, b)| a.sub(b)).collect();
                let dm = PolyMap(&diff);
                let mut consider = |j: usize, val: Magnitude| {
                    best = best.max(val.mul(&pow_mag(d, j as i64 - self.k as i64)));
                };
                consider(0, dm.eval(z)?.magnitude());
                for (vs, ts) in directions {
                    if vs.len() > self.k as usize || vs.is_empty() {
                        continue;
                    }
                    let q = QuotientPoint::new(z.clone(), vs.clone(), ts.clone())?;
                    consider(vs.len(), phin(&dm, &q)?.magnitude());
                }
            }
        }
        Ok(best)
    }
}

/// `m^e` for an integer `e` of either sign, `m` nonzero.
fn pow_mag(m: Magnitude, e: i64) -> Magnitude {
    let base = m.exponent().expect("nonzero magnitude");
    Magnitude::pow(m.prime(), base * Exponent::from_integer(e))
}

#[derive(Serialize, Deserialize)]
struct JetFieldJson {
    k: u32,
    #[serde(rename = "A")]
    a: CosetUnion,
    resolution: i64,
    jets: Vec<(PAdicVector, Vec<Poly>)>,
}

impl Serialize for JetField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetFieldJson { k: self.k, a: self.a.clone(), resolution: self.resolution, jets: self.jets.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = JetFieldJson::deserialize(d)?;
        JetField::new(j.k, j.a, j.resolution, j.jets).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Ball;

    fn v(xs: &[i64]) -> PAdicVector {
        PAdicVector::from_ints(5, xs).unwrap()
    }

    fn f(src: &str) -> SymbolicFunction {
        SymbolicFunction::parse(5, src, None).unwrap()
    }

    fn same(ps: &[Poly], g: &SymbolicFunction, xs: &[PAdicVector]) -> bool {
        xs.iter().all(|x| eval_polys(ps, x).unwrap() == g.eval(x).unwrap())
    }

    #[test]
    fn affine_and_square_jets_reproduce() {
        let s = LimitSchedule::default();
        let probes: Vec<_> = [3, 11, -7, 40].iter().map(|&x| v(&[x])).collect();
        let aff = f("4*x0 - 9");
        for k in 0..3 {
            assert!(same(&jet_from_function(&aff, &v(&[2]), k + 1, &s).unwrap(), &aff, &probes));
        }
        let sq = f("x0^2");
        // z^2 + 2z(y - z) + (y - z)^2 = y^2
        let p = jet_from_function(&sq, &v(&[6]), 2, &s).unwrap();
        assert!(same(&p, &sq, &probes));
    }

    #[test]
    fn cube_truncated_to_degree_two() {
        let s = LimitSchedule::default();
        let z = v(&[2]);
        let p = jet_from_function(&f("x0^3"), &z, 2, &s).unwrap();
        // z^3 + 3z^2 (y-z) + 3z (y-z)^2 at z = 2
        let oracle = f("8 + 12*(x0 - 2) + 6*(x0 - 2)^2");
        assert!(same(&p, &oracle, &[v(&[0]), v(&[5]), v(&[-13])]));
        assert_eq!(eval_polys(&p, &z).unwrap(), v(&[8]));
        assert_eq!(p[0].degree(), 2);
    }

    #[test]
    fn limit_jets_of_locally_constant_parts() {
        // near z = 1 the indicator of 5Z_5 vanishes identically
        let s = LimitSchedule::default();
        let g = f("x0^2 + 7*ch(0;1)");
        let p = jet_from_function(&g, &v(&[1]), 2, &s).unwrap();
        assert!(same(&p, &f("x0^2"), &[v(&[2]), v(&[9])]));
        let g2 = SymbolicFunction::parse(5, "x0*x1 + ch(0|0;1)", None).unwrap();
        let p2 = jet_from_function(&g2, &v(&[1, 2]), 2, &s).unwrap();
        assert!(same(&p2, &SymbolicFunction::parse(5, "x0*x1", None).unwrap(), &[v(&[3, 4]), v(&[0, 7])]));
    }

    fn two_cosets() -> CosetUnion {
        CosetUnion::new(vec![Ball::new(v(&[0, 0]), 1), Ball::new(v(&[1, 2]), 1)]).unwrap()
    }

    #[test]
    fn field_from_polynomial() {
        let g = SymbolicFunction::parse(5, "x0^2*x1 - x1", None).unwrap();
        let jf = JetField::from_function(&g, two_cosets(), 2, 3, None, &LimitSchedule::default()).unwrap();
        assert_eq!(jf.jets().len(), 50);
        for (z, ps) in jf.jets() {
            assert_eq!(eval_polys(ps, z).unwrap(), g.eval(z).unwrap());
        }
        assert_eq!(jf.psi(&v(&[5, 10])).unwrap(), jf.jet_at(&v(&[5, 10])).unwrap().unwrap());
        // outside A, the first site of the nearest coset
        assert_eq!(jf.site(jf.psi(&v(&[3, 3])).unwrap()), &v(&[0, 0]));
        assert_eq!(jf.site(jf.psi(&v(&[1, 3])).unwrap()), &v(&[0, 0]));
        let j = serde_json::to_string(&jf).unwrap();
        assert!(j.starts_with("{\"k\":3,\"A\":["));
        let back: JetField = serde_json::from_str(&j).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), j);
    }

    #[test]
    fn field_validation() {
        let a = two_cosets();
        let jf = JetField::from_function(&SymbolicFunction::parse(5, "x0+x1", None).unwrap(), a.clone(), 1, 1, None, &LimitSchedule::default()).unwrap();
        let mut jets = jf.jets().to_vec();
        jets.pop();
        assert!(JetField::new(1, a.clone(), 1, jets).is_err());
        let mut moved = jf.jets().to_vec();
        moved[0].0 = v(&[2, 2]);
        assert!(JetField::new(1, a, 1, moved).is_err());
    }

    #[test]
    fn rho_vanishes_for_a_global_polynomial() {
        let g = SymbolicFunction::parse(5, "x0^3 + x1", None).unwrap();
        let jf = JetField::from_function(&g, two_cosets(), 2, 3, Some(3), &LimitSchedule::default()).unwrap();
        let dirs = vec![(vec![v(&[1, 0])], vec![PAdicNumber::from_int(5, 5, 12).unwrap()])];
        let all: Vec<usize> = (0..jf.jets().len()).collect();
        assert!(jf.rho(&all[..12], Magnitude::one(5), &dirs).unwrap().is_zero());
    }
}
