//! The glued extension `g` and the check `Φ̄ʲg = Φ̄ʲP_z` on the closed set.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::jets::JetField;
use super::partition::{build_h, disjoint_ball_family, PartitionFamily, WhitneyParams};
use crate::diffquot::{phin, QuotientPoint};
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::haar::{CosetEnumerator, GridFunction, COSET_CAP};
use crate::magnitude::{Exponent, Magnitude};
use crate::padic::{Ball, PAdicVector};

/// `g(x) = P_x(x)` on `A` and `g(x) = P_{ψ(y)}(x)` on `W`, where `y` is the
/// partition site whose support contains `x`.
#[derive(Clone, Debug)]
pub struct WhitneyExtension {
    jets: JetField,
    family: PartitionFamily,
    params: WhitneyParams,
    /// `ψ` of each partition site.
    site_jet: Vec<usize>,
}

pub fn whitney_extend(jets: &JetField, domain: &Ball, k: i64, params: &WhitneyParams) -> Result<WhitneyExtension> {
    let h = build_h(jets.closed_set(), params)?;
    let family = disjoint_ball_family(&h, domain, k)?;
    let site_jet = family.sites().par_iter().map(|y| jets.psi(y)).collect::<Result<Vec<_>>>()?;
    Ok(WhitneyExtension { jets: jets.clone(), family, params: *params, site_jet })
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionCheck {
    /// Grid points of `W` examined.
    pub points: usize,
    /// `Σ_y w_y(x) = 1` at every point.
    pub unity: bool,
    /// The sum form `Σ_y w_y(x) P_{ψ(y)}(x)` agrees with the single-site form.
    pub glue_agrees: bool,
    pub witness: Option<PAdicVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingScan {
    pub points: usize,
    pub ratio_ok: bool,
    pub card_ok: bool,
    pub witness: Option<PAdicVector>,
}

impl WhitneyExtension {
    pub fn jets(&self) -> &JetField {
        &self.jets
    }

    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    pub fn params(&self) -> &WhitneyParams {
        &self.params
    }

    /// Index of the jet `g` uses at `x`.
    pub fn jet_used(&self, x: &PAdicVector) -> Result<usize> {
        if !self.family.domain().contains(x)? {
            return Err(Error::DomainEscape);
        }
        match self.jets.jet_at(x)? {
            Some(i) => Ok(i),
            None => Ok(self.site_jet[self.family.site_for(x)?]),
        }
    }

    /// `Σ_y w_y(x) P_{ψ(y)}(x)` for `x ∈ W`.
    pub fn glue_sum(&self, x: &PAdicVector) -> Result<PAdicVector> {
        let mut acc = PAdicVector::zeros(self.prime(), self.dim_out());
        for (i, w) in self.family.partition_weights(x)? {
            let term = self.jets.poly(self.site_jet[i]).eval(x)?;
            for _ in 0..w {
                acc = acc.try_add(&term)?;
            }
        }
        Ok(acc)
    }

    fn grid_points(&self) -> Result<Vec<PAdicVector>> {
        Ok(CosetEnumerator::new(self.family.domain(), self.family.resolution(), COSET_CAP)?.collect())
    }

    /// `g` tabulated at every grid representative of the working domain.
    pub fn grid(&self) -> Result<GridFunction> {
        GridFunction::sample(self, self.family.domain(), self.family.resolution())
    }

    pub fn eval_queries(&self, queries: &[PAdicVector]) -> Result<Vec<PAdicVector>> {
        queries.par_iter().map(|x| self.eval(x)).collect()
    }

    /// Partition of unity and glue-form agreement at every grid point of `W`.
    pub fn partition_check(&self) -> Result<PartitionCheck> {
        let a = self.jets.closed_set();
        let w: Vec<PAdicVector> = self.grid_points()?.into_iter().filter(|x| !a.contains(x).unwrap_or(true)).collect();
        let flags = w
            .par_iter()
            .map(|x| {
                let unity = self.family.partition_weights(x)?.iter().map(|(_, w)| w).sum::<u32>() == 1;
                let agrees = self.glue_sum(x)?.identical(&self.eval(x)?);
                Ok((unity, agrees))
            })
            .collect::<Result<Vec<_>>>()?;
        let bad = flags.iter().position(|(u, g)| !(u & g));
        Ok(PartitionCheck {
            points: w.len(),
            unity: flags.iter().all(|f| f.0),
            glue_agrees: flags.iter().all(|f| f.1),
            witness: bad.map(|i| w[i].clone()),
        })
    }

    /// Packing bounds for the family with radius function `π h` at every
    /// grid point of `W`.
    pub fn packing_scan(&self, alpha: BigRational, beta: BigRational) -> Result<PackingScan> {
        let pf = self.family.packing_family(&self.params, alpha, beta)?;
        let a = self.jets.closed_set();
        let queries = self
            .grid_points()?
            .into_iter()
            .filter(|x| !a.contains(x).unwrap_or(true))
            .map(|x| {
                let hx = self.family.pi_h(&x)?;
                Ok((x, hx))
            })
            .collect::<Result<Vec<_>>>()?;
        let reports = pf.reports(&queries)?;
        let bad = reports.iter().position(|r| !(r.ratio_ok && r.card_ok));
        Ok(PackingScan {
            points: queries.len(),
            ratio_ok: reports.iter().all(|r| r.ratio_ok),
            card_ok: reports.iter().all(|r| r.card_ok),
            witness: bad.map(|i| queries[i].0.clone()),
        })
    }
}

impl PointFunction for WhitneyExtension {
    fn prime(&self) -> u32 {
        self.jets.prime()
    }

    fn dim_in(&self) -> usize {
        self.jets.dim_in()
    }

    fn dim_out(&self) -> usize {
        self.jets.dim_out()
    }

    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector> {
        self.jets.poly(self.jet_used(x)?).eval(x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WhitneyRow {
    pub j: usize,
    pub samples: usize,
    /// `max |Φ̄ʲg - Φ̄ʲP_z|` over the samples of order `j`.
    pub max_error: Magnitude,
    /// Largest estimate `|j!|^{-1} |t|^{-j} max_S |g(x_S) - P_z(x_S)|`.
    pub max_bound: Magnitude,
}

#[derive(Clone, Debug, Serialize)]
pub struct WhitneyReport {
    pub rows: Vec<WhitneyRow>,
    /// Every observed error is within its estimate.
    pub dominated: bool,
    /// First sample whose error exceeds its estimate.
    pub witness: Option<usize>,
}

impl WhitneyReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,samples,max_error,max_bound\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{}\n", r.j, r.samples, r.max_error, r.max_bound));
        }
        s
    }

    pub fn max_error(&self) -> Option<Magnitude> {
        self.rows.iter().map(|r| r.max_error).max()
    }
}

/// `|n!|^{-1}`.
fn inv_factorial_norm(p: u32, n: usize) -> Magnitude {
    let mut v = 0i64;
    let mut q = p as usize;
    while q <= n {
        v += (n / q) as i64;
        q *= p as usize;
    }
    Magnitude::from_valuation(p, Some(-v))
}

fn vertices(q: &QuotientPoint) -> Result<Vec<PAdicVector>> {
    let mut out = vec![q.x.clone()];
    for (v, t) in q.vs.iter().zip(&q.ts) {
        let step = v.scale(t)?;
        let moved = out.iter().map(|x| x.try_add(&step)).collect::<Result<Vec<_>>>()?;
        out.extend(moved);
    }
    Ok(out)
}

/// Compares `Φ̄ʲg(z; v; t)` with `Φ̄ʲP_z(z; v; t)` at sampled points of
/// `V_z^{(j)}`: `z` a jet site, `|v_i| = 1`, all `|t_i|` equal, `j <= k`.
/// The estimate follows from expanding `Φ̄ʲ(g - P_z)` over the `2^j`
/// vertices `x_S = z + Σ_{i∈S} v_i t_i`.
pub fn verify_whitney<G: PointFunction>(g: &G, jets: &JetField, samples: &[QuotientPoint]) -> Result<WhitneyReport> {
    let p = jets.prime();
    let k = jets.k() as usize;
    let one = Magnitude::one(p);
    let per = samples
        .par_iter()
        .enumerate()
        .map(|(n, q)| -> Result<(usize, Magnitude, Magnitude)> {
            let outside = |why: &str| Error::Precondition(format!("sample {n} outside V_z: {why}"));
            let zi = jets.jet_at(&q.x)?.ok_or_else(|| outside("base point not in the closed set"))?;
            if jets.site(zi).key() != q.x.key() {
                return Err(outside("base point is not a jet site"));
            }
            let j = q.order();
            if j > k {
                return Err(outside("order exceeds k"));
            }
            if q.vs.iter().any(|v| v.magnitude() != one) {
                return Err(outside("|v_i| != 1"));
            }
            let tau = q.ts.first().map(|t| t.magnitude());
            if q.ts.iter().any(|t| t.is_zero() || Some(t.magnitude()) != tau) {
                return Err(outside("increments must be nonzero with equal norms"));
            }
            let pz = jets.poly(zi);
            let err = phin(g, q)?.dist(&phin(&pz, q)?)?;
            let mut mismatch = Magnitude::zero(p);
            for x in vertices(q)? {
                mismatch = mismatch.max(g.eval(&x)?.dist(&pz.eval(&x)?)?);
            }
            let scale = match tau {
                Some(t) => {
                    let e = t.exponent().expect("nonzero increment");
                    Magnitude::pow(p, -e * Exponent::from_integer(j as i64)).mul(&inv_factorial_norm(p, j))
                }
                None => one,
            };
            Ok((j, err, mismatch.mul(&scale)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<WhitneyRow> = (0..=k)
        .map(|j| WhitneyRow { j, samples: 0, max_error: Magnitude::zero(p), max_bound: Magnitude::zero(p) })
        .collect();
    for (j, err, bound) in &per {
        let r = &mut rows[*j];
        r.samples += 1;
        r.max_error = r.max_error.max(*err);
        r.max_bound = r.max_bound.max(*bound);
    }
    let witness = per.iter().position(|(_, e, b)| e > b);
    Ok(WhitneyReport { rows, dominated: witness.is_none(), witness })
}
