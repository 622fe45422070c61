//! Seeded randomized runs of the quotient identities.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::expr::{Expr, SymbolicFunction};
use super::identities::{chain_rule_check, product_rule_check, telescope_check, IdentityCheck};
use crate::error::Result;
use crate::padic::{Ball, PAdicNumber, PAdicVector, DEFAULT_PREC};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Polynomial,
    Indicator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    Chain,
    Telescope,
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityWitness {
    pub functions: Vec<String>,
    pub point: PAdicVector,
    pub direction: PAdicVector,
    pub t: PAdicNumber,
    pub check: IdentityCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityTally {
    pub identity: Identity,
    pub family: Family,
    pub samples: usize,
    pub passed: usize,
    pub first_failure: Option<IdentityWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySuite {
    pub p: u32,
    pub seed: u64,
    pub tallies: Vec<IdentityTally>,
}

impl IdentitySuite {
    pub fn all_pass(&self) -> bool {
        self.tallies.iter().all(|t| t.passed == t.samples)
    }
}

struct Instance {
    f: SymbolicFunction,
    g: SymbolicFunction,
    x: PAdicVector,
    v: PAdicVector,
    t: PAdicNumber,
}

fn int(p: u32, n: i64) -> PAdicNumber {
    PAdicNumber::from_int(p, n, DEFAULT_PREC).expect("small integer")
}

fn random_poly(rng: &mut ChaCha8Rng, p: u32, m: usize, max_deg: u32) -> Expr {
    let terms = rng.gen_range(1..=3);
    let mut acc: Option<Expr> = None;
    for _ in 0..terms {
        let mut mono = Expr::constant(int(p, rng.gen_range(-20..=20)));
        for i in 0..m {
            let e = rng.gen_range(0..=max_deg);
            if e > 0 {
                mono = Expr::mul(mono, Expr::pow(Expr::var(i), e));
            }
        }
        acc = Some(match acc {
            None => mono,
            Some(a) => Expr::add(a, mono),
        });
    }
    acc.expect("at least one term")
}

fn random_indicator(rng: &mut ChaCha8Rng, p: u32, m: usize) -> Expr {
    let center: Vec<i64> = (0..m).map(|_| rng.gen_range(0..(p as i64).pow(3))).collect();
    let ball = Ball::new(PAdicVector::from_ints(p, &center).expect("valid prime"), rng.gen_range(0..=3));
    let scaled = Expr::mul(Expr::Indicator(ball), random_poly(rng, p, m, 1));
    Expr::add(scaled, random_poly(rng, p, m, 1))
}

fn random_expr(rng: &mut ChaCha8Rng, p: u32, m: usize, family: Family) -> Expr {
    match family {
        Family::Polynomial => random_poly(rng, p, m, 3),
        Family::Indicator => random_indicator(rng, p, m),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, p: u32, m: usize, nonzero: bool) -> PAdicVector {
    loop {
        let xs: Vec<i64> = (0..m).map(|_| rng.gen_range(-200..=200)).collect();
        if !nonzero || xs.iter().any(|&x| x != 0) {
            return PAdicVector::from_ints(p, &xs).expect("valid prime");
        }
    }
}

fn random_increment(rng: &mut ChaCha8Rng, p: u32) -> PAdicNumber {
    let unit = int(p, rng.gen_range(1..p as i64));
    let scale = PAdicNumber::p_pow(p, rng.gen_range(0..=3), DEFAULT_PREC).expect("valid prime");
    unit.try_mul(&scale).expect("same prime")
}

fn instance(rng: &mut ChaCha8Rng, p: u32, identity: Identity, family: Family) -> Instance {
    let m = rng.gen_range(1..=3);
    match identity {
        Identity::Chain => {
            // u: Q_p -> Q_p^m, f: Q_p^m -> Q_p
            let us = (0..m).map(|_| random_expr(rng, p, 1, family)).collect();
            let u = SymbolicFunction::new(p, 1, us).expect("arity checked");
            let f = SymbolicFunction::new(p, m, vec![random_expr(rng, p, m, family)]).expect("arity checked");
            let x = random_vector(rng, p, 1, false);
            let v = random_vector(rng, p, 1, true);
            Instance { f, g: u, x, v, t: random_increment(rng, p) }
        }
        Identity::Telescope | Identity::Product => {
            let f = SymbolicFunction::new(p, m, vec![random_expr(rng, p, m, family)]).expect("arity checked");
            let g = SymbolicFunction::new(p, m, vec![random_expr(rng, p, m, family)]).expect("arity checked");
            let x = random_vector(rng, p, m, false);
            let v = random_vector(rng, p, m, true);
            Instance { f, g, x, v, t: random_increment(rng, p) }
        }
    }
}

fn run(identity: Identity, c: &Instance) -> Result<IdentityCheck> {
    match identity {
        Identity::Chain => chain_rule_check(&c.f, &c.g, &c.x, &c.v, &c.t),
        Identity::Telescope => telescope_check(&c.f, &c.x, &c.v, &c.t),
        Identity::Product => product_rule_check(&c.f, &c.g, &c.x, &c.v, &c.t),
    }
}

fn describe(f: &SymbolicFunction) -> String {
    f.outputs().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs every identity on `samples` random instances per function family.
/// Instances are drawn sequentially from one ChaCha stream, so the report
/// depends only on `(p, seed, samples)`.
pub fn identity_suite(p: u32, seed: u64, samples: usize) -> Result<IdentitySuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = Vec::new();
    for identity in [Identity::Chain, Identity::Telescope, Identity::Product] {
        for family in [Family::Polynomial, Family::Indicator] {
            let batch: Vec<Instance> = (0..samples).map(|_| instance(&mut rng, p, identity, family)).collect();
            let checks = batch.par_iter().map(|c| run(identity, c)).collect::<Result<Vec<_>>>()?;
            let passed = checks.iter().filter(|c| c.equal).count();
            let first_failure = checks.iter().zip(&batch).find(|(c, _)| !c.equal).map(|(check, c)| IdentityWitness {
                functions: vec![describe(&c.f), describe(&c.g)],
                point: c.x.clone(),
                direction: c.v.clone(),
                t: c.t,
                check: check.clone(),
            });
            tallies.push(IdentityTally { identity, family, samples, passed, first_failure });
        }
    }
    Ok(IdentitySuite { p, seed, tallies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let s = identity_suite(5, 7, 40).unwrap();
        assert_eq!(s.tallies.len(), 6);
        assert!(s.all_pass(), "{:?}", s.tallies.iter().find(|t| t.first_failure.is_some()));
    }

    #[test]
    fn seeded() {
        let a = serde_json::to_string(&identity_suite(3, 1, 10).unwrap()).unwrap();
        let b = serde_json::to_string(&identity_suite(3, 1, 10).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
