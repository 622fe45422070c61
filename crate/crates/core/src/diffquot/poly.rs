//! Sparse multivariate polynomials with p-adic coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::expr::{Expr, SymbolicFunction};
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::padic::{PAdicNumber, PAdicVector};

#[derive(Clone, Debug)]
pub struct Poly {
    p: u32,
    nvars: usize,
    prec: u32,
    terms: BTreeMap<Vec<u32>, PAdicNumber>,
}

impl Poly {
    pub fn zero(p: u32, nvars: usize, prec: u32) -> Self {
        Poly { p, nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(c: PAdicNumber, nvars: usize, prec: u32) -> Self {
        let mut q = Self::zero(c.prime(), nvars, prec);
        q.insert(vec![0; nvars], c);
        q
    }

    pub fn var(p: u32, nvars: usize, i: usize, prec: u32) -> Result<Self> {
        let mut q = Self::zero(p, nvars, prec);
        let mut e = vec![0; nvars];
        e[i] = 1;
        q.insert(e, PAdicNumber::p_pow(p, 0, prec)?);
        Ok(q)
    }

    fn insert(&mut self, exps: Vec<u32>, c: PAdicNumber) {
        if c.is_exact_zero() {
            return;
        }
        let sum = match self.terms.remove(&exps) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PAdicNumber)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Drops every term of total degree above `degree`.
    pub fn truncate_degree(&self, degree: u32) -> Poly {
        let mut r = self.clone();
        r.terms.retain(|e, _| e.iter().sum::<u32>() <= degree);
        r
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.insert(e.clone(), *c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -*c;
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.p, self.nvars, self.prec);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.insert(e, *ca * *cb);
            }
        }
        r
    }

    pub fn scale(&self, c: &PAdicNumber) -> Result<Poly> {
        let mut r = Poly::zero(self.p, self.nvars, self.prec);
        for (e, a) in &self.terms {
            r.insert(e.clone(), a.try_mul(c)?);
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> Result<Poly> {
        let mut acc = Poly::constant(PAdicNumber::p_pow(self.p, 0, self.prec)?, self.nvars, self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Converts an indicator-free expression whose divisions are by constants.
    pub fn from_expr(e: &Expr, p: u32, nvars: usize, prec: u32) -> Result<Poly> {
        let not_poly = |what: &str| Error::Invalid(format!("not a polynomial: {what}"));
        Ok(match e {
            Expr::Const(c) => Poly::constant(*c, nvars, prec),
            Expr::Var(i) => {
                if *i >= nvars {
                    return Err(Error::DimensionMismatch { expected: nvars, got: i + 1 });
                }
                Poly::var(p, nvars, *i, prec)?
            }
            Expr::Neg(a) => Self::from_expr(a, p, nvars, prec)?.neg(),
            Expr::Add(a, b) => Self::from_expr(a, p, nvars, prec)?.add(&Self::from_expr(b, p, nvars, prec)?),
            Expr::Sub(a, b) => Self::from_expr(a, p, nvars, prec)?.sub(&Self::from_expr(b, p, nvars, prec)?),
            Expr::Mul(a, b) => Self::from_expr(a, p, nvars, prec)?.mul(&Self::from_expr(b, p, nvars, prec)?),
            Expr::Div(a, b) => {
                let d = Self::from_expr(b, p, nvars, prec)?;
                match d.as_constant() {
                    Some(c) => {
                        let inv = PAdicNumber::p_pow(p, 0, prec)?.try_div(&c)?;
                        Self::from_expr(a, p, nvars, prec)?.scale(&inv)?
                    }
                    None => return Err(not_poly("division by a non-constant")),
                }
            }
            Expr::Pow(a, n) => Self::from_expr(a, p, nvars, prec)?.pow(*n)?,
            Expr::Indicator(_) => return Err(not_poly("ball indicator")),
            Expr::Compose { outer, args } => {
                let inner = args.iter().map(|g| Self::from_expr(g, p, nvars, prec)).collect::<Result<Vec<_>>>()?;
                Self::from_expr(outer, p, args.len(), prec)?.substitute(&inner)?
            }
        })
    }

    /// Polynomials for every output of `f`, or an error if any is not polynomial.
    pub fn from_function(f: &SymbolicFunction) -> Result<Vec<Poly>> {
        f.outputs().iter().map(|e| Self::from_expr(e, f.prime(), f.dim_in(), f.prec())).collect()
    }

    pub fn as_constant(&self) -> Option<PAdicNumber> {
        match self.terms.len() {
            0 => Some(PAdicNumber::zero(self.p)),
            1 => self.terms.get(&vec![0; self.nvars]).copied(),
            _ => None,
        }
    }

    /// `P(q_0, ..., q_{n-1})` for polynomials `q_i` in a common variable set.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: images.len() });
        }
        let (nv, prec) = images.first().map_or((0, self.prec), |q| (q.nvars, q.prec));
        let mut r = Poly::zero(self.p, nv, prec);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(*c, nv, prec);
            for (q, &k) in images.iter().zip(e) {
                t = t.mul(&q.pow(k)?);
            }
            r = r.add(&t);
        }
        Ok(r)
    }

    pub fn eval(&self, x: &[PAdicNumber]) -> Result<PAdicNumber> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut acc = PAdicNumber::zero(self.p);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.try_mul(&xi.pow(k))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// The multilinear value `(1/n!) * [s_1 ... s_n] P(z + Σ s_i v_i)`, which
    /// is the `n`-th quotient of `P` at `z` with all increments vanishing.
    pub fn multilinear(&self, z: &PAdicVector, vs: &[PAdicVector]) -> Result<PAdicNumber> {
        let n = vs.len();
        let images = (0..self.nvars)
            .map(|k| {
                let mut q = Poly::constant(*z.get(k), n, self.prec);
                for (i, v) in vs.iter().enumerate() {
                    q = q.add(&Poly::var(self.p, n, i, self.prec)?.scale(v.get(k))?);
                }
                Ok(q)
            })
            .collect::<Result<Vec<_>>>()?;
        let expanded = self.substitute(&images)?;
        let coef = expanded.terms.get(&vec![1; n]).copied().unwrap_or(PAdicNumber::zero(self.p));
        let fact = PAdicNumber::from_int(self.p, (1..=n as i64).product(), self.prec)?;
        coef.try_div(&fact)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u32,
    nvars: usize,
    prec: u32,
    /// `[exponents, coefficient literal]` pairs in graded-lexicographic key order.
    terms: Vec<(Vec<u32>, String)>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            p: self.p,
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.to_literal())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let mut q = Poly::zero(j.p, j.nvars, j.prec);
        for (e, lit) in j.terms {
            if e.len() != j.nvars {
                return Err(D::Error::custom(format!("exponent vector of length {}, expected {}", e.len(), j.nvars)));
            }
            let c: PAdicNumber = lit.parse().map_err(D::Error::custom)?;
            if c.prime() != j.p {
                return Err(D::Error::custom(format!("coefficient {lit} is not {}-adic", j.p)));
            }
            q.insert(e, c);
        }
        Ok(q)
    }
}

/// Evaluates a list of output polynomials at a point.
pub fn eval_polys(ps: &[Poly], x: &PAdicVector) -> Result<PAdicVector> {
    PAdicVector::new(ps.iter().map(|q| q.eval(x.coords())).collect::<Result<_>>()?)
}
