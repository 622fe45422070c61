use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::measure::{CosetEnumerator, COSET_CAP};
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::padic::{Ball, CosetKey, PAdicVector, DEFAULT_PREC};

/// A function constant on the radius-`p^{-K}` cosets of a ball, stored as
/// one value per canonical coset representative.
#[derive(Clone, Debug)]
pub struct GridFunction {
    domain: Ball,
    resolution: i64,
    dims: (usize, usize),
    table: Vec<(PAdicVector, PAdicVector)>,
    index: HashMap<CosetKey, usize>,
}

impl GridFunction {
    /// Samples `f` at every coset representative of `domain` at resolution `k`.
    pub fn from_fn<F>(domain: &Ball, k: i64, dim_out: usize, f: F) -> Result<Self>
    where
        F: Fn(&PAdicVector) -> Result<PAdicVector> + Sync,
    {
        let domain = domain.canonical()?;
        let e = CosetEnumerator::new(&domain, k, COSET_CAP)?;
        let reps = e.collect();
        let values = reps.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
        Self::from_table(domain, k, dim_out, reps.into_iter().zip(values).collect())
    }

    /// Tabulates a [`PointFunction`] on `domain`.
    pub fn sample<F: PointFunction>(f: &F, domain: &Ball, k: i64) -> Result<Self> {
        Self::from_fn(domain, k, f.dim_out(), |x| f.eval(x))
    }

    pub fn from_table(
        domain: Ball,
        k: i64,
        dim_out: usize,
        table: Vec<(PAdicVector, PAdicVector)>,
    ) -> Result<Self> {
        let domain = domain.canonical()?;
        let expected = CosetEnumerator::new(&domain, k, COSET_CAP)?.len();
        if table.len() as u128 != expected {
            return Err(Error::Invalid(format!(
                "grid table has {} entries, expected {expected}",
                table.len()
            )));
        }
        let m = domain.dim();
        let mut index = HashMap::with_capacity(table.len());
        for (i, (rep, val)) in table.iter().enumerate() {
            if rep.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, got: rep.dim() });
            }
            if val.dim() != dim_out {
                return Err(Error::DimensionMismatch { expected: dim_out, got: val.dim() });
            }
            if !domain.contains(rep)? {
                return Err(Error::DomainEscape);
            }
            let key = rep.truncate(k, DEFAULT_PREC)?.key();
            if index.insert(key, i).is_some() {
                return Err(Error::Invalid(format!("duplicate coset representative {rep}")));
            }
        }
        Ok(GridFunction { domain, resolution: k, dims: (m, dim_out), table, index })
    }

    pub fn domain(&self) -> &Ball {
        &self.domain
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn table(&self) -> &[(PAdicVector, PAdicVector)] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Index of the table entry whose coset contains `x`.
    pub fn locate(&self, x: &PAdicVector) -> Result<usize> {
        if !self.domain.contains(x)? {
            return Err(Error::DomainEscape);
        }
        let key = x.truncate(self.resolution, DEFAULT_PREC)?.key();
        self.index.get(&key).copied().ok_or(Error::DomainEscape)
    }

    pub fn map_values<F>(&self, f: F) -> Result<GridFunction>
    where
        F: Fn(&PAdicVector, &PAdicVector) -> Result<PAdicVector> + Sync,
    {
        let values = self.table.par_iter().map(|(x, v)| f(x, v)).collect::<Result<Vec<_>>>()?;
        let dim_out = values.first().map_or(self.dims.1, |v| v.dim());
        let table = self.table.iter().map(|(x, _)| x.clone()).zip(values).collect();
        GridFunction::from_table(self.domain.clone(), self.resolution, dim_out, table)
    }
}

impl PointFunction for GridFunction {
    fn prime(&self) -> u32 {
        self.domain.prime()
    }

    fn dim_in(&self) -> usize {
        self.dims.0
    }

    fn dim_out(&self) -> usize {
        self.dims.1
    }

    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector> {
        Ok(self.table[self.locate(x)?].1.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    domain: Ball,
    resolution: i64,
    dims: [usize; 2],
    table: Vec<(PAdicVector, PAdicVector)>,
}

impl Serialize for GridFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridJson {
            domain: self.domain.clone(),
            resolution: self.resolution,
            dims: [self.dims.0, self.dims.1],
            table: self.table.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GridJson::deserialize(d)?;
        if j.dims[0] != j.domain.dim() {
            return Err(serde::de::Error::custom("dims do not match the domain"));
        }
        GridFunction::from_table(j.domain, j.resolution, j.dims[1], j.table)
            .map_err(serde::de::Error::custom)
    }
}
