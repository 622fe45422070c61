use serde::Serialize;

use super::expr::SymbolicFunction;
use super::poly::Poly;
use super::quotient::{phin_limit, LimitSchedule};
use crate::error::Result;
use crate::function::PointFunction;
use crate::padic::{PAdicNumber, PAdicVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TaylorMethod {
    /// Coefficients read off the expanded polynomial.
    Polynomial,
    /// Coefficients from limits of difference quotients.
    Limit,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaylorReport {
    /// `Φ̄ʲf(y; h..h; 0..0)` for `j = 1..=n+1`, `h = x - y`.
    pub terms: Vec<PAdicVector>,
    pub sum: PAdicVector,
    /// `f(x) - sum`.
    pub residual: PAdicVector,
    pub method: TaylorMethod,
}

/// `f(y) + Σ_{j=1}^{n+1} Φ̄ʲf(y; x-y, .., x-y; 0, .., 0)` and its residual.
pub fn taylor_eval(f: &SymbolicFunction, n: usize, y: &PAdicVector, x: &PAdicVector, schedule: &LimitSchedule) -> Result<TaylorReport> {
    let h = x.try_sub(y)?;
    let (terms, method) = match Poly::from_function(f) {
        Ok(ps) => {
            let terms = (1..=n + 1)
                .map(|j| {
                    let hs = vec![h.clone(); j];
                    PAdicVector::new(ps.iter().map(|q| q.multilinear(y, &hs)).collect::<Result<Vec<PAdicNumber>>>()?)
                })
                .collect::<Result<Vec<_>>>()?;
            (terms, TaylorMethod::Polynomial)
        }
        Err(_) => {
            let terms = (1..=n + 1)
                .map(|j| Ok(phin_limit(f, y, &vec![h.clone(); j], schedule)?.value))
                .collect::<Result<Vec<_>>>()?;
            (terms, TaylorMethod::Limit)
        }
    };
    let mut sum = f.eval(y)?;
    for t in &terms {
        sum = sum.try_add(t)?;
    }
    let residual = f.eval(x)?.try_sub(&sum)?;
    Ok(TaylorReport { terms, sum, residual, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnitude::Magnitude;

    fn v(xs: &[i64]) -> PAdicVector {
        PAdicVector::from_ints(5, xs).unwrap()
    }

    #[test]
    fn polynomial_residuals_vanish() {
        let s = LimitSchedule::default();
        let affine = SymbolicFunction::parse(5, "3*x0 - 7", None).unwrap();
        assert!(taylor_eval(&affine, 0, &v(&[2]), &v(&[9]), &s).unwrap().residual.is_zero());
        let sq = SymbolicFunction::parse(5, "x0^2", None).unwrap();
        let r = taylor_eval(&sq, 1, &v(&[2]), &v(&[9]), &s).unwrap();
        assert!(r.residual.is_zero());
        assert_eq!(r.terms, vec![v(&[28]), v(&[49])]);
    }

    #[test]
    fn cubic_tail() {
        let s = LimitSchedule::default();
        let cube = SymbolicFunction::parse(5, "x0^3", None).unwrap();
        for k in 1..5 {
            let x = v(&[2 + 5i64.pow(k)]);
            let r = taylor_eval(&cube, 1, &v(&[2]), &x, &s).unwrap();
            // the tail is exactly (x - y)^3
            assert_eq!(r.residual, v(&[5i64.pow(3 * k)]));
            assert!(r.residual.magnitude() <= Magnitude::from_valuation(5, Some(3 * k as i64)));
        }
    }

    #[test]
    fn limit_method_for_non_polynomials() {
        let s = LimitSchedule::default();
        let g = SymbolicFunction::parse(5, "x0^2 * ch(0;0)", None).unwrap();
        let r = taylor_eval(&g, 1, &v(&[1]), &v(&[6]), &s).unwrap();
        assert_eq!(r.method, TaylorMethod::Limit);
        assert!(r.residual.is_zero());
    }
}
