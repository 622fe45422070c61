//! Exact algebraic identities between first difference quotients.

use serde::Serialize;

use super::quotient::phi1;
use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::padic::{PAdicNumber, PAdicVector};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub lhs: PAdicVector,
    pub rhs: PAdicVector,
    pub equal: bool,
}

impl IdentityCheck {
    fn new(lhs: PAdicVector, rhs: PAdicVector) -> Self {
        let equal = lhs == rhs;
        IdentityCheck { lhs, rhs, equal }
    }
}

fn sum_into(acc: &mut PAdicVector, term: &PAdicVector) -> Result<()> {
    *acc = acc.try_add(term)?;
    Ok(())
}

/// Chain rule for `f ∘ u`: `Φ̄¹(f∘u)(y;v;t)` against
/// `Σ_j Φ̄¹f(S_j; e_j; s_j) · (s_j / t)` where `s_j = u_j(y+vt) - u_j(y)`
/// and `S_j` takes coordinates `< j` from `u(y)` and the rest from `u(y+vt)`.
/// Terms with `s_j = 0` are 0.
pub fn chain_rule_check<F, U>(f: &F, u: &U, y: &PAdicVector, v: &PAdicVector, t: &PAdicNumber) -> Result<IdentityCheck>
where
    F: PointFunction + ?Sized,
    U: PointFunction + ?Sized,
{
    if t.is_zero() {
        return Err(Error::ZeroIncrement);
    }
    if u.dim_out() != f.dim_in() {
        return Err(Error::DimensionMismatch { expected: f.dim_in(), got: u.dim_out() });
    }
    let p = f.prime();
    let m = u.dim_out();
    let u0 = u.eval(y)?;
    let u1 = u.eval(&y.try_add(&v.scale(t)?)?)?;
    let lhs = {
        let d = f.eval(&u1)?.try_sub(&f.eval(&u0)?)?;
        PAdicVector::new(d.coords().iter().map(|c| c.try_div(t)).collect::<Result<_>>()?)?
    };
    let mut rhs = PAdicVector::zeros(p, f.dim_out());
    for j in 0..m {
        let s = u1.get(j).try_sub(u0.get(j))?;
        if s.is_zero() {
            continue;
        }
        let base = PAdicVector::new(
            (0..m).map(|k| if k <= j { *u0.get(k) } else { *u1.get(k) }).collect(),
        )?;
        let q = phi1(f, &base, &PAdicVector::basis(p, m, j), &s)?;
        let w = s.try_div(t)?;
        sum_into(&mut rhs, &q.scale(&w)?)?;
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Coordinate telescoping: `Φ̄¹f(x;v;t)` against
/// `Σ_i v_i Φ̄¹f(x + Σ_{k>i} e_k v_k t; e_i; v_i t)`, zero-multiplier terms 0.
pub fn telescope_check<F: PointFunction + ?Sized>(f: &F, x: &PAdicVector, v: &PAdicVector, t: &PAdicNumber) -> Result<IdentityCheck> {
    let lhs = phi1(f, x, v, t)?;
    let p = f.prime();
    let m = x.dim();
    let mut rhs = PAdicVector::zeros(p, f.dim_out());
    for i in 0..m {
        let vi = v.get(i);
        if vi.is_zero() {
            continue;
        }
        let mut base = x.clone();
        for k in i + 1..m {
            base = base.with_coord(k, base.get(k).try_add(&v.get(k).try_mul(t)?)?);
        }
        let q = phi1(f, &base, &PAdicVector::basis(p, m, i), &vi.try_mul(t)?)?;
        sum_into(&mut rhs, &q.scale(vi)?)?;
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Product rule: `Φ̄¹(fg)` against `Φ̄¹f · g(x+vt) + f(x) · Φ̄¹g` for scalar `f, g`.
pub fn product_rule_check<F, G>(f: &F, g: &G, x: &PAdicVector, v: &PAdicVector, t: &PAdicNumber) -> Result<IdentityCheck>
where
    F: PointFunction + ?Sized,
    G: PointFunction + ?Sized,
{
    if f.dim_out() != 1 || g.dim_out() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.dim_out().max(g.dim_out()) });
    }
    if t.is_zero() {
        return Err(Error::ZeroIncrement);
    }
    let moved = x.try_add(&v.scale(t)?)?;
    let (f0, f1) = (*f.eval(x)?.get(0), *f.eval(&moved)?.get(0));
    let (g0, g1) = (*g.eval(x)?.get(0), *g.eval(&moved)?.get(0));
    let lhs = f1.try_mul(&g1)?.try_sub(&f0.try_mul(&g0)?)?.try_div(t)?;
    let df = *phi1(f, x, v, t)?.get(0);
    let dg = *phi1(g, x, v, t)?.get(0);
    let rhs = df.try_mul(&g1)?.try_add(&f0.try_mul(&dg)?)?;
    Ok(IdentityCheck::new(PAdicVector::scalar(lhs), PAdicVector::scalar(rhs)))
}
