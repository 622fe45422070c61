use crate::error::Result;
use crate::padic::PAdicVector;

/// A map `Q_p^m ⊇ D -> Q_p^n` that can be evaluated pointwise.
pub trait PointFunction: Sync {
    fn prime(&self) -> u32;
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector>;
}

impl<F: PointFunction + ?Sized> PointFunction for &F {
    fn prime(&self) -> u32 {
        (**self).prime()
    }
    fn dim_in(&self) -> usize {
        (**self).dim_in()
    }
    fn dim_out(&self) -> usize {
        (**self).dim_out()
    }
    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector> {
        (**self).eval(x)
    }
}
