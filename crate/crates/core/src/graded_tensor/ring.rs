use std::fmt::Debug;

use num_complex::Complex64;

use super::scalar::ExactScalar;

/// Commutative ring of matrix entries. Exact scalars, polynomials, rational
/// functions and complex floats all implement it so operator code is written once.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Embeds a constant.
    fn from_exact(x: &ExactScalar) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_exact(&ExactScalar::int(n))
    }

    fn imag_unit() -> Self {
        Self::from_exact(&ExactScalar::i())
    }

    fn add_assign(&mut self, o: &Self) {
        *self = Ring::add(self, o);
    }
}

impl Ring for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.to_complex()
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}
