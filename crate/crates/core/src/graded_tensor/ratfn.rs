use std::fmt;

use super::poly::Poly;
use super::ring::Ring;
use super::scalar::ExactScalar;

/// Reduced fraction of polynomials in λ. The denominator is monic and coprime to
/// the numerator, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatFnError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at {0}")]
    Pole(ExactScalar),
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatFnError> {
        if den.is_zero() {
            return Err(RatFnError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::default()));
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().inv().unwrap();
        Ok(RationalFunction { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Ring::one() }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn eval(&self, x: &ExactScalar) -> Result<ExactScalar, RatFnError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(RatFnError::Pole(x.clone()));
        }
        Ok(&self.num.eval(x) / &d)
    }

    pub fn eval_f64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn inv(&self) -> Result<Self, RatFnError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, RatFnError> {
        Ok(Ring::mul(self, &o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = <Self as Ring>::one();
        for _ in 0..e {
            acc = Ring::mul(&acc, self);
        }
        acc
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(Poly::default())
    }
    fn one() -> Self {
        Self::from_poly(Ring::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFunction::new(Ring::add(&self.num, &o.num), self.den.clone()).unwrap();
        }
        let n = Ring::add(&Ring::mul(&self.num, &o.den), &Ring::mul(&o.num, &self.den));
        RationalFunction::new(n, Ring::mul(&self.den, &o.den)).unwrap()
    }
    fn sub(&self, o: &Self) -> Self {
        Ring::add(self, &Ring::neg(o))
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::new(Ring::mul(&self.num, &o.num), Ring::mul(&self.den, &o.den)).unwrap()
    }
    fn neg(&self) -> Self {
        RationalFunction { num: Ring::neg(&self.num), den: self.den.clone() }
    }
    fn from_exact(x: &ExactScalar) -> Self {
        Self::constant(x.clone())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        // (2λ+2)/(4λ+4) reduces to 1/2 with denominator 1
        let n = Poly::linear(ExactScalar::int(2), ExactScalar::int(2));
        let d = Poly::linear(ExactScalar::int(4), ExactScalar::int(4));
        let r = RationalFunction::new(n, d).unwrap();
        assert_eq!(r, RationalFunction::constant(ExactScalar::ratio(1, 2)));
        assert!(r.is_polynomial());
    }

    #[test]
    fn arithmetic_and_poles() {
        let x = RationalFunction::x();
        let one = <RationalFunction as Ring>::one();
        let r = one.div(&Ring::add(&x, &one)).unwrap(); // 1/(λ+1)
        let back = Ring::mul(&r, &Ring::add(&x, &one));
        assert_eq!(back, one);
        assert!(matches!(r.eval(&ExactScalar::int(-1)), Err(RatFnError::Pole(_))));
        assert_eq!(r.eval(&ExactScalar::int(1)).unwrap(), ExactScalar::ratio(1, 2));
    }
}
