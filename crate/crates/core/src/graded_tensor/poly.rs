use std::collections::BTreeMap;
use std::fmt;

use super::ring::Ring;
use super::scalar::ExactScalar;

/// Dense univariate polynomial in λ, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<ExactScalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate λ.
    pub fn x() -> Self {
        Poly::new(vec![ExactScalar::zero(), ExactScalar::one()])
    }

    /// `c0 + c1·λ`.
    pub fn linear(c0: ExactScalar, c1: ExactScalar) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    pub fn scale(&self, s: &ExactScalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactScalar::int(k as i64))
                .collect(),
        )
    }

    /// `p(a + b·λ)` for a linear substitution.
    pub fn compose_linear(&self, a: &ExactScalar, b: &ExactScalar) -> Poly {
        let inner = Poly::linear(a.clone(), b.clone());
        let mut acc = Poly::default();
        for c in self.coeffs.iter().rev() {
            acc = Ring::add(&Ring::mul(&acc, &inner), &Poly::constant(c.clone()));
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::default(), self.clone());
        }
        let mut q = vec![ExactScalar::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::default(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(ExactScalar::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
    fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
    fn from_exact(x: &ExactScalar) -> Self {
        Poly::constant(x.clone())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", c),
                1 => format!("({})λ", c),
                _ => format!("({})λ^{}", c, k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Sparse polynomial in (λ₁, λ₂), keyed by exponent pairs.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

impl BiPoly {
    pub fn constant(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        BiPoly { terms }
    }

    pub fn monomial(c: ExactScalar, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        BiPoly { terms }
    }

    /// `c0 + c1·λ₁ + c2·λ₂`.
    pub fn affine(c0: ExactScalar, c1: ExactScalar, c2: ExactScalar) -> Self {
        let mut p = BiPoly::constant(c0);
        p = Ring::add(&p, &BiPoly::monomial(c1, 1, 0));
        Ring::add(&p, &BiPoly::monomial(c2, 0, 1))
    }

    pub fn x() -> Self {
        BiPoly::monomial(ExactScalar::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(ExactScalar::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn eval(&self, x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for ((a, b), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(*a)) * &y.pow(*b));
        }
        acc
    }

    pub fn scale(&self, s: &ExactScalar) -> BiPoly {
        let mut out = BiPoly::default();
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(*k, c * s);
        }
        out
    }

    fn accumulate(&mut self, k: (u32, u32), c: ExactScalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

impl Ring for BiPoly {
    fn zero() -> Self {
        BiPoly::default()
    }
    fn one() -> Self {
        BiPoly::constant(ExactScalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.accumulate(*k, -c);
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = BiPoly::default();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.accumulate((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
    fn from_exact(x: &ExactScalar) -> Self {
        BiPoly::constant(x.clone())
    }
    fn add_assign(&mut self, o: &Self) {
        for (k, c) in &o.terms {
            self.accumulate(*k, c.clone());
        }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|((a, b), c)| format!("({})x^{}y^{}", c, a, b)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| ExactScalar::int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (λ+1)(λ-2) and (λ+1)(λ+3)
        let a = Ring::mul(&p(&[1, 1]), &p(&[-2, 1]));
        let b = Ring::mul(&p(&[1, 1]), &p(&[3, 1]));
        assert_eq!(Poly::gcd(&a, &b), p(&[1, 1]));
        let (q, r) = a.div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn compose_and_derivative() {
        let a = p(&[0, 0, 1]); // λ²
        let shifted = a.compose_linear(&ExactScalar::int(1), &ExactScalar::int(-1)); // (1-λ)²
        assert_eq!(shifted, p(&[1, -2, 1]));
        assert_eq!(a.derivative(), p(&[0, 2]));
    }

    #[test]
    fn bipoly_cancels() {
        let x = BiPoly::x();
        let y = BiPoly::y();
        let lhs = Ring::mul(&Ring::add(&x, &y), &Ring::sub(&x, &y));
        let rhs = Ring::sub(&Ring::mul(&x, &x), &Ring::mul(&y, &y));
        assert!(Ring::sub(&lhs, &rhs).is_zero());
        assert_eq!(lhs.eval(&ExactScalar::int(3), &ExactScalar::int(1)), ExactScalar::int(8));
    }
}
