use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{sp_re_residual, KFamily};
use crate::graded_tensor::{det, rank, DenseExact, ExactScalar, GradingSignature, OpMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum SpClass {
    /// K ∝ iξ + λℰ with ℰ² = 𝕀; counts of the ℰ eigenvalues −1 and +1.
    Diagonalizable { minus: usize, plus: usize },
    /// K ∝ iξ + λℰ with ℰ² = 0, ℰ ≠ 0.
    Nilpotent,
    /// Fails the reflection equation.
    NotASolution,
    /// Solves the reflection equation but fits neither shape.
    Unclassified { reason: String },
}

impl SpClass {
    pub fn label(&self) -> String {
        match self {
            SpClass::Diagonalizable { minus, plus } => format!("diagonalizable(-1:{minus},+1:{plus})"),
            SpClass::Nilpotent => "nilpotent".into(),
            SpClass::NotASolution => "not_a_solution".into(),
            SpClass::Unclassified { reason } => format!("unclassified({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpClassification {
    pub class: SpClass,
    /// Fitted K(λ) = A + λB.
    pub family: KFamily,
    /// ξ in the gauge where ℰ has eigenvalues ±1 (or ℰ is nilpotent with c = 1),
    /// when it is an exact Gaussian rational.
    pub xi: Option<ExactScalar>,
    pub xi_float: Option<Complex64>,
    /// rank(B), rank(B²), … until it stabilises.
    pub rank_sequence: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("need at least two samples with distinct λ")]
    TooFewSamples,
    #[error("samples are not linear in λ")]
    NotLinear,
    #[error("sample matrices have inconsistent shapes")]
    Shape,
    #[error("K(λ) is singular for generic λ")]
    NotInvertible,
}

/// Classifies a K-matrix given by exact samples `(λ_k, K(λ_k))`.
pub fn classify_sp(sig: &GradingSignature, samples: &[(ExactScalar, OpMatrix<ExactScalar>)]) -> Result<SpClassification, ClassifyError> {
    let d = sig.dim();
    if samples.iter().any(|(_, k)| k.d() != d || k.slots() != 1) {
        return Err(ClassifyError::Shape);
    }
    let (l0, k0) = samples.first().ok_or(ClassifyError::TooFewSamples)?;
    let (l1, k1) = samples.iter().find(|(l, _)| l != l0).ok_or(ClassifyError::TooFewSamples)?;
    let step = (l1 - l0).inv().expect("distinct samples");
    let b = k1.sub(k0).scale(&step);
    let a = k0.sub(&b.scale(l0));
    let family = KFamily { a, b };
    if samples.iter().any(|(l, k)| &family.at_exact(l) != k) {
        return Err(ClassifyError::NotLinear);
    }
    classify_family(sig, &family)
}

fn is_generically_invertible(k: &KFamily) -> bool {
    // det(A + λB) has degree ≤ d, so d+1 non-roots suffice to rule out the zero polynomial.
    (0..=k.dim() as i64).any(|t| !det(&DenseExact::from_op(&k.at_exact(&ExactScalar::ratio(2 * t + 1, 7)))).is_zero())
}

fn scalar_multiple(m: &OpMatrix<ExactScalar>) -> Option<ExactScalar> {
    let c = m.get(0, 0);
    (*m == OpMatrix::scalar(m.d(), 1, c.clone())).then_some(c)
}

/// `Some(M)` when both A and B are multiples of one matrix M.
fn proportional_base(a: &OpMatrix<ExactScalar>, b: &OpMatrix<ExactScalar>) -> Option<OpMatrix<ExactScalar>> {
    if b.is_zero() {
        return Some(a.clone());
    }
    let (r, c, v) = b.entries().next()?;
    let s = &a.get(r, c) / v;
    (*a == b.scale(&s)).then(|| b.clone())
}

fn trace(m: &OpMatrix<ExactScalar>) -> ExactScalar {
    (0..m.dim()).fold(ExactScalar::zero(), |acc, i| &acc + &m.get(i, i))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Exact square root in Q(i), when one exists.
pub(crate) fn gaussian_sqrt(z: &ExactScalar) -> Option<ExactScalar> {
    if z.im.is_zero() {
        return if z.re.is_negative() {
            rational_sqrt(&-z.re.clone()).map(ExactScalar::imag)
        } else {
            rational_sqrt(&z.re).map(ExactScalar::real)
        };
    }
    // (x+iy)² = z: x² = (re + |z|)/2, y = im/(2x).
    let modulus = rational_sqrt(&z.norm_sqr())?;
    let two = BigRational::from_integer(2.into());
    let x = rational_sqrt(&((&z.re + &modulus) / &two))?;
    let y = &z.im / (&two * &x);
    Some(ExactScalar::new(x, y))
}

fn rank_sequence(b: &OpMatrix<ExactScalar>) -> Vec<usize> {
    let mut seq = Vec::new();
    let mut p = b.clone();
    loop {
        let r = rank(&DenseExact::from_op(&p));
        let done = seq.last() == Some(&r) || r == 0;
        seq.push(r);
        if done || seq.len() > b.dim() + 1 {
            return seq;
        }
        p = p.mul(b);
    }
}

/// Classifies an already fitted family A + λB.
pub fn classify_family(sig: &GradingSignature, family: &KFamily) -> Result<SpClassification, ClassifyError> {
    if !is_generically_invertible(family) {
        return Err(ClassifyError::NotInvertible);
    }
    let d = sig.dim();
    let ranks = rank_sequence(&family.b);
    let mut out = SpClassification { class: SpClass::NotASolution, family: family.clone(), xi: None, xi_float: None, rank_sequence: ranks };
    if !sp_re_residual(family, sig).is_zero() {
        return Ok(out);
    }
    let unclassified = |reason: &str| SpClass::Unclassified { reason: reason.into() };
    // K ↦ f(λ)K preserves the equation. K = (p + qλ)M is the ξ = 0 shape λM
    // up to such a factor.
    let (a, b_eff) = match scalar_multiple(&family.a) {
        Some(a) => (a, family.b.clone()),
        None => match proportional_base(&family.a, &family.b) {
            Some(m) => (ExactScalar::zero(), m),
            None => {
                out.class = unclassified("constant part is not scalar");
                return Ok(out);
            }
        },
    };
    let b = &b_eff;
    if b.is_zero() {
        out.class = SpClass::Diagonalizable { minus: 0, plus: d };
        return Ok(out);
    }
    let b2 = b.mul(b);
    if b2.is_zero() {
        out.class = SpClass::Nilpotent;
        let xi = &a * &(-ExactScalar::i());
        out.xi_float = Some(xi.to_complex());
        out.xi = Some(xi);
        return Ok(out);
    }
    let Some(beta) = scalar_multiple(&b2) else {
        out.class = unclassified("B^2 is neither zero nor scalar");
        return Ok(out);
    };
    let tr = trace(b);
    // B = cℰ with c² = β and tr ℰ = plus − minus.
    let ratio = &(&tr * &tr) / &beta;
    let k = ratio
        .im
        .is_zero()
        .then(|| rational_sqrt(&ratio.re))
        .flatten()
        .filter(|r| r.is_integer())
        .and_then(|r| r.to_integer().to_usize())
        .filter(|&k| k <= d && (d - k).is_multiple_of(2));
    let Some(k) = k else {
        out.class = unclassified("trace is incompatible with B^2 = beta");
        return Ok(out);
    };
    let c_float = beta.to_complex().sqrt();
    let signed = (tr.to_complex() / c_float).re;
    let diff = if signed < 0.0 { -(k as i64) } else { k as i64 };
    let plus = ((d as i64 + diff) / 2) as usize;
    out.class = SpClass::Diagonalizable { minus: d - plus, plus };
    let xi_f = a.to_complex() / (Complex64::i() * c_float);
    out.xi_float = Some(xi_f);
    if let Some(c) = gaussian_sqrt(&beta) {
        // Align with the principal branch used for the sign above.
        let c = if (c.to_complex() - c_float).norm() < 1e-9 * c_float.norm().max(1.0) { c } else { -c };
        out.xi = (&ExactScalar::i() * &c).inv().map(|ic| &a * &ic);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflection::{broken_two_parameter_k, build_sp_k, BoundarySpec, SpBoundary, SpShape};

    fn samples(k: &KFamily) -> Vec<(ExactScalar, OpMatrix<ExactScalar>)> {
        (0..3).map(|t| {
            let l = ExactScalar::int(t);
            let m = k.at_exact(&l);
            (l, m)
        }).collect()
    }

    #[test]
    fn sl2_blocks_classify() {
        let sig = GradingSignature::sl(2);
        let xi = ExactScalar::ratio(3, 2);
        let k = build_sp_k(&BoundarySpec::sp_blocks([1, 1, 0, 0], xi.clone()), &sig).unwrap();
        let c = classify_sp(&sig, &samples(&k)).unwrap();
        assert_eq!(c.class, SpClass::Diagonalizable { minus: 1, plus: 1 });
        assert_eq!(c.xi, Some(xi));
    }

    #[test]
    fn identity_and_nilpotent() {
        let sig = GradingSignature::sl(3);
        let c = classify_sp(&sig, &samples(&KFamily::identity(3))).unwrap();
        assert_eq!(c.class, SpClass::Diagonalizable { minus: 0, plus: 3 });
        let mut e = DenseExact::zeros(3, 3);
        e.set(0, 2, ExactScalar::int(2));
        let spec = BoundarySpec::Sp(SpBoundary { xi: ExactScalar::int(1), shape: SpShape::Nilpotent(e), conjugator: None });
        let k = build_sp_k(&spec, &sig).unwrap();
        let c = classify_sp(&sig, &samples(&k)).unwrap();
        assert_eq!(c.class, SpClass::Nilpotent);
        assert_eq!(c.rank_sequence, vec![1, 0]);
    }

    #[test]
    fn broken_is_rejected() {
        let sig = GradingSignature::sl(3);
        let k = broken_two_parameter_k(&ExactScalar::int(1), &ExactScalar::int(2));
        assert_eq!(classify_sp(&sig, &samples(&k)).unwrap().class, SpClass::NotASolution);
    }

    #[test]
    fn errors() {
        let sig = GradingSignature::sl(2);
        let one = vec![(ExactScalar::int(0), OpMatrix::identity(2, 1))];
        assert_eq!(classify_sp(&sig, &one), Err(ClassifyError::TooFewSamples));
        let mut s = samples(&KFamily::identity(2));
        s[2].1 = OpMatrix::scalar(2, 1, ExactScalar::int(5));
        assert_eq!(classify_sp(&sig, &s), Err(ClassifyError::NotLinear));
        let zero = KFamily::constant(OpMatrix::zero(2, 1));
        assert_eq!(classify_family(&sig, &zero), Err(ClassifyError::NotInvertible));
    }
}
