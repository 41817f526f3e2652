//! R(λ) = λ𝕀 + iP, its conjugate R̄(λ) = R^{t₁}(−λ−iρ), and exact checks of
//! Yang–Baxter, unitarity and crossing unitarity.

use num_complex::Complex64;

use crate::graded_tensor::{
    embed, super_permutation, twisted_transpose, BiPoly, ExactScalar, GradingSignature, OpMatrix, Poly, Ring,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RForm {
    /// λ𝕀 + iP.
    Plain,
    /// R^{t₁}(−λ−iρ).
    Conjugated,
}

/// λ ↦ R(λ) or R̄(λ) for one signature; constant parts are computed once.
#[derive(Clone, Debug)]
pub struct RMatrixFamily {
    sig: GradingSignature,
    form: RForm,
    /// P (plain) or P^{t₁} (conjugated).
    constant: OpMatrix<ExactScalar>,
}

impl RMatrixFamily {
    pub fn new(sig: &GradingSignature, form: RForm) -> Self {
        let p = super_permutation::<ExactScalar>(sig);
        let constant = match form {
            RForm::Plain => p,
            RForm::Conjugated => twisted_transpose(&p, 0, sig).expect("two-slot operator"),
        };
        RMatrixFamily { sig: sig.clone(), form, constant }
    }

    pub fn sig(&self) -> &GradingSignature {
        &self.sig
    }

    pub fn form(&self) -> RForm {
        self.form
    }

    /// The λ-independent operator multiplying i (P or P^{t₁}).
    pub fn constant_part(&self) -> &OpMatrix<ExactScalar> {
        &self.constant
    }

    /// Evaluates at `lam` in any ring. The twisted transpose fixes 𝕀, so
    /// R̄(λ) = (−λ−iρ)𝕀 + iP^{t₁}.
    pub fn at<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        let d = self.sig.dim();
        let shift = match self.form {
            RForm::Plain => lam.clone(),
            RForm::Conjugated => lam.neg().sub(&T::from_exact(&(&ExactScalar::i() * &self.sig.rho_scalar()))),
        };
        let ip = self.constant.map(|v| T::from_exact(&(&ExactScalar::i() * v)));
        OpMatrix::scalar(d, 2, shift).add(&ip)
    }
}

/// R(λ) = λ𝕀 + iP.
pub fn r_matrix<T: Ring>(sig: &GradingSignature, lam: &T) -> OpMatrix<T> {
    RMatrixFamily::new(sig, RForm::Plain).at(lam)
}

/// R(λ) with polynomial entries in the symbol λ.
pub fn r_matrix_symbolic(sig: &GradingSignature) -> OpMatrix<Poly> {
    r_matrix(sig, &Poly::x())
}

/// R̄(λ) = R^{t₁}(−λ−iρ).
pub fn rbar_matrix<T: Ring>(sig: &GradingSignature, lam: &T) -> OpMatrix<T> {
    RMatrixFamily::new(sig, RForm::Conjugated).at(lam)
}

/// R^{t₂}(μ) for comparison with the t₁ form.
pub fn r_transposed_slot2<T: Ring>(sig: &GradingSignature, mu: &T) -> OpMatrix<T> {
    let q2 = twisted_transpose(&super_permutation::<ExactScalar>(sig), 1, sig).expect("two-slot operator");
    let ip = q2.map(|v| T::from_exact(&(&ExactScalar::i() * v)));
    OpMatrix::scalar(sig.dim(), 2, mu.clone()).add(&ip)
}

/// R^{t₁}(−λ−iρ) − R^{t₂}(−λ−iρ) as a polynomial matrix; zero when the two
/// transposition slots agree.
pub fn rbar_slot_discrepancy(sig: &GradingSignature) -> OpMatrix<Poly> {
    let mu = Ring::sub(&Poly::x().neg(), &Poly::constant(&ExactScalar::i() * &sig.rho_scalar()));
    let t1 = rbar_matrix(sig, &Poly::x());
    let t2 = r_transposed_slot2(sig, &mu);
    t1.sub(&t2)
}

fn r_embedded<T: Ring>(sig: &GradingSignature, lam: &T, targets: [usize; 2], total: usize) -> OpMatrix<T> {
    embed(&r_matrix(sig, lam), &targets, total, sig).expect("valid slots")
}

/// R₁₂(λ₁−λ₂)R₁₃(λ₁)R₂₃(λ₂) − R₂₃(λ₂)R₁₃(λ₁)R₁₂(λ₁−λ₂), bivariate in (λ₁, λ₂).
pub fn ybe_residual(sig: &GradingSignature) -> OpMatrix<BiPoly> {
    let x = BiPoly::x();
    let y = BiPoly::y();
    let u = Ring::sub(&x, &y);
    ybe_at(sig, &u, &x, &y)
}

fn ybe_at<T: Ring>(sig: &GradingSignature, u: &T, x: &T, y: &T) -> OpMatrix<T> {
    let r12 = r_embedded(sig, u, [0, 1], 3);
    let r13 = r_embedded(sig, x, [0, 2], 3);
    let r23 = r_embedded(sig, y, [1, 2], 3);
    r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12))
}

/// Fast float mode: maximum residual entry over the given sample points.
pub fn ybe_sampled(sig: &GradingSignature, points: &[(Complex64, Complex64)]) -> f64 {
    points.iter().map(|(a, b)| ybe_at(sig, &(a - b), a, b).max_abs()).fold(0.0, f64::max)
}

/// R₁₂(λ)R₂₁(−λ) + (λ²+1)𝕀, zero for every signature.
pub fn unitarity_residual(sig: &GradingSignature) -> OpMatrix<Poly> {
    let lam = Poly::x();
    let r12 = r_matrix(sig, &lam);
    let r21 = embed(&r_matrix(sig, &lam.neg()), &[1, 0], 2, sig).expect("valid slots");
    let scalar = Ring::add(&Ring::mul(&lam, &lam), &Poly::one());
    r12.mul(&r21).add(&OpMatrix::scalar(sig.dim(), 2, scalar))
}

/// Outcome of the crossing-unitarity search.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingReport {
    pub holds: bool,
    /// `c` in (P^{t₁})² = c·P^{t₁}.
    pub c: Option<ExactScalar>,
    /// ρ̃ such that R^{t₁}(−λ−iρ)·R^{t₁}(λ−iρ̃) is scalar.
    pub rho_tilde: Option<ExactScalar>,
    /// The scalar polynomial in λ.
    pub scalar: Option<Poly>,
    /// Largest |entry| of the non-scalar remainder (0 when it holds).
    pub residual_norm: f64,
}

/// Discovers the shift making R^{t₁}(−λ−iρ)·R^{t₁}(λ−iρ̃) proportional to 𝕀.
///
/// With Q = P^{t₁}, (μ+iQ)(ν+iQ) = μν + (i(μ+ν) − c)Q once Q² = cQ, so the product
/// is scalar exactly when μ+ν = −ic.
pub fn crossing_unitarity_check(sig: &GradingSignature) -> CrossingReport {
    let fam = RMatrixFamily::new(sig, RForm::Conjugated);
    let q = fam.constant_part();
    let q2 = q.mul(q);
    let c = q
        .entries()
        .next()
        .map(|(r, col, v)| &q2.get(r, col) / v)
        .filter(|c| q2.sub(&q.scale(c)).is_zero());
    let Some(c) = c else {
        let resid = q2.to_float().max_abs();
        return CrossingReport { holds: false, c: None, rho_tilde: None, scalar: None, residual_norm: resid };
    };
    let rho = sig.rho_scalar();
    let rho_tilde = &c - &rho;
    let i = ExactScalar::i();
    let lam = Poly::x();
    let mu = Ring::sub(&lam.neg(), &Poly::constant(&i * &rho));
    let nu = Ring::sub(&lam, &Poly::constant(&i * &rho_tilde));
    let rt = |arg: &Poly| {
        let ip = q.map(|v| Poly::constant(&i * v));
        OpMatrix::scalar(sig.dim(), 2, arg.clone()).add(&ip)
    };
    let prod = rt(&mu).mul(&rt(&nu));
    let scalar = Ring::mul(&mu, &nu);
    let rem = prod.sub(&OpMatrix::scalar(sig.dim(), 2, scalar.clone()));
    let norm = rem.entries().map(|(_, _, p)| p.coeffs().iter().map(|c| c.to_complex().norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
    CrossingReport { holds: rem.is_zero(), c: Some(c), rho_tilde: Some(rho_tilde), scalar: Some(scalar), residual_norm: norm }
}
