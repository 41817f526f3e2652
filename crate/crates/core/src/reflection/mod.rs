//! Boundary K-matrices: construction, reflection-equation residuals for both
//! boundary types, classification of SP solutions and a brute-force oracle.

mod brute;
mod classify;

pub use brute::{brute_force_sp_solutions, BruteForceOptions, BruteForceResult, SolutionFamily};
pub use classify::{classify_sp, classify_family, ClassifyError, SpClass, SpClassification};

use crate::graded_tensor::{
    det, embed, inverse, twisted_transpose, BiPoly, DenseExact, ExactScalar, GradingSignature, OpMatrix, Ring,
};
use crate::yang_baxter::r_matrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error("block sizes ({0},{1},{2},{3}) do not split M={4}, N={5}")]
    Blocks(usize, usize, usize, usize, usize, usize),
    #[error("conjugator U is singular")]
    SingularConjugator,
    #[error("matrix has wrong size {got}, expected {want}")]
    Size { got: usize, want: usize },
    #[error("nilpotent part does not square to zero")]
    NotNilpotent,
    #[error("diagonal entries are not palindromic (k_j must equal k_(d+1-j))")]
    NotPalindromic,
    #[error("K~ is not twisted-(anti)symmetric with epsilon={0}")]
    Symmetry(i8),
    #[error("epsilon must be +1 or -1")]
    BadEpsilon,
    #[error("boundary kind does not fit this chain: {0}")]
    Mismatch(String),
}

/// Shape of an SP solution before conjugation.
#[derive(Clone, Debug, PartialEq)]
pub enum SpShape {
    /// diag(α…α, β…β, β…β, α…α) with sizes (m₁, m₂, n₂, n₁).
    Blocks([usize; 4]),
    /// iξ𝕀 + λℰ with ℰ² = 0.
    Nilpotent(DenseExact),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpBoundary {
    pub xi: ExactScalar,
    pub shape: SpShape,
    pub conjugator: Option<DenseExact>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SnpForm {
    Diagonal(Vec<ExactScalar>),
    Full(DenseExact),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnpBoundary {
    pub epsilon: i8,
    pub form: SnpForm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundarySpec {
    /// K = 𝕀 (either boundary type).
    Identity,
    Sp(SpBoundary),
    Snp(SnpBoundary),
    /// An explicit A + λB family, taken as given (used for negative controls).
    SpCustom(KFamily),
}

impl BoundarySpec {
    pub fn sp_blocks(blocks: [usize; 4], xi: ExactScalar) -> Self {
        BoundarySpec::Sp(SpBoundary { xi, shape: SpShape::Blocks(blocks), conjugator: None })
    }

    pub fn snp_diagonal(k: Vec<ExactScalar>) -> Self {
        BoundarySpec::Snp(SnpBoundary { epsilon: 1, form: SnpForm::Diagonal(k) })
    }

    pub fn snp_full(epsilon: i8, k: DenseExact) -> Self {
        BoundarySpec::Snp(SnpBoundary { epsilon, form: SnpForm::Full(k) })
    }

    /// Diagonal entries when the K-matrix is diagonal and the transfer eigenvalue
    /// formulas apply.
    pub fn is_diagonal(&self) -> bool {
        match self {
            BoundarySpec::Identity => true,
            BoundarySpec::Sp(b) => b.conjugator.is_none() && matches!(b.shape, SpShape::Blocks(_)),
            BoundarySpec::Snp(b) => matches!(b.form, SnpForm::Diagonal(_)),
            BoundarySpec::SpCustom(_) => false,
        }
    }
}

/// K(λ) = A + λB on one slot.
#[derive(Clone, Debug, PartialEq)]
pub struct KFamily {
    pub a: OpMatrix<ExactScalar>,
    pub b: OpMatrix<ExactScalar>,
}

impl KFamily {
    pub fn constant(a: OpMatrix<ExactScalar>) -> Self {
        let b = OpMatrix::zero(a.d(), 1);
        KFamily { a, b }
    }

    pub fn identity(d: usize) -> Self {
        Self::constant(OpMatrix::identity(d, 1))
    }

    pub fn at<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        let a = self.a.map(T::from_exact);
        let b = self.b.map(|v| T::from_exact(v).mul(lam));
        a.add(&b)
    }

    pub fn at_exact(&self, lam: &ExactScalar) -> OpMatrix<ExactScalar> {
        self.at(lam)
    }

    pub fn dim(&self) -> usize {
        self.a.d()
    }
}

fn check_size(m: &DenseExact, d: usize) -> Result<(), BoundaryError> {
    if m.rows != d || m.cols != d {
        return Err(BoundaryError::Size { got: m.rows, want: d });
    }
    Ok(())
}

fn conjugate(u: &DenseExact, x: &DenseExact) -> Result<DenseExact, BoundaryError> {
    let uinv = inverse(u).ok_or(BoundaryError::SingularConjugator)?;
    Ok(u.mul(x).mul(&uinv))
}

/// The SP K-matrix family `U(iξ𝕀 + λℰ)U⁻¹`.
pub fn build_sp_k(spec: &BoundarySpec, sig: &GradingSignature) -> Result<KFamily, BoundaryError> {
    let d = sig.dim();
    let sp = match spec {
        BoundarySpec::Identity => return Ok(KFamily::identity(d)),
        BoundarySpec::Sp(sp) => sp,
        BoundarySpec::SpCustom(k) => {
            if k.dim() != d {
                return Err(BoundaryError::Size { got: k.dim(), want: d });
            }
            return Ok(k.clone());
        }
        BoundarySpec::Snp(_) => return Err(BoundaryError::Mismatch("SNP boundary given to an SP builder".into())),
    };
    let mut e = match &sp.shape {
        SpShape::Blocks([m1, m2, n2, n1]) => {
            if m1 + m2 != sig.m() || n1 + n2 != sig.n() {
                return Err(BoundaryError::Blocks(*m1, *m2, *n2, *n1, sig.m(), sig.n()));
            }
            let mut e = DenseExact::zeros(d, d);
            let signs = std::iter::repeat_n(-1, *m1).chain(std::iter::repeat_n(1, m2 + n2)).chain(std::iter::repeat_n(-1, *n1));
            for (i, s) in signs.enumerate() {
                e.set(i, i, ExactScalar::int(s));
            }
            e
        }
        SpShape::Nilpotent(e) => {
            check_size(e, d)?;
            if !e.mul(e).is_zero() {
                return Err(BoundaryError::NotNilpotent);
            }
            e.clone()
        }
    };
    if let Some(u) = &sp.conjugator {
        check_size(u, d)?;
        e = conjugate(u, &e)?;
    }
    let a = OpMatrix::scalar(d, 1, &ExactScalar::i() * &sp.xi);
    Ok(KFamily { a, b: e.to_op(d, 1) })
}

/// The constant SNP matrix K̃, checked against K̃ᵗ = εK̃.
pub fn build_snp_k(spec: &BoundarySpec, sig: &GradingSignature) -> Result<OpMatrix<ExactScalar>, BoundaryError> {
    let d = sig.dim();
    let snp = match spec {
        BoundarySpec::Identity => return Ok(OpMatrix::identity(d, 1)),
        BoundarySpec::Snp(s) => s,
        BoundarySpec::Sp(_) | BoundarySpec::SpCustom(_) => {
            return Err(BoundaryError::Mismatch("SP boundary given to an SNP builder".into()))
        }
    };
    if snp.epsilon != 1 && snp.epsilon != -1 {
        return Err(BoundaryError::BadEpsilon);
    }
    let k = match &snp.form {
        SnpForm::Diagonal(k) => {
            if k.len() != d {
                return Err(BoundaryError::Size { got: k.len(), want: d });
            }
            if (0..d).any(|j| k[j] != k[d - 1 - j]) {
                return Err(BoundaryError::NotPalindromic);
            }
            OpMatrix::from_triplets(d, 1, k.iter().enumerate().map(|(i, v)| (i, i, v.clone())).collect::<Vec<_>>())
        }
        SnpForm::Full(m) => {
            check_size(m, d)?;
            m.to_op(d, 1)
        }
    };
    let kt = twisted_transpose(&k, 0, sig).expect("one-slot operator");
    if kt != k.scale(&ExactScalar::int(snp.epsilon.into())) {
        return Err(BoundaryError::Symmetry(snp.epsilon));
    }
    Ok(k)
}

fn r_bi(sig: &GradingSignature, lam: &BiPoly, targets: [usize; 2]) -> OpMatrix<BiPoly> {
    embed(&r_matrix(sig, lam), &targets, 2, sig).expect("two slots")
}

fn k_slot(k: &OpMatrix<BiPoly>, slot: usize, sig: &GradingSignature) -> OpMatrix<BiPoly> {
    embed(k, &[slot], 2, sig).expect("one slot")
}

/// R₁₂(λ₁−λ₂)K₁(λ₁)R₂₁(λ₁+λ₂)K₂(λ₂) − K₂(λ₂)R₁₂(λ₁+λ₂)K₁(λ₁)R₂₁(λ₁−λ₂) with the
/// first K taken from `k1` and the second from `k2` (bilinear in the pair).
pub fn sp_re_bilinear(k1: &KFamily, k2: &KFamily, sig: &GradingSignature) -> OpMatrix<BiPoly> {
    let x = BiPoly::x();
    let y = BiPoly::y();
    let u = Ring::sub(&x, &y);
    let v = Ring::add(&x, &y);
    let ka = k_slot(&k1.at(&x), 0, sig);
    let kb = k_slot(&k2.at(&y), 1, sig);
    let lhs = r_bi(sig, &u, [0, 1]).mul(&ka).mul(&r_bi(sig, &v, [1, 0])).mul(&kb);
    let rhs = kb.mul(&r_bi(sig, &v, [0, 1])).mul(&ka).mul(&r_bi(sig, &u, [1, 0]));
    lhs.sub(&rhs)
}

/// Exact SP reflection-equation residual as a bivariate polynomial matrix.
pub fn sp_re_residual(k: &KFamily, sig: &GradingSignature) -> OpMatrix<BiPoly> {
    sp_re_bilinear(k, k, sig)
}

/// R₁₂(λ₁−λ₂)K̃₁R₂₁^{t₁}(λ₁+λ₂)K̃₂ − K̃₂R₁₂^{t₁}(λ₁+λ₂)K̃₁R₂₁(λ₁−λ₂), exact.
pub fn snp_re_residual(k: &OpMatrix<ExactScalar>, sig: &GradingSignature) -> OpMatrix<BiPoly> {
    let x = BiPoly::x();
    let y = BiPoly::y();
    let u = Ring::sub(&x, &y);
    let v = Ring::add(&x, &y);
    let kb = k.map(|c| BiPoly::constant(c.clone()));
    let k1 = k_slot(&kb, 0, sig);
    let k2 = k_slot(&kb, 1, sig);
    let t1 = |r: OpMatrix<BiPoly>| twisted_transpose(&r, 0, sig).expect("two slots");
    let lhs = r_bi(sig, &u, [0, 1]).mul(&k1).mul(&t1(r_bi(sig, &v, [1, 0]))).mul(&k2);
    let rhs = k2.mul(&t1(r_bi(sig, &v, [0, 1]))).mul(&k1).mul(&r_bi(sig, &u, [1, 0]));
    lhs.sub(&rhs)
}

/// diag(−λ+iξ, λ+iξ, λ+iη) on sl(3): two boundary parameters, not a solution when η ≠ ξ.
pub fn broken_two_parameter_k(xi: &ExactScalar, eta: &ExactScalar) -> KFamily {
    let i = ExactScalar::i();
    let a = OpMatrix::from_triplets(3, 1, [(0, 0, &i * xi), (1, 1, &i * xi), (2, 2, &i * eta)]);
    let b = OpMatrix::from_triplets(3, 1, [(0, 0, ExactScalar::int(-1)), (1, 1, ExactScalar::int(1)), (2, 2, ExactScalar::int(1))]);
    KFamily { a, b }
}

/// Entries (i, j) allowed in an even ("bosonic") matrix.
pub fn even_positions(sig: &GradingSignature) -> Vec<(usize, usize)> {
    let d = sig.dim();
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|&(i, j)| sig.grading(i) == sig.grading(j)).collect()
}

fn random_small(rng: &mut impl rand::Rng, lo: i64, hi: i64) -> ExactScalar {
    ExactScalar::int(rng.gen_range(lo..=hi))
}

/// Random invertible even integer matrix.
pub fn random_conjugator(sig: &GradingSignature, rng: &mut impl rand::Rng) -> DenseExact {
    let d = sig.dim();
    loop {
        let mut u = DenseExact::zeros(d, d);
        for (i, j) in even_positions(sig) {
            u.set(i, j, random_small(rng, -2, 2));
        }
        if !det(&u).is_zero() {
            return u;
        }
    }
}

/// A random member of the SP classification: diagonal blocks or a nilpotent
/// ℰ (rank pattern S→T with S∩T = ∅, so ℰ² = 0), rational ξ, integer U.
pub fn random_sp_boundary(sig: &GradingSignature, rng: &mut impl rand::Rng) -> BoundarySpec {
    let d = sig.dim();
    let xi = ExactScalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    let conjugator = if rng.gen_bool(0.7) { Some(random_conjugator(sig, rng)) } else { None };
    let shape = if rng.gen_bool(0.7) {
        let m1 = rng.gen_range(0..=sig.m());
        let n1 = rng.gen_range(0..=sig.n());
        SpShape::Blocks([m1, sig.m() - m1, sig.n() - n1, n1])
    } else {
        let split = rng.gen_range(1..d.max(2));
        let mut e = DenseExact::zeros(d, d);
        for (i, j) in even_positions(sig) {
            if i < split && j >= split {
                e.set(i, j, random_small(rng, -3, 3));
            }
        }
        SpShape::Nilpotent(e)
    };
    BoundarySpec::Sp(SpBoundary { xi, shape, conjugator })
}

/// Random even K̃ with K̃ᵗ = εK̃, built as X ± Xᵗ.
pub fn random_snp_matrix(sig: &GradingSignature, epsilon: i8, rng: &mut impl rand::Rng) -> OpMatrix<ExactScalar> {
    let d = sig.dim();
    let x = OpMatrix::from_triplets(
        d,
        1,
        even_positions(sig).into_iter().map(|(i, j)| (i, j, random_small(rng, -4, 4))).collect::<Vec<_>>(),
    );
    let xt = twisted_transpose(&x, 0, sig).expect("one slot");
    if epsilon > 0 {
        x.add(&xt)
    } else {
        x.sub(&xt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_tensor::BasisOrder;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solves_both_equations() {
        let sig = GradingSignature::sl(2);
        assert!(sp_re_residual(&KFamily::identity(2), &sig).is_zero());
        assert!(snp_re_residual(&OpMatrix::identity(2, 1), &sig).is_zero());
    }

    #[test]
    fn sl2_blocks_shape() {
        let sig = GradingSignature::sl(2);
        let xi = ExactScalar::ratio(3, 2);
        let k = build_sp_k(&BoundarySpec::sp_blocks([1, 1, 0, 0], xi.clone()), &sig).unwrap();
        let lam = ExactScalar::int(5);
        let kl = k.at_exact(&lam);
        let i = ExactScalar::i();
        assert_eq!(kl.get(0, 0), &(&i * &xi) - &lam);
        assert_eq!(kl.get(1, 1), &(&i * &xi) + &lam);
        assert!(sp_re_residual(&k, &sig).is_zero());
    }

    #[test]
    fn all_alpha_blocks_are_scalar() {
        let sig = GradingSignature::slmn(2, 1);
        let k = build_sp_k(&BoundarySpec::sp_blocks([2, 0, 0, 1], ExactScalar::int(1)), &sig).unwrap();
        let kl = k.at_exact(&ExactScalar::int(2));
        assert_eq!(kl, OpMatrix::scalar(3, 1, ExactScalar::gaussian(-2, 1)));
    }

    #[test]
    fn broken_k_fails() {
        let k = broken_two_parameter_k(&ExactScalar::int(1), &ExactScalar::int(2));
        assert!(!sp_re_residual(&k, &GradingSignature::sl(3)).is_zero());
    }

    #[test]
    fn builder_errors() {
        let sig = GradingSignature::sl(2);
        assert!(build_sp_k(&BoundarySpec::sp_blocks([1, 0, 0, 0], ExactScalar::int(1)), &sig).is_err());
        assert_eq!(
            build_snp_k(&BoundarySpec::snp_diagonal(vec![ExactScalar::int(1), ExactScalar::int(2)]), &sig),
            Err(BoundaryError::NotPalindromic)
        );
        let c = ExactScalar::int(3);
        let k = build_snp_k(&BoundarySpec::snp_diagonal(vec![c.clone(), c.clone()]), &sig).unwrap();
        assert_eq!(k, OpMatrix::scalar(2, 1, c));
        let sig_m = GradingSignature::new(2, 0, BasisOrder::Distinguished, -1).unwrap();
        assert!(build_snp_k(&BoundarySpec::snp_full(1, DenseExact::identity(2)), &sig_m).is_ok());
    }

    #[test]
    fn random_snp_graded_solutions() {
        let sig = GradingSignature::new(2, 2, BasisOrder::Symmetric, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for eps in [1, -1] {
            let k = random_snp_matrix(&sig, eps, &mut rng);
            assert!(snp_re_residual(&k, &sig).is_zero());
        }
    }
}
