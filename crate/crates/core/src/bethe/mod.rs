//! Analytical Bethe ansatz for the open chains: pseudo-vacuum eigenvalue,
//! dressing functions, Bethe equations, a numerical root solver and the
//! comparison against exact diagonalisation.

mod dressing;
mod equations;
mod matching;
mod solver;

pub use dressing::{
    analyticity_check, dressed_eigenvalue, dressing, dressing_factors, residue_check, AnalyticityReport, BetheRootSet,
    ResidueReport,
};
pub use equations::{bethe_residuals, level_structure, BetheSystem, LevelDescriptor, NodeKind, SelfTermPolicy};
pub use matching::{match_spectrum, CurveMatch, MatchReport};
pub use solver::{
    seed_registry, seed_strategy, solve_bethe, GridSeeds, HomotopySeeds, SeedStrategy, SolveOutcome, SolverOptions,
};

use num_complex::Complex64;

use crate::chain::{ChainMode, ChainSpec};
use crate::graded_tensor::{BasisOrder, ExactScalar, GradingSignature, Poly, RationalFunction, Ring};
use crate::reflection::{BoundarySpec, SnpForm, SpShape};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BetheError {
    #[error("pole of {0} at the evaluation point")]
    Pole(&'static str),
    #[error("the Bethe ansatz formulas need a diagonal boundary matrix: {0}")]
    NotDiagonal(String),
    #[error("unsupported chain: {0}")]
    Unsupported(String),
    #[error("root counts {got:?} do not fit the {want} Bethe levels")]
    Levels { got: Vec<usize>, want: usize },
    #[error("boundary parameter collision: {0}")]
    BoundaryCollision(String),
}

/// Which eigenvalue formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Sp,
    Snp,
}

impl Case {
    pub fn of(spec: &ChainSpec) -> Result<Case, BetheError> {
        match spec.mode {
            ChainMode::OpenSp => Ok(Case::Sp),
            ChainMode::OpenSnp => Ok(Case::Snp),
            ChainMode::Closed => Err(BetheError::Unsupported("closed chains have no open-chain Bethe ansatz".into())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Sp => "sp",
            Case::Snp => "snp",
        }
    }
}

/// Scalars the eigenvalue formulas can be evaluated in.
pub trait Field: Ring {
    fn try_inv(&self) -> Option<Self>;

    fn try_div(&self, o: &Self) -> Option<Self> {
        o.try_inv().map(|r| self.mul(&r))
    }

    fn powu(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl Field for Complex64 {
    fn try_inv(&self) -> Option<Self> {
        (self.norm_sqr() > 0.0).then(|| self.inv())
    }
}

impl Field for ExactScalar {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

fn konst<T: Field>(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> T {
    T::from_exact(&(&ExactScalar::ratio(re_num, re_den) + &(&ExactScalar::ratio(im_num, im_den) * &ExactScalar::i())))
}

fn i_times<T: Field>(x: &ExactScalar) -> T {
    T::from_exact(&(x * &ExactScalar::i()))
}

/// a(λ) = λ + i, b(λ) = λ and their crossed partners ā(λ) = a(−λ−iρ), b̄(λ) = b(−λ−iρ).
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicFns {
    pub rho: ExactScalar,
}

impl KinematicFns {
    pub fn new(sig: &GradingSignature) -> Self {
        KinematicFns { rho: sig.rho_scalar() }
    }

    /// −λ − iρ.
    pub fn cross<T: Field>(&self, lam: &T) -> T {
        lam.neg().sub(&i_times(&self.rho))
    }

    pub fn a<T: Field>(&self, lam: &T) -> T {
        lam.add(&T::imag_unit())
    }

    pub fn b<T: Field>(&self, lam: &T) -> T {
        lam.clone()
    }

    pub fn a_bar<T: Field>(&self, lam: &T) -> T {
        self.a(&self.cross(lam))
    }

    pub fn b_bar<T: Field>(&self, lam: &T) -> T {
        self.b(&self.cross(lam))
    }

    /// (α, β, γ) at λ.
    pub fn factors<T: Field>(&self, case: Case, lam: &T) -> (T, T, T) {
        let sq = |x: T| x.mul(&x);
        match case {
            Case::Sp => (sq(self.a(lam)), sq(self.b(lam)), sq(self.b(lam))),
            Case::Snp => {
                let bb = self.b_bar(lam);
                (
                    sq(self.a(lam).mul(&bb)),
                    sq(self.b(lam).mul(&bb)),
                    sq(self.a_bar(lam).mul(&self.b(lam))),
                )
            }
        }
    }
}

/// α, β, γ as rational functions of λ.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseFactors {
    pub case: Case,
    pub alpha: RationalFunction,
    pub beta: RationalFunction,
    pub gamma: RationalFunction,
}

impl CaseFactors {
    pub fn new(case: Case, sig: &GradingSignature) -> Self {
        let i = ExactScalar::i();
        let minus_i_rho = -(&sig.rho_scalar() * &i);
        let a = Poly::linear(i.clone(), ExactScalar::one());
        let b = Poly::x();
        let a_bar = Poly::linear(&minus_i_rho + &i, -ExactScalar::one());
        let b_bar = Poly::linear(minus_i_rho, -ExactScalar::one());
        let sq = |p: Poly| RationalFunction::from_poly(Ring::mul(&p, &p));
        let (alpha, beta, gamma) = match case {
            Case::Sp => (sq(a.clone()), sq(b.clone()), sq(b)),
            Case::Snp => (
                sq(Ring::mul(&a, &b_bar)),
                sq(Ring::mul(&b, &b_bar)),
                sq(Ring::mul(&a_bar, &b)),
            ),
        };
        CaseFactors { case, alpha, beta, gamma }
    }
}

/// Diagonal boundary data entering g̃ and the Bethe equations.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagonalBoundary {
    Trivial,
    /// Block sizes (m₁, m₂, n₂, n₁) and ξ.
    SpBlocks { blocks: [usize; 4], xi: ExactScalar },
    /// Palindromic diagonal k₁ … k_d of K̃.
    SnpDiagonal(Vec<ExactScalar>),
}

impl DiagonalBoundary {
    /// Reads K⁻ of the chain. K⁺ must be the identity. A constant conjugation
    /// of a block solution leaves the spectrum unchanged, so it is accepted.
    pub fn of(spec: &ChainSpec) -> Result<Self, BetheError> {
        let case = Case::of(spec)?;
        if spec.boundary_plus != BoundarySpec::Identity {
            return Err(BetheError::Unsupported("K+ must be the identity".into()));
        }
        let d = spec.sig.dim();
        match (&spec.boundary_minus, case) {
            (BoundarySpec::Identity, _) => Ok(DiagonalBoundary::Trivial),
            (BoundarySpec::Sp(b), Case::Sp) => match &b.shape {
                SpShape::Blocks(blocks) => Ok(DiagonalBoundary::SpBlocks { blocks: *blocks, xi: b.xi.clone() }),
                SpShape::Nilpotent(_) => Err(BetheError::NotDiagonal("nilpotent SP solution".into())),
            },
            (BoundarySpec::Snp(b), Case::Snp) => match &b.form {
                SnpForm::Diagonal(k) if k.len() == d && b.epsilon == 1 => {
                    if k.iter().any(|x| x.is_zero()) {
                        return Err(BetheError::BoundaryCollision("K~ has a zero diagonal entry".into()));
                    }
                    if (0..d).any(|j| k[j] != k[d - 1 - j]) {
                        return Err(BetheError::NotDiagonal("K~ diagonal is not palindromic".into()));
                    }
                    Ok(DiagonalBoundary::SnpDiagonal(k.clone()))
                }
                _ => Err(BetheError::NotDiagonal("SNP boundary is not a symmetric diagonal matrix".into())),
            },
            (other, _) => Err(BetheError::NotDiagonal(format!("{other:?} does not fit the {} chain", case.name()))),
        }
    }

    /// Scalar multiplying g_l (g̃_l = factor · g_l).
    pub fn g_factor<T: Field>(&self, sig: &GradingSignature, l: usize, lam: &T) -> T {
        match self {
            DiagonalBoundary::Trivial => T::one(),
            DiagonalBoundary::SpBlocks { blocks: [m1, m2, n2, _], xi } => {
                let ixi: T = i_times(xi);
                let m = sig.m();
                if l < *m1 {
                    lam.neg().add(&ixi)
                } else if l < m + n2 {
                    lam.add(&ixi).add(&i_times(&ExactScalar::int(*m1 as i64)))
                } else {
                    let shift = ExactScalar::int(*n2 as i64 - *m2 as i64);
                    lam.neg().add(&ixi).add(&i_times(&shift))
                }
            }
            DiagonalBoundary::SnpDiagonal(k) => T::from_exact(&k[l]),
        }
    }
}

fn check_basis(case: Case, sig: &GradingSignature) -> Result<(), BetheError> {
    if sig.dim() < 2 {
        return Err(BetheError::Unsupported("dimension must be at least 2".into()));
    }
    match case {
        Case::Sp if sig.is_graded() && sig.basis() != BasisOrder::Distinguished => {
            Err(BetheError::Unsupported("SP Bethe formulas use the distinguished basis".into()))
        }
        Case::Sp if sig.m() == 0 => Err(BetheError::Unsupported("SP Bethe formulas need M >= 1".into())),
        Case::Snp if sig.n() % 2 == 1 => {
            Err(BetheError::Unsupported("SNP Bethe formulas are only given for even N".into()))
        }
        _ => Ok(()),
    }
}

/// g_l(λ) (or g̃_l for a non-trivial diagonal boundary).
pub fn g_function<T: Field>(
    case: Case,
    sig: &GradingSignature,
    boundary: &DiagonalBoundary,
    l: usize,
    lam: &T,
) -> Result<T, BetheError> {
    let d = sig.dim();
    if l >= d {
        return Err(BetheError::Unsupported(format!("g index {l} out of range 0..{d}")));
    }
    let bare = match case {
        Case::Sp => g_sp(sig, l, lam)?,
        Case::Snp => g_snp(sig, l, lam)?,
    };
    Ok(bare.mul(&boundary.g_factor(sig, l, lam)))
}

fn g_sp<T: Field>(sig: &GradingSignature, l: usize, lam: &T) -> Result<T, BetheError> {
    let (m, n) = (sig.m() as i64, sig.n() as i64);
    let l = l as i64;
    let num = lam.mul(&lam.add(&konst(0, 1, m - n, 2)));
    let (p, q) = if l < m { (l, l + 1) } else { (2 * m - l - 1, 2 * m - l) };
    let den = lam.add(&konst(0, 1, p, 2)).mul(&lam.add(&konst(0, 1, q, 2)));
    num.try_div(&den).ok_or(BetheError::Pole("g_l"))
}

fn g_snp<T: Field>(sig: &GradingSignature, l: usize, lam: &T) -> Result<T, BetheError> {
    let d = sig.dim();
    if 2 * l + 1 == d {
        return Ok(T::one());
    }
    if 2 * l + 1 > d {
        let kin = KinematicFns::new(sig);
        return g_snp(sig, d - 1 - l, &kin.cross(lam));
    }
    let rho = sig.rho_scalar();
    let half = ExactScalar::ratio(1, 2);
    let num = lam.add(&i_times(&(&(&rho - &ExactScalar::one()) * &half)));
    let den = lam.add(&i_times(&(&rho * &half)));
    num.try_div(&den).ok_or(BetheError::Pole("g_l"))
}

/// The d weighted terms of the eigenvalue: term_l = w_l · g̃_l(λ) with
/// w₀ = α^L, w_l = (−1)^{[l+1]} β^L and w_{d−1} = (−1)^{[d]} γ^L (1-based grading index).
pub fn eigenvalue_terms<T: Field>(spec: &ChainSpec, lam: &T) -> Result<Vec<T>, BetheError> {
    let case = Case::of(spec)?;
    let sig = &spec.sig;
    check_basis(case, sig)?;
    let boundary = DiagonalBoundary::of(spec)?;
    let d = sig.dim();
    let (alpha, beta, gamma) = KinematicFns::new(sig).factors(case, lam);
    let big_l = spec.sites;
    let signed = |x: T, idx: usize| if sig.grading(idx) == 1 { x.neg() } else { x };
    (0..d)
        .map(|l| {
            let w = if l == 0 {
                alpha.powu(big_l)
            } else if l + 1 < d {
                signed(beta.powu(big_l), l)
            } else {
                signed(gamma.powu(big_l), l)
            };
            Ok(w.mul(&g_function(case, sig, &boundary, l, lam)?))
        })
        .collect()
}

/// Pseudo-vacuum eigenvalue Λ⁰(λ).
pub fn lambda0<T: Field>(spec: &ChainSpec, lam: &T) -> Result<T, BetheError> {
    Ok(eigenvalue_terms(spec, lam)?.iter().fold(T::zero(), |acc, t| acc.add(t)))
}

/// e_x(λ) = (λ + ix/2)/(λ − ix/2).
pub fn e_fn(x: Complex64, lam: Complex64) -> Result<Complex64, BetheError> {
    let h = Complex64::i() * x * 0.5;
    let den = lam - h;
    if den.norm() <= f64::EPSILON * (1.0 + lam.norm()) {
        return Err(BetheError::Pole("e_x"));
    }
    Ok((lam + h) / den)
}

/// e_x for real x.
pub fn e_real(x: f64, lam: Complex64) -> Result<Complex64, BetheError> {
    e_fn(Complex64::new(x, 0.0), lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Transfer;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_examples() {
        let sl2 = GradingSignature::sl(2);
        let lam = ExactScalar::ratio(2, 7);
        let g0 = g_function(Case::Sp, &sl2, &DiagonalBoundary::Trivial, 0, &lam).unwrap();
        let want = &(&lam + &ExactScalar::i()) / &(&lam + &(&ExactScalar::i() * &ExactScalar::ratio(1, 2)));
        assert_eq!(g0, want);
        let g0 = g_function(Case::Snp, &sl2, &DiagonalBoundary::Trivial, 0, &lam).unwrap();
        let want = &lam / &(&lam + &(&ExactScalar::i() * &ExactScalar::ratio(1, 2)));
        assert_eq!(g0, want);
        let sl3 = GradingSignature::sl(3);
        assert_eq!(g_function(Case::Snp, &sl3, &DiagonalBoundary::Trivial, 1, &lam).unwrap(), ExactScalar::one());
    }

    #[test]
    fn g_pole_reported() {
        let sl2 = GradingSignature::sl(2);
        let at_pole = -(&ExactScalar::i() * &ExactScalar::ratio(1, 2));
        assert_eq!(
            g_function(Case::Sp, &sl2, &DiagonalBoundary::Trivial, 0, &at_pole),
            Err(BetheError::Pole("g_l"))
        );
    }

    #[test]
    fn e_examples() {
        assert!((e_real(0.0, c(0.3, 0.2)).unwrap() - 1.0).norm() < 1e-15);
        assert!((e_real(1.0, c(0.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        assert_eq!(e_real(2.0, c(0.0, 1.0)), Err(BetheError::Pole("e_x")));
    }

    #[test]
    fn case_factors_match_kinematics() {
        for sig in [GradingSignature::sl(2), GradingSignature::sl(3)] {
            let kin = KinematicFns::new(&sig);
            for case in [Case::Sp, Case::Snp] {
                let cf = CaseFactors::new(case, &sig);
                let lam = ExactScalar::ratio(3, 5);
                let (a, b, g) = kin.factors(case, &lam);
                assert_eq!(cf.alpha.eval(&lam).unwrap(), a);
                assert_eq!(cf.beta.eval(&lam).unwrap(), b);
                assert_eq!(cf.gamma.eval(&lam).unwrap(), g);
            }
        }
    }

    #[test]
    fn sl2_single_site_vacuum_formula() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 1, BoundarySpec::Identity);
        let lam = ExactScalar::ratio(1, 3);
        let i = ExactScalar::i();
        let half_i = &i * &ExactScalar::ratio(1, 2);
        let a = &lam + &i;
        let want = &(&(&(&a * &a) * &a) + &(&(&lam * &lam) * &lam)) / &(&lam + &half_i);
        assert_eq!(lambda0(&spec, &lam).unwrap(), want);
    }

    #[test]
    fn vacuum_identity_against_chain() {
        let specs = vec![
            ChainSpec::open_sp(GradingSignature::sl(3), 2, BoundarySpec::Identity),
            ChainSpec::open_sp(GradingSignature::slmn(2, 1), 2, BoundarySpec::Identity),
            ChainSpec::open_sp(GradingSignature::slmn(2, 1), 2, BoundarySpec::sp_blocks([1, 1, 1, 0], ExactScalar::ratio(2, 3))),
            ChainSpec::open_snp(GradingSignature::sl(2), 1, BoundarySpec::Identity),
        ];
        for spec in specs {
            let tr = Transfer::new(&spec).unwrap();
            for lam in [c(0.37, 0.21), c(-1.2, 0.4)] {
                let va = tr.vacuum_action(lam);
                let l0: Complex64 = lambda0(&spec, &lam).unwrap();
                assert!((va.eigenvalue - l0).norm() < 1e-10 * va.image_norm, "{spec:?}");
            }
        }
    }
}
