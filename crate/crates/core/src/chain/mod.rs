//! Monodromy and transfer matrices for closed, open SP and open SNP chains,
//! the Hamiltonian, the pseudo-vacuum and an exact-diagonalisation oracle.

mod spectrum;

pub use spectrum::{eigen_curves, sorted_eigenvalues, EigenCurve, SpectralSample, SpectrumError};

use num_complex::Complex64;

use crate::graded_tensor::{
    embed, super_permutation, supertrace, twisted_transpose, BiPoly, ExactScalar, GradingSignature, OpMatrix, Poly,
    Ring,
};
use crate::reflection::{build_snp_k, build_sp_k, BoundaryError, BoundarySpec, KFamily};

/// Hilbert-space cap for the diagonalisation oracle.
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainMode {
    Closed,
    OpenSp,
    OpenSnp,
}

impl ChainMode {
    pub fn name(self) -> &'static str {
        match self {
            ChainMode::Closed => "closed",
            ChainMode::OpenSp => "open_sp",
            ChainMode::OpenSnp => "open_snp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error("Hilbert dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("chain needs at least one site")]
    NoSites,
    #[error("SNP chains need a palindromic grading (symmetric basis)")]
    SnpGrading,
    #[error("boundary: {0}")]
    Boundary(#[from] BoundaryError),
    #[error("closed chains take no boundary matrices")]
    ClosedWithBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub sig: GradingSignature,
    /// L; SNP chains have 2L quantum sites.
    pub sites: usize,
    pub mode: ChainMode,
    pub boundary_minus: BoundarySpec,
    pub boundary_plus: BoundarySpec,
    pub dim_cap: usize,
}

impl ChainSpec {
    pub fn new(sig: GradingSignature, sites: usize, mode: ChainMode) -> Self {
        ChainSpec {
            sig,
            sites,
            mode,
            boundary_minus: BoundarySpec::Identity,
            boundary_plus: BoundarySpec::Identity,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn closed(sig: GradingSignature, sites: usize) -> Self {
        Self::new(sig, sites, ChainMode::Closed)
    }

    pub fn open_sp(sig: GradingSignature, sites: usize, k_minus: BoundarySpec) -> Self {
        Self::new(sig, sites, ChainMode::OpenSp).with_minus(k_minus)
    }

    pub fn open_snp(sig: GradingSignature, sites: usize, k_minus: BoundarySpec) -> Self {
        Self::new(sig, sites, ChainMode::OpenSnp).with_minus(k_minus)
    }

    pub fn with_minus(mut self, k: BoundarySpec) -> Self {
        self.boundary_minus = k;
        self
    }

    pub fn with_plus(mut self, k: BoundarySpec) -> Self {
        self.boundary_plus = k;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }

    /// Number of quantum tensor factors.
    pub fn quantum_slots(&self) -> usize {
        match self.mode {
            ChainMode::OpenSnp => 2 * self.sites,
            _ => self.sites,
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.sig.dim().saturating_pow(self.quantum_slots() as u32)
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        if self.sites == 0 {
            return Err(ChainError::NoSites);
        }
        let dim = self.hilbert_dim();
        if dim > self.dim_cap {
            return Err(ChainError::DimensionCap { dim, cap: self.dim_cap });
        }
        match self.mode {
            ChainMode::OpenSnp if !self.sig.is_palindromic() => Err(ChainError::SnpGrading),
            ChainMode::Closed
                if self.boundary_minus != BoundarySpec::Identity || self.boundary_plus != BoundarySpec::Identity =>
            {
                Err(ChainError::ClosedWithBoundary)
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    Plain,
    Conjugated,
}

/// Precomputed pieces of t(λ): per-site constant parts of the R factors embedded
/// next to the auxiliary slot 0, and the boundary matrices on slot 0.
#[derive(Clone, Debug)]
pub struct Transfer {
    spec: ChainSpec,
    slots: usize,
    /// (factor kind, constant C) for T, in multiplication order.
    row: Vec<(Factor, OpMatrix<ExactScalar>)>,
    /// Same for T̂.
    hat_row: Vec<(Factor, OpMatrix<ExactScalar>)>,
    k_minus: Option<KFamily>,
    k_plus: Option<KFamily>,
}

fn embed_one(k: &OpMatrix<ExactScalar>, slots: usize, sig: &GradingSignature) -> OpMatrix<ExactScalar> {
    embed(k, &[0], slots, sig).expect("aux slot")
}

impl Transfer {
    pub fn new(spec: &ChainSpec) -> Result<Self, ChainError> {
        spec.validate()?;
        let sig = &spec.sig;
        let q = spec.quantum_slots();
        let slots = q + 1;
        let p = super_permutation::<ExactScalar>(sig);
        let pt = twisted_transpose(&p, 0, sig).expect("two slots");
        let constant = |f: Factor, targets: [usize; 2]| {
            let c = if f == Factor::Plain { &p } else { &pt };
            (f, embed(c, &targets, slots, sig).expect("valid slots"))
        };
        // T runs over sites q..1, T̂ over 1..q.
        let kind_row = |s: usize| match spec.mode {
            ChainMode::OpenSnp if s % 2 == 1 => Factor::Conjugated,
            _ => Factor::Plain,
        };
        let kind_hat = |s: usize| match spec.mode {
            ChainMode::OpenSnp if s.is_multiple_of(2) => Factor::Conjugated,
            _ => Factor::Plain,
        };
        let row = (1..=q).rev().map(|s| constant(kind_row(s), [0, s])).collect();
        let hat_row = if spec.mode == ChainMode::Closed {
            Vec::new()
        } else {
            (1..=q).map(|s| constant(kind_hat(s), [s, 0])).collect()
        };
        let lift = |k: KFamily| KFamily { a: embed_one(&k.a, slots, sig), b: embed_one(&k.b, slots, sig) };
        let (k_minus, k_plus) = match spec.mode {
            ChainMode::Closed => (None, None),
            ChainMode::OpenSp => (
                Some(lift(build_sp_k(&spec.boundary_minus, sig)?)),
                Some(lift(build_sp_k(&spec.boundary_plus, sig)?)),
            ),
            ChainMode::OpenSnp => (
                Some(lift(KFamily::constant(build_snp_k(&spec.boundary_minus, sig)?))),
                Some(lift(KFamily::constant(build_snp_k(&spec.boundary_plus, sig)?))),
            ),
        };
        Ok(Transfer { spec: spec.clone(), slots, row, hat_row, k_minus, k_plus })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.hilbert_dim()
    }

    fn shift<T: Ring>(&self, f: Factor, lam: &T) -> T {
        match f {
            Factor::Plain => lam.clone(),
            Factor::Conjugated => {
                lam.neg().sub(&T::from_exact(&(&ExactScalar::i() * &self.spec.sig.rho_scalar())))
            }
        }
    }

    fn product<T: Ring>(&self, factors: &[(Factor, OpMatrix<ExactScalar>)], lam: &T) -> OpMatrix<T> {
        let i = T::imag_unit();
        let mut acc = OpMatrix::<T>::identity(self.spec.sig.dim(), self.slots);
        for (f, c) in factors {
            // acc · (s𝕀 + iC)
            let c_t = c.map(T::from_exact);
            acc = acc.scale(&self.shift(*f, lam)).add(&acc.mul(&c_t).scale(&i));
        }
        acc
    }

    /// T_a(λ) on aux ⊗ quantum.
    pub fn monodromy<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        self.product(&self.row, lam)
    }

    /// T̂_a(λ); identity for closed chains.
    pub fn hat_monodromy<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        self.product(&self.hat_row, lam)
    }

    /// The operator whose supertrace over slot 0 is t(λ).
    pub fn double_row<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        let t = self.monodromy(lam);
        match (&self.k_minus, &self.k_plus) {
            (Some(km), Some(kp)) => kp.at(lam).mul(&t).mul(&km.at(lam)).mul(&self.hat_monodromy(lam)),
            _ => t,
        }
    }

    pub fn at<T: Ring>(&self, lam: &T) -> OpMatrix<T> {
        supertrace(&self.double_row(lam), 0, &self.spec.sig).expect("aux slot")
    }

    pub fn at_complex(&self, lam: Complex64) -> OpMatrix<Complex64> {
        self.at(&lam)
    }

    pub fn at_exact(&self, lam: &ExactScalar) -> OpMatrix<ExactScalar> {
        self.at(lam)
    }

    /// t(λ) with polynomial entries.
    pub fn symbolic(&self) -> OpMatrix<Poly> {
        self.at(&Poly::x())
    }

    /// d t/dλ at λ = 0, exact.
    pub fn derivative_at_zero(&self) -> OpMatrix<ExactScalar> {
        self.symbolic().map(|p| p.coeff(1))
    }

    /// −½ t'(0).
    pub fn hamiltonian(&self) -> OpMatrix<ExactScalar> {
        self.derivative_at_zero().scale(&ExactScalar::ratio(-1, 2))
    }

    /// max |[t(λ₁), t(λ₂)]|.
    pub fn commutator_norm(&self, l1: Complex64, l2: Complex64) -> f64 {
        let a = self.at_complex(l1);
        let b = self.at_complex(l2);
        a.commutator(&b).max_abs()
    }

    /// [t(λ₁), t(λ₂)] as an exact bivariate polynomial matrix.
    pub fn commutator_symbolic(&self) -> OpMatrix<BiPoly> {
        let a = self.at(&BiPoly::x());
        let b = self.at(&BiPoly::y());
        a.commutator(&b)
    }

    /// |ω₊⟩ = e₁ ⊗ … ⊗ e₁.
    pub fn pseudo_vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// ⟨ω₊|t(λ)|ω₊⟩ and ‖t|ω₊⟩ − ⟨ω₊|t|ω₊⟩|ω₊⟩‖ (the eigenvector defect).
    pub fn vacuum_action(&self, lam: Complex64) -> VacuumAction {
        let t = self.at_complex(lam);
        // Column 0 of t is t|ω₊⟩.
        let mut col = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (r, c, v) in t.entries() {
            if c == 0 {
                col[r] = *v;
            }
        }
        let eigenvalue = col[0];
        let defect = col.iter().skip(1).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        VacuumAction { eigenvalue, defect, image_norm: norm }
    }

    /// t(λ)|ω₊⟩ in exact arithmetic.
    pub fn vacuum_column_exact(&self, lam: &ExactScalar) -> Vec<ExactScalar> {
        let t = self.at_exact(lam);
        let mut col = vec![ExactScalar::zero(); self.dim()];
        for (r, c, v) in t.entries() {
            if c == 0 {
                col[r] = v.clone();
            }
        }
        col
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VacuumAction {
    pub eigenvalue: Complex64,
    pub defect: f64,
    pub image_norm: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_tensor::BasisOrder;
    use crate::reflection::broken_two_parameter_k;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_sl2_single_site() {
        let tr = Transfer::new(&ChainSpec::closed(GradingSignature::sl(2), 1)).unwrap();
        let lam = ExactScalar::ratio(1, 3);
        let want = &(&ExactScalar::int(2) * &lam) + &ExactScalar::i();
        assert_eq!(tr.at_exact(&lam), OpMatrix::scalar(2, 1, want));
    }

    #[test]
    fn closed_unitarity_link() {
        let tr = Transfer::new(&ChainSpec::closed(GradingSignature::sl(2), 2)).unwrap();
        // T(λ) T̂(−λ) with T̂ built from the SP row.
        let sp = Transfer::new(&ChainSpec::open_sp(GradingSignature::sl(2), 2, BoundarySpec::Identity)).unwrap();
        let lam = ExactScalar::ratio(2, 5);
        let prod = tr.monodromy(&lam).mul(&sp.hat_monodromy(&-lam.clone()));
        let s = -&(&(&lam * &lam) + &ExactScalar::one());
        assert_eq!(prod, OpMatrix::scalar(2, 3, s.pow(2)));
    }

    #[test]
    fn open_chains_commute() {
        let sig = GradingSignature::sl(2);
        let k = BoundarySpec::sp_blocks([1, 1, 0, 0], ExactScalar::ratio(3, 2));
        let tr = Transfer::new(&ChainSpec::open_sp(sig, 2, k)).unwrap();
        assert!(tr.commutator_norm(c(0.3, 0.2), c(-0.7, 1.1)) < 1e-10);
        assert!(tr.commutator_symbolic().is_zero());
        let snp = GradingSignature::new(2, 2, BasisOrder::Symmetric, 1).unwrap();
        let tr = Transfer::new(&ChainSpec::open_snp(snp, 1, BoundarySpec::Identity)).unwrap();
        assert!(tr.commutator_norm(c(0.3, 0.2), c(-0.7, 1.1)) < 1e-10);
    }

    #[test]
    fn broken_boundary_does_not_commute() {
        let k = broken_two_parameter_k(&ExactScalar::int(1), &ExactScalar::int(2));
        let tr = Transfer::new(&ChainSpec::open_sp(GradingSignature::sl(3), 2, BoundarySpec::SpCustom(k))).unwrap();
        assert!(tr.commutator_norm(c(0.3, 0.2), c(-0.7, 1.1)) > 1e-3);
    }

    #[test]
    fn vacuum_is_eigenvector() {
        let tr = Transfer::new(&ChainSpec::open_sp(GradingSignature::slmn(2, 1), 2, BoundarySpec::Identity)).unwrap();
        let v = tr.vacuum_action(c(0.4, -0.3));
        assert!(v.defect < 1e-12 * v.image_norm);
    }

    #[test]
    fn cap_and_grading_errors() {
        let spec = ChainSpec::closed(GradingSignature::sl(3), 9);
        assert!(matches!(Transfer::new(&spec), Err(ChainError::DimensionCap { .. })));
        let spec = ChainSpec::open_snp(GradingSignature::slmn(2, 2), 1, BoundarySpec::Identity);
        assert_eq!(Transfer::new(&spec).unwrap_err(), ChainError::SnpGrading);
    }

    #[test]
    fn hamiltonian_commutes_with_transfer() {
        let tr = Transfer::new(&ChainSpec::closed(GradingSignature::sl(2), 3)).unwrap();
        let h = tr.hamiltonian();
        let t = tr.at_exact(&ExactScalar::ratio(1, 7));
        assert!(h.commutator(&t).is_zero());
    }
}
