use num_complex::Complex64;

use super::dressing::level_count;
use super::{check_basis, e_fn, e_real, BetheError, BetheRootSet, Case, DiagonalBoundary};
use crate::chain::ChainSpec;
use crate::graded_tensor::{ExactScalar, GradingSignature};

/// Treatment of the j = i factor e₂(λ_i − λ_j)e₂(λ_i + λ_j) in same-level products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SelfTermPolicy {
    /// Keep both factors: e₂(0)·e₂(2λ_i).
    IncludeSelf,
    /// Drop the j = i factor entirely.
    ExcludeSelf,
    /// Keep e₂(0) = −1 and drop e₂(2λ_i). Calibrated default (see README).
    #[default]
    DifferenceSelfOnly,
}

impl SelfTermPolicy {
    pub fn name(self) -> &'static str {
        match self {
            SelfTermPolicy::IncludeSelf => "include_self",
            SelfTermPolicy::ExcludeSelf => "exclude_self",
            SelfTermPolicy::DifferenceSelfOnly => "difference_self_only",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [SelfTermPolicy::IncludeSelf, SelfTermPolicy::ExcludeSelf, SelfTermPolicy::DifferenceSelfOnly]
            .into_iter()
            .find(|p| p.name() == s)
    }

    pub fn all() -> [SelfTermPolicy; 3] {
        [SelfTermPolicy::IncludeSelf, SelfTermPolicy::ExcludeSelf, SelfTermPolicy::DifferenceSelfOnly]
    }
}

/// Shape of one Bethe equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// 1 = −∏ e₂(λ_i ∓ λ_j) ∏_{τ=±1} ∏ e₋₁(λ_i ∓ λ_j^{(l+τ)}).
    Standard,
    /// 1 = ∏ e₋₁(λ_i ∓ λ_j^{(l−1)}) ∏ e₁(λ_i ∓ λ_j^{(l+1)}); no same-level factor.
    Fermionic,
    /// SNP, M odd: e_{−1/2}(λ_i) = −∏ e₂e₋₁(λ_i ∓ λ_j) ∏ e₋₁(λ_i ∓ λ_j^{(l−1)}).
    TerminalOdd,
    /// SNP, M even: e₁(λ_i) = −∏ e₂(λ_i ∓ λ_j) ∏ e₋₁²(λ_i ∓ λ_j^{(l−1)}).
    TerminalEven,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDescriptor {
    /// 1-based level.
    pub level: usize,
    pub kind: NodeKind,
    /// Carries the e₁(λ)^{2L} source term.
    pub driven: bool,
}

/// Level table: SP has M+N−1 levels with the fermionic node at M; SNP has
/// m+n levels with the special node at n and the terminal equation at m+n.
pub fn level_structure(case: Case, sig: &GradingSignature) -> Result<Vec<LevelDescriptor>, BetheError> {
    check_basis(case, sig)?;
    let count = level_count(case, sig);
    let kind = |l: usize| match case {
        Case::Sp => {
            if sig.n() > 0 && l == sig.m() {
                NodeKind::Fermionic
            } else {
                NodeKind::Standard
            }
        }
        Case::Snp => {
            let n = sig.n() / 2;
            if l == count {
                if sig.m() % 2 == 1 {
                    NodeKind::TerminalOdd
                } else {
                    NodeKind::TerminalEven
                }
            } else if n > 0 && l == n {
                NodeKind::Fermionic
            } else {
                NodeKind::Standard
            }
        }
    };
    Ok((1..=count).map(|l| LevelDescriptor { level: l, kind: kind(l), driven: l == 1 }).collect())
}

/// Extra left-hand-side factor of one level.
#[derive(Debug, Clone, PartialEq)]
enum LhsFactor {
    /// −e_x(λ)⁻¹.
    MinusInverseE(Complex64),
    Constant(Complex64),
}

/// Everything needed to evaluate the Bethe equations of one chain.
#[derive(Debug, Clone)]
pub struct BetheSystem {
    pub case: Case,
    pub sig: GradingSignature,
    pub sites: usize,
    pub levels: Vec<LevelDescriptor>,
    pub policy: SelfTermPolicy,
    lhs: Vec<Vec<LhsFactor>>,
}

impl BetheSystem {
    pub fn new(spec: &ChainSpec, policy: SelfTermPolicy) -> Result<Self, BetheError> {
        let case = Case::of(spec)?;
        let sig = spec.sig.clone();
        let levels = level_structure(case, &sig)?;
        let boundary = DiagonalBoundary::of(spec)?;
        let mut lhs = vec![Vec::new(); levels.len()];
        match &boundary {
            DiagonalBoundary::Trivial => {}
            DiagonalBoundary::SpBlocks { blocks: [m1, m2, n2, _], xi } => {
                let two_xi = (xi * &ExactScalar::int(2)).to_complex();
                let at = |l: usize| (1..=levels.len()).contains(&l).then(|| l - 1);
                if let Some(k) = at(*m1) {
                    lhs[k].push(LhsFactor::MinusInverseE(two_xi + *m1 as f64));
                }
                if let Some(k) = at(sig.m() + n2) {
                    lhs[k].push(LhsFactor::MinusInverseE(two_xi + *m1 as f64 - *m2 as f64 - *n2 as f64));
                }
            }
            DiagonalBoundary::SnpDiagonal(k) => {
                for (idx, slot) in lhs.iter_mut().enumerate() {
                    let ratio = (&k[idx] / &k[idx + 1]).to_complex();
                    slot.push(LhsFactor::Constant(ratio));
                }
            }
        }
        Ok(BetheSystem { case, sig, sites: spec.sites, levels, policy, lhs })
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    fn same_level(&self, x: Complex64, y: Complex64, self_term: bool, ex: f64) -> Result<Complex64, BetheError> {
        if !self_term {
            return Ok(e_real(ex, x - y)? * e_real(ex, x + y)?);
        }
        match self.policy {
            SelfTermPolicy::IncludeSelf => Ok(e_real(ex, Complex64::new(0.0, 0.0))? * e_real(ex, x + y)?),
            SelfTermPolicy::ExcludeSelf => Ok(Complex64::new(1.0, 0.0)),
            SelfTermPolicy::DifferenceSelfOnly => e_real(ex, Complex64::new(0.0, 0.0)),
        }
    }

    fn pair(ex: f64, x: Complex64, ys: &[Complex64], power: i32) -> Result<Complex64, BetheError> {
        let mut v = Complex64::new(1.0, 0.0);
        for &y in ys {
            v *= (e_real(ex, x - y)? * e_real(ex, x + y)?).powi(power);
        }
        Ok(v)
    }

    /// (LHS/RHS) − 1 for root i of level l (1-based).
    fn residual(&self, roots: &BetheRootSet, l: usize, i: usize) -> Result<Complex64, BetheError> {
        let desc = &self.levels[l - 1];
        let own = roots.level(l);
        let x = own[i];
        let mut lhs = Complex64::new(1.0, 0.0);
        if desc.driven {
            lhs *= e_real(1.0, x)?.powu(2 * self.sites as u32);
        }
        for f in &self.lhs[l - 1] {
            lhs *= match f {
                LhsFactor::MinusInverseE(p) => -1.0 / e_fn(*p, x)?,
                LhsFactor::Constant(c) => *c,
            };
        }
        let below = roots.level(l - 1);
        let above = roots.level(l + 1);
        let same = |ex: f64| -> Result<Complex64, BetheError> {
            let mut v = Complex64::new(1.0, 0.0);
            for (j, &y) in own.iter().enumerate() {
                v *= self.same_level(x, y, j == i, ex)?;
            }
            Ok(v)
        };
        let rhs = match desc.kind {
            NodeKind::Standard => -same(2.0)? * Self::pair(-1.0, x, below, 1)? * Self::pair(-1.0, x, above, 1)?,
            NodeKind::Fermionic => Self::pair(-1.0, x, below, 1)? * Self::pair(1.0, x, above, 1)?,
            NodeKind::TerminalOdd => {
                lhs *= e_real(-0.5, x)?;
                -same(2.0)? * same(-1.0)? * Self::pair(-1.0, x, below, 1)?
            }
            NodeKind::TerminalEven => {
                lhs *= e_real(1.0, x)?;
                -same(2.0)? * Self::pair(-1.0, x, below, 2)?
            }
        };
        if rhs.norm() == 0.0 || !rhs.is_finite() {
            return Err(BetheError::Pole("Bethe equation right-hand side"));
        }
        Ok(lhs / rhs - 1.0)
    }

    /// One residual per root, level by level.
    pub fn residuals(&self, roots: &BetheRootSet) -> Result<Vec<Complex64>, BetheError> {
        if roots.levels() != self.level_count() {
            return Err(BetheError::Levels { got: roots.counts.clone(), want: self.level_count() });
        }
        let mut out = Vec::with_capacity(roots.total());
        for l in 1..=roots.levels() {
            for i in 0..roots.counts[l - 1] {
                out.push(self.residual(roots, l, i)?);
            }
        }
        Ok(out)
    }
}

/// Bethe-equation residuals (LHS/RHS − 1) for every root.
pub fn bethe_residuals(
    spec: &ChainSpec,
    roots: &BetheRootSet,
    policy: SelfTermPolicy,
) -> Result<Vec<Complex64>, BetheError> {
    BetheSystem::new(spec, policy)?.residuals(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_tensor::BasisOrder;
    use crate::reflection::BoundarySpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_rootset_has_no_residuals() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(3), 2, BoundarySpec::Identity);
        assert!(bethe_residuals(&spec, &BetheRootSet::empty(2), SelfTermPolicy::default()).unwrap().is_empty());
    }

    #[test]
    fn single_root_policies() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 1, BoundarySpec::Identity);
        let x = c(0.4, 0.1);
        let r = BetheRootSet::new(vec![vec![x]]);
        let e = |a: f64, z: Complex64| e_real(a, z).unwrap();
        let lhs = e(1.0, x).powu(2);
        let inc = bethe_residuals(&spec, &r, SelfTermPolicy::IncludeSelf).unwrap()[0];
        assert!((inc - (lhs / (-e(2.0, c(0.0, 0.0)) * e(2.0, 2.0 * x)) - 1.0)).norm() < 1e-14);
        let exc = bethe_residuals(&spec, &r, SelfTermPolicy::ExcludeSelf).unwrap()[0];
        assert!((exc - (-lhs - 1.0)).norm() < 1e-14);
        let dso = bethe_residuals(&spec, &r, SelfTermPolicy::DifferenceSelfOnly).unwrap()[0];
        assert!((dso - (lhs - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn level_tables() {
        let t = level_structure(Case::Sp, &GradingSignature::slmn(2, 2)).unwrap();
        let kinds: Vec<NodeKind> = t.iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Standard, NodeKind::Fermionic, NodeKind::Standard]);
        let odd = GradingSignature::new(3, 2, BasisOrder::Symmetric, 1).unwrap();
        let kinds: Vec<NodeKind> = level_structure(Case::Snp, &odd).unwrap().iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Fermionic, NodeKind::TerminalOdd]);
        let even = GradingSignature::new(2, 2, BasisOrder::Symmetric, 1).unwrap();
        let kinds: Vec<NodeKind> = level_structure(Case::Snp, &even).unwrap().iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Fermionic, NodeKind::TerminalEven]);
    }

    #[test]
    fn sp_boundary_factor_on_level_m1() {
        let xi = ExactScalar::ratio(3, 2);
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 1, BoundarySpec::sp_blocks([1, 1, 0, 0], xi));
        let x = c(0.3, 0.2);
        let r = BetheRootSet::new(vec![vec![x]]);
        let got = bethe_residuals(&spec, &r, SelfTermPolicy::DifferenceSelfOnly).unwrap()[0];
        let lhs = e_real(1.0, x).unwrap().powu(2) * (-1.0 / e_real(4.0, x).unwrap());
        assert!((got - (lhs - 1.0)).norm() < 1e-14);
    }
}
