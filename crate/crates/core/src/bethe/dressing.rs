use num_complex::Complex64;

use super::{check_basis, eigenvalue_terms, BetheError, Case};
use crate::chain::ChainSpec;
use crate::graded_tensor::{rat_to_f64, GradingSignature};

/// Bethe roots λ_j^{(l)}, one list per level (level 1 first).
#[derive(Debug, Clone, PartialEq)]
pub struct BetheRootSet {
    pub counts: Vec<usize>,
    pub roots: Vec<Vec<Complex64>>,
}

impl BetheRootSet {
    pub fn new(roots: Vec<Vec<Complex64>>) -> Self {
        BetheRootSet { counts: roots.iter().map(Vec::len).collect(), roots }
    }

    pub fn empty(levels: usize) -> Self {
        Self::new(vec![Vec::new(); levels])
    }

    pub fn levels(&self) -> usize {
        self.roots.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Roots of level `l` (1-based); empty outside the stored range.
    pub fn level(&self, l: usize) -> &[Complex64] {
        if l == 0 {
            return &[];
        }
        self.roots.get(l - 1).map_or(&[], Vec::as_slice)
    }

    pub fn flatten(&self) -> Vec<Complex64> {
        self.roots.iter().flatten().copied().collect()
    }

    /// Inverse of [`flatten`](Self::flatten) for the same counts.
    pub fn with_flat(&self, z: &[Complex64]) -> Self {
        let mut k = 0;
        let roots = self
            .counts
            .iter()
            .map(|&c| {
                let v = z[k..k + c].to_vec();
                k += c;
                v
            })
            .collect();
        Self::new(roots)
    }

    /// Sign-flips each root into the half plane Im > 0 (ties: Re ≥ 0) and sorts each level.
    pub fn canonical(&self) -> Self {
        let canon = |z: &Complex64| {
            let tiny = 1e-12 * (1.0 + z.norm());
            if z.im < -tiny || (z.im.abs() <= tiny && z.re < 0.0) {
                -z
            } else {
                *z
            }
        };
        let roots = self
            .roots
            .iter()
            .map(|lv| {
                let mut v: Vec<Complex64> = lv.iter().map(canon).collect();
                v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                v
            })
            .collect();
        Self::new(roots)
    }

    /// Same root set up to level-wise permutation and λ → −λ, within `tol`.
    pub fn equivalent(&self, other: &Self, tol: f64) -> bool {
        if self.counts != other.counts {
            return false;
        }
        let (a, b) = (self.canonical(), other.canonical());
        a.roots.iter().zip(&b.roots).all(|(x, y)| {
            let mut used = vec![false; y.len()];
            x.iter().all(|p| {
                let hit = y.iter().enumerate().find(|(k, q)| !used[*k] && (p - *q).norm() < tol);
                match hit {
                    Some((k, _)) => {
                        used[k] = true;
                        true
                    }
                    None => false,
                }
            })
        })
    }
}

/// One factor (λ + a)/(λ + b).
type Factor = (Complex64, Complex64);

fn i_c(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

fn push_pair(out: &mut Vec<Factor>, x: Complex64, s: Complex64, num: f64, den: f64) {
    for y in [x, -x] {
        out.push((y + s + i_c(num), y + s + i_c(den)));
    }
}

/// Number of Bethe levels.
pub(super) fn level_count(case: Case, sig: &GradingSignature) -> usize {
    match case {
        Case::Sp => sig.dim() - 1,
        Case::Snp => (sig.m() / 2) + sig.n() / 2,
    }
}

/// A_l(λ) as a list of linear factors (λ + a)/(λ + b).
pub fn dressing_factors(
    case: Case,
    sig: &GradingSignature,
    l: usize,
    roots: &BetheRootSet,
) -> Result<Vec<Factor>, BetheError> {
    check_basis(case, sig)?;
    let d = sig.dim();
    if l >= d {
        return Err(BetheError::Unsupported(format!("dressing index {l} out of range 0..{d}")));
    }
    let levels = level_count(case, sig);
    if roots.levels() != levels {
        return Err(BetheError::Levels { got: roots.counts.clone(), want: levels });
    }
    let mut out = Vec::new();
    let first_form = |out: &mut Vec<Factor>, l: usize| {
        let s = i_c(l as f64 / 2.0);
        for &x in roots.level(l) {
            push_pair(out, x, s, 1.0, 0.0);
        }
        for &x in roots.level(l + 1) {
            push_pair(out, x, s, -0.5, 0.5);
        }
    };
    let second_form = |out: &mut Vec<Factor>, l: usize, base: usize| {
        let s = i_c(base as f64 - l as f64 / 2.0);
        for &x in roots.level(l) {
            push_pair(out, x, s, -1.0, 0.0);
        }
        for &x in roots.level(l + 1) {
            push_pair(out, x, s, 0.5, -0.5);
        }
    };
    if l == 0 {
        for &x in roots.level(1) {
            push_pair(&mut out, x, Complex64::new(0.0, 0.0), -0.5, 0.5);
        }
        return Ok(out);
    }
    match case {
        Case::Sp => {
            let m = sig.m();
            if l < m {
                first_form(&mut out, l);
            } else {
                second_form(&mut out, l, m);
            }
        }
        Case::Snp => {
            let n = sig.n() / 2;
            if 2 * l + 1 > d {
                let rho = i_c(rat_to_f64(&sig.rho()));
                return Ok(dressing_factors(case, sig, d - 1 - l, roots)?
                    .into_iter()
                    .map(|(a, b)| (rho - a, rho - b))
                    .collect());
            }
            if 2 * l + 1 == d {
                let s = i_c(n as f64 - l as f64 / 2.0);
                for &x in roots.level(l) {
                    push_pair(&mut out, x, s, -1.0, 0.0);
                    push_pair(&mut out, x, s, 0.5, -0.5);
                }
            } else if l < n {
                first_form(&mut out, l);
            } else {
                second_form(&mut out, l, n);
            }
        }
    }
    Ok(out)
}

fn eval_factors(factors: &[Factor], lam: Complex64) -> Result<Complex64, BetheError> {
    let mut v = Complex64::new(1.0, 0.0);
    for (a, b) in factors {
        let den = lam + b;
        if den.norm() <= f64::EPSILON * (1.0 + lam.norm() + b.norm()) {
            return Err(BetheError::Pole("dressing A_l"));
        }
        v *= (lam + a) / den;
    }
    Ok(v)
}

/// A_l(λ).
pub fn dressing(
    case: Case,
    sig: &GradingSignature,
    l: usize,
    roots: &BetheRootSet,
    lam: Complex64,
) -> Result<Complex64, BetheError> {
    eval_factors(&dressing_factors(case, sig, l, roots)?, lam)
}

/// Λ(λ): every term of Λ⁰ multiplied by its dressing.
pub fn dressed_eigenvalue(spec: &ChainSpec, roots: &BetheRootSet, lam: Complex64) -> Result<Complex64, BetheError> {
    let case = Case::of(spec)?;
    let terms: Vec<Complex64> = eigenvalue_terms(spec, &lam)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (l, t) in terms.iter().enumerate() {
        total += t * dressing(case, &spec.sig, l, roots, lam)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticityReport {
    /// (identity label, deviation) per evaluated identity.
    pub checks: Vec<(String, f64)>,
    /// Identities whose check point hit a pole.
    pub skipped: usize,
    pub max_deviation: f64,
}

/// Identities A_j(p) = A_{j−1}(p) built into the dressings, and for SNP the
/// crossing relation A_l(λ) = A_{d−1−l}(−λ−iρ).
pub fn analyticity_check(case: Case, sig: &GradingSignature, roots: &BetheRootSet) -> Result<AnalyticityReport, BetheError> {
    let d = sig.dim();
    // (j, point): compare A_j and A_{j−1} at the point.
    let mut pairs: Vec<(usize, Complex64)> = Vec::new();
    match case {
        Case::Sp => {
            let (m, n) = (sig.m(), sig.n());
            for l in 1..m {
                pairs.push((l, i_c(-(l as f64) / 2.0)));
            }
            for l in (m + 1).saturating_sub(n).max(1)..m {
                pairs.push((2 * m - l, i_c(-(l as f64) / 2.0)));
            }
        }
        Case::Snp => {
            let n = sig.n() / 2;
            let direct_max = (d - 1) / 2;
            for j in 1..n.min(direct_max + 1) {
                pairs.push((j, i_c(-(j as f64) / 2.0)));
            }
            for j in (n + 1)..=direct_max {
                if 2 * j + 1 == d {
                    continue;
                }
                pairs.push((j, i_c(-((2 * n) as f64 - j as f64) / 2.0)));
            }
        }
    }
    let mut checks = Vec::new();
    let mut skipped = 0;
    for (j, p) in pairs {
        match (dressing(case, sig, j, roots, p), dressing(case, sig, j - 1, roots, p)) {
            (Ok(x), Ok(y)) => checks.push((format!("A_{j} = A_{} at {:+}i", j - 1, p.im), (x - y).norm() / x.norm().max(1.0))),
            _ => skipped += 1,
        }
    }
    if case == Case::Snp {
        let rho = i_c(rat_to_f64(&sig.rho()));
        let points = [Complex64::new(0.31, 0.17), Complex64::new(-0.83, 0.52), Complex64::new(1.27, -0.44)];
        for l in 0..d {
            let mut dev: f64 = 0.0;
            for &lam in &points {
                match (dressing(case, sig, l, roots, lam), dressing(case, sig, d - 1 - l, roots, -lam - rho)) {
                    (Ok(x), Ok(y)) => dev = dev.max((x - y).norm() / x.norm().max(1.0)),
                    _ => skipped += 1,
                }
            }
            checks.push((format!("crossing A_{l}"), dev));
        }
    }
    let max_deviation = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(AnalyticityReport { checks, skipped, max_deviation })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueReport {
    pub poles: usize,
    /// Largest |h·Λ(p+h)| relative to the size of Λ on a small circle around p.
    pub max_ratio: f64,
}

/// Numerical residues of the dressed Λ at every dressing pole.
pub fn residue_check(spec: &ChainSpec, roots: &BetheRootSet) -> Result<ResidueReport, BetheError> {
    let case = Case::of(spec)?;
    let d = spec.sig.dim();
    let mut poles: Vec<Complex64> = Vec::new();
    for l in 0..d {
        for (_, b) in dressing_factors(case, &spec.sig, l, roots)? {
            let p = -b;
            if !poles.iter().any(|q| (q - p).norm() < 1e-9) {
                poles.push(p);
            }
        }
    }
    let h = 1e-10;
    let mut max_ratio: f64 = 0.0;
    let mut counted = 0;
    for p in &poles {
        let near = [0.0, 1.3, 2.9].iter().map(|t: &f64| p + Complex64::from_polar(h, *t));
        let circle = [0.4, 2.0, 3.7, 5.1].iter().map(|t: &f64| p + Complex64::from_polar(0.05, *t));
        let scale = circle
            .filter_map(|z| dressed_eigenvalue(spec, roots, z).ok())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let local = near
            .filter_map(|z| dressed_eigenvalue(spec, roots, z).ok())
            .map(|v| h * v.norm())
            .fold(0.0, f64::max);
        if scale > 0.0 {
            counted += 1;
            max_ratio = max_ratio.max(local / scale);
        }
    }
    Ok(ResidueReport { poles: counted, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::lambda0;
    use crate::graded_tensor::BasisOrder;
    use crate::reflection::BoundarySpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_roots(levels: usize, rng: &mut ChaCha8Rng) -> BetheRootSet {
        BetheRootSet::new(
            (0..levels)
                .map(|_| (0..rng.gen_range(0..3)).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0))).collect())
                .collect(),
        )
    }

    #[test]
    fn empty_rootset_gives_vacuum() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(3), 2, BoundarySpec::Identity);
        let lam = c(0.4, -0.3);
        let r = BetheRootSet::empty(2);
        for l in 0..3 {
            assert_eq!(dressing(Case::Sp, &spec.sig, l, &r, lam).unwrap(), c(1.0, 0.0));
        }
        let l0: Complex64 = lambda0(&spec, &lam).unwrap();
        assert!((dressed_eigenvalue(&spec, &r, lam).unwrap() - l0).norm() < 1e-14 * l0.norm());
    }

    #[test]
    fn single_root_a0_and_parity() {
        let sig = GradingSignature::sl(2);
        let x = c(0.7, 0.1);
        let lam = c(0.2, 0.9);
        let a0 = dressing(Case::Sp, &sig, 0, &BetheRootSet::new(vec![vec![x]]), lam).unwrap();
        let h = c(0.0, 0.5);
        let want = (lam + x - h) * (lam - x - h) / ((lam + x + h) * (lam - x + h));
        assert!((a0 - want).norm() < 1e-14);
        let flipped = dressing(Case::Sp, &sig, 0, &BetheRootSet::new(vec![vec![-x]]), lam).unwrap();
        assert!((a0 - flipped).norm() < 1e-14);
    }

    #[test]
    fn sp_analyticity_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sig in [GradingSignature::sl(3), GradingSignature::slmn(2, 2), GradingSignature::slmn(1, 2)] {
            for _ in 0..20 {
                let r = random_roots(sig.dim() - 1, &mut rng);
                let rep = analyticity_check(Case::Sp, &sig, &r).unwrap();
                assert!(rep.max_deviation < 1e-12, "{sig:?} {rep:?}");
            }
        }
    }

    #[test]
    fn snp_analyticity_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sig = GradingSignature::new(2, 2, BasisOrder::Symmetric, 1).unwrap();
        for _ in 0..20 {
            let r = random_roots(2, &mut rng);
            let rep = analyticity_check(Case::Snp, &sig, &r).unwrap();
            assert!(rep.max_deviation < 1e-12, "{rep:?}");
        }
    }

    #[test]
    fn pole_is_reported() {
        let sig = GradingSignature::sl(2);
        let x = c(0.3, 0.0);
        let r = BetheRootSet::new(vec![vec![x]]);
        assert_eq!(dressing(Case::Sp, &sig, 0, &r, -x - c(0.0, 0.5)), Err(BetheError::Pole("dressing A_l")));
    }

    #[test]
    fn canonical_equivalence() {
        let a = BetheRootSet::new(vec![vec![c(0.5, -0.2), c(-1.0, 0.0)]]);
        let b = BetheRootSet::new(vec![vec![c(1.0, 0.0), c(-0.5, 0.2)]]);
        assert!(a.equivalent(&b, 1e-9));
        assert!(!a.equivalent(&BetheRootSet::new(vec![vec![c(1.0, 0.0), c(0.5, 0.2)]]), 1e-9));
    }
}
