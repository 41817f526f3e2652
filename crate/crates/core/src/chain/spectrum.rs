use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChainError, Transfer};
use crate::graded_tensor::OpMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("eigenvalue extraction failed")]
    Eigen,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Clone, Debug)]
pub struct SpectralSample {
    pub lambda: Complex64,
    pub matrix: OpMatrix<Complex64>,
    pub eigenvalues: Vec<Complex64>,
}

/// One joint eigenvalue curve of the commuting family, sampled at the λ-points.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCurve {
    pub id: usize,
    /// Dimension of the joint generalised eigenspace.
    pub multiplicity: usize,
    pub values: Vec<Complex64>,
    /// Largest deviation of an individual eigenvalue inside the block from `values`.
    pub spread: f64,
}

fn round_key(z: &Complex64) -> (i64, i64) {
    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
}

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues via a capped complex Schur iteration. The matrix is first
/// centred on its mean eigenvalue and rescaled: nalgebra's QR sweep stalls on
/// nearly scalar input. A failed attempt is retried on a random unitary
/// conjugate, which has the same spectrum.
fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>, SpectrumError> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mu = m.trace() / n as f64;
    let centred = m - DMatrix::<Complex64>::identity(n, n) * mu;
    let s = norm(&centred);
    if s == 0.0 {
        return Ok(vec![mu; n]);
    }
    let base = centred / Complex64::new(s, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut work = base.clone();
    for _ in 0..8 {
        if let Some(schur) = Schur::try_new(work, f64::EPSILON, SCHUR_MAX_ITER) {
            let ev = schur.eigenvalues().ok_or(SpectrumError::Eigen)?;
            return Ok(ev.iter().map(|z| mu + z * s).collect());
        }
        let r = DMatrix::<Complex64>::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = r.qr().q();
        work = q.adjoint() * &base * &q;
    }
    Err(SpectrumError::Eigen)
}

/// Eigenvalues in canonical order: lexicographic on (rounded re, rounded im).
pub fn sorted_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>, SpectrumError> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut v = eigenvalues(m)?;
    v.sort_by(|a, b| round_key(a).cmp(&round_key(b)).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    Ok(v)
}

fn norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Single-linkage clusters of eigenvalues.
fn cluster(ev: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (ev[i] - ev[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += ev[i];
                g.2 += 1;
            }
            None => groups.push((r, ev[i], 1)),
        }
    }
    groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}

/// Orthonormal basis (as columns) of the kernel of `(g − μ)^m`.
fn generalised_eigenspace(g: &DMatrix<Complex64>, mu: Complex64, m: usize) -> DMatrix<Complex64> {
    let n = g.nrows();
    let shifted = g - DMatrix::<Complex64>::identity(n, n) * mu;
    let mut p = shifted.clone();
    for _ in 1..m {
        p = &p * &shifted;
    }
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut w = DMatrix::<Complex64>::zeros(n, m);
    for (col, &k) in order.iter().take(m).enumerate() {
        for r in 0..n {
            w[(r, col)] = vt[(k, r)].conj();
        }
    }
    w
}

const CLUSTER_TOL: f64 = 1e-6;

fn split(mats: &[DMatrix<Complex64>], rng: &mut ChaCha8Rng, depth: usize) -> Result<Vec<(usize, Vec<Complex64>, f64)>, SpectrumError> {
    let n = mats[0].nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let traces: Vec<Complex64> = mats.iter().map(|m| m.trace() / n as f64).collect();
    if n == 1 {
        return Ok(vec![(1, traces, 0.0)]);
    }
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for m in mats {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        g += m * (c / norm(m).max(1e-300));
    }
    let gn = norm(&g).max(1e-300);
    g /= Complex64::new(gn, 0.0);
    let ev = eigenvalues(&g)?;
    let clusters = cluster(&ev, CLUSTER_TOL);
    if clusters.len() == 1 {
        let mut spread = 0.0f64;
        for (m, t) in mats.iter().zip(&traces) {
            let evm = eigenvalues(m)?;
            spread = spread.max(evm.iter().map(|z| (z - t).norm()).fold(0.0, f64::max));
        }
        let scale = mats.iter().map(norm).fold(1.0, f64::max);
        if spread <= 1e-5 * scale || depth >= 4 {
            return Ok(vec![(n, traces, spread)]);
        }
        return split(mats, rng, depth + 1);
    }
    let mut out = Vec::new();
    for (mu, m) in clusters {
        let w = generalised_eigenspace(&g, mu, m);
        let wa = w.adjoint();
        let restricted: Vec<DMatrix<Complex64>> = mats.iter().map(|x| &wa * x * &w).collect();
        out.extend(split(&restricted, rng, depth)?);
    }
    Ok(out)
}

/// Joint eigenvalue curves of a commuting family `mats[k] = t(λ_k)`.
pub fn eigen_curves(mats: &[DMatrix<Complex64>], seed: u64) -> Result<Vec<EigenCurve>, SpectrumError> {
    if mats.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = split(mats, &mut rng, 0)?;
    blocks.sort_by(|a, b| {
        let ka: Vec<(i64, i64)> = a.1.iter().map(round_key).collect();
        let kb: Vec<(i64, i64)> = b.1.iter().map(round_key).collect();
        ka.cmp(&kb)
    });
    Ok(blocks
        .into_iter()
        .enumerate()
        .map(|(id, (multiplicity, values, spread))| EigenCurve { id, multiplicity, values, spread })
        .collect())
}

impl Transfer {
    pub fn exact_spectrum(&self, lambdas: &[Complex64]) -> Result<Vec<SpectralSample>, SpectrumError> {
        lambdas
            .iter()
            .map(|&lambda| {
                let matrix = self.at_complex(lambda);
                let eigenvalues = sorted_eigenvalues(&matrix.to_dense())?;
                Ok(SpectralSample { lambda, matrix, eigenvalues })
            })
            .collect()
    }

    pub fn eigen_curves(&self, lambdas: &[Complex64], seed: u64) -> Result<Vec<EigenCurve>, SpectrumError> {
        let mats: Vec<DMatrix<Complex64>> = lambdas.iter().map(|&l| self.at_complex(l).to_dense()).collect();
        eigen_curves(&mats, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;
    use crate::graded_tensor::GradingSignature;
    use crate::reflection::BoundarySpec;

    #[test]
    fn closed_single_site_spectrum() {
        let tr = Transfer::new(&ChainSpec::closed(GradingSignature::sl(2), 1)).unwrap();
        let lam = Complex64::new(0.3, 0.1);
        let s = tr.exact_spectrum(&[lam]).unwrap();
        let want = lam * 2.0 + Complex64::i();
        assert!(s[0].eigenvalues.iter().all(|e| (e - want).norm() < 1e-12));
    }

    #[test]
    fn curves_cover_dimension_and_trace() {
        let tr = Transfer::new(&ChainSpec::open_sp(GradingSignature::sl(2), 3, BoundarySpec::Identity)).unwrap();
        let lams = [Complex64::new(0.2, 0.1), Complex64::new(-0.5, 0.7), Complex64::new(1.1, -0.3)];
        let curves = tr.eigen_curves(&lams, 1).unwrap();
        assert_eq!(curves.iter().map(|c| c.multiplicity).sum::<usize>(), 8);
        for (k, &l) in lams.iter().enumerate() {
            let tr_direct = tr.at_complex(l).to_dense().trace();
            let tr_curves: Complex64 = curves.iter().map(|c| c.values[k] * c.multiplicity as f64).sum();
            assert!((tr_direct - tr_curves).norm() < 1e-9 * tr_direct.norm().max(1.0));
        }
    }
}
