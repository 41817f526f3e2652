use num_complex::Complex64;

use super::{dressed_eigenvalue, BetheError, BetheRootSet};
use crate::chain::{ChainSpec, EigenCurve, Transfer};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMatch {
    pub curve_id: usize,
    pub multiplicity: usize,
    /// Index into the supplied root sets of the best fit.
    pub rootset: Option<usize>,
    pub counts: Option<Vec<usize>>,
    /// Max relative deviation over the λ-samples of the best fit.
    pub deviation: f64,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub curves: Vec<CurveMatch>,
    pub oracle: Vec<EigenCurve>,
    pub lambdas: Vec<Complex64>,
    pub tolerance: f64,
    pub matched_curves: usize,
    /// Sum of multiplicities of matched curves.
    pub matched_dimension: usize,
    pub dimension: usize,
}

impl MatchReport {
    pub fn complete(&self) -> bool {
        self.matched_curves == self.curves.len()
    }
}

/// Compares each oracle eigenvalue curve with the dressed eigenvalues of the
/// root sets and keeps the best fit.
pub fn match_spectrum(
    spec: &ChainSpec,
    rootsets: &[BetheRootSet],
    lambdas: &[Complex64],
    tolerance: f64,
    seed: u64,
) -> Result<MatchReport, BetheError> {
    let tr = Transfer::new(spec).map_err(|e| BetheError::Unsupported(e.to_string()))?;
    let oracle = tr.eigen_curves(lambdas, seed).map_err(|e| BetheError::Unsupported(e.to_string()))?;
    let values: Vec<Option<Vec<Complex64>>> = rootsets
        .iter()
        .map(|rs| lambdas.iter().map(|&l| dressed_eigenvalue(spec, rs, l)).collect::<Result<Vec<_>, _>>().ok())
        .collect();
    let mut curves = Vec::with_capacity(oracle.len());
    for curve in &oracle {
        let mut best: Option<(usize, f64)> = None;
        for (k, v) in values.iter().enumerate() {
            let Some(v) = v else { continue };
            let dev = v
                .iter()
                .zip(&curve.values)
                .map(|(a, b)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, d)| dev < d) {
                best = Some((k, dev));
            }
        }
        let (rootset, deviation) = match best {
            Some((k, d)) => (Some(k), d),
            None => (None, f64::INFINITY),
        };
        curves.push(CurveMatch {
            curve_id: curve.id,
            multiplicity: curve.multiplicity,
            rootset,
            counts: rootset.map(|k| rootsets[k].counts.clone()),
            deviation,
            matched: deviation < tolerance,
        });
    }
    let matched_curves = curves.iter().filter(|c| c.matched).count();
    let matched_dimension = curves.iter().filter(|c| c.matched).map(|c| c.multiplicity).sum();
    Ok(MatchReport {
        curves,
        dimension: oracle.iter().map(|c| c.multiplicity).sum(),
        oracle,
        lambdas: lambdas.to_vec(),
        tolerance,
        matched_curves,
        matched_dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_tensor::GradingSignature;
    use crate::reflection::BoundarySpec;

    #[test]
    fn vacuum_matches_and_perturbed_root_does_not() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 2, BoundarySpec::Identity);
        let lams = [Complex64::new(0.3, 0.2), Complex64::new(-0.7, 0.4), Complex64::new(1.1, -0.5)];
        let singlet = BetheRootSet::new(vec![vec![Complex64::new(0.5, 0.0)]]);
        let off = BetheRootSet::new(vec![vec![Complex64::new(0.6, 0.0)]]);
        let rep = match_spectrum(&spec, &[BetheRootSet::empty(1), singlet], &lams, 1e-8, 3).unwrap();
        assert!(rep.complete(), "{rep:?}");
        assert!(rep.curves.iter().any(|c| c.rootset == Some(0) && c.deviation < 1e-12));
        let rep = match_spectrum(&spec, &[BetheRootSet::empty(1), off], &lams, 1e-8, 3).unwrap();
        assert_eq!(rep.matched_curves, 1);
        assert!(rep.curves.iter().filter(|c| !c.matched).all(|c| c.deviation > 1e-3));
    }
}
