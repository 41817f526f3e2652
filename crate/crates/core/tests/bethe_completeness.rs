use num_complex::Complex64;
use openchain_core::bethe::{match_spectrum, residue_check, solve_bethe, BetheRootSet, SolverOptions};
use openchain_core::chain::ChainSpec;
use openchain_core::graded_tensor::{ExactScalar, GradingSignature};
use openchain_core::reflection::{BoundarySpec, SpBoundary, SpShape};

fn samples(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::new(-1.3 + 0.37 * k as f64, 0.21 + 0.05 * k as f64)).collect()
}

fn all_counts(levels: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..levels {
        out = out.into_iter().flat_map(|c| (0..=max).map(move |k| [c.clone(), vec![k]].concat())).collect();
    }
    out
}

fn solve_all(spec: &ChainSpec, counts: &[Vec<usize>]) -> Vec<BetheRootSet> {
    let opts = SolverOptions::default();
    counts.iter().flat_map(|c| solve_bethe(spec, c, &opts).unwrap().rootsets).collect()
}

fn assert_complete(spec: &ChainSpec, max: usize) {
    let sets = solve_all(spec, &all_counts(spec.sig.dim() - 1, max));
    let rep = match_spectrum(spec, &sets, &samples(8), 1e-8, 7).unwrap();
    assert!(rep.complete(), "unmatched curves: {:?}", rep.curves.iter().filter(|c| !c.matched).collect::<Vec<_>>());
    for (k, rs) in sets.iter().enumerate() {
        let own = match_spectrum(spec, std::slice::from_ref(rs), &samples(8), 1e-8, 7).unwrap();
        assert!(own.matched_curves > 0, "spurious root set #{k}: {rs:?}");
        let r = residue_check(spec, rs).unwrap();
        assert!(r.max_ratio < 1e-8, "{rs:?}: {r:?}");
    }
}

#[test]
fn sl2_trivial_boundary_two_sites() {
    assert_complete(&ChainSpec::open_sp(GradingSignature::sl(2), 2, BoundarySpec::Identity), 2);
}

#[test]
fn sl2_trivial_boundary_three_sites() {
    assert_complete(&ChainSpec::open_sp(GradingSignature::sl(2), 3, BoundarySpec::Identity), 3);
}

#[test]
fn sl2_diagonal_boundary_two_sites() {
    let k = BoundarySpec::Sp(SpBoundary { xi: ExactScalar::ratio(3, 2), shape: SpShape::Blocks([1, 1, 0, 0]), conjugator: None });
    assert_complete(&ChainSpec::open_sp(GradingSignature::sl(2), 2, k), 2);
}

#[test]
fn sl2_diagonal_boundary_three_sites() {
    let k = BoundarySpec::Sp(SpBoundary { xi: ExactScalar::ratio(3, 2), shape: SpShape::Blocks([1, 1, 0, 0]), conjugator: None });
    assert_complete(&ChainSpec::open_sp(GradingSignature::sl(2), 3, k), 3);
}

#[test]
fn sl21_vacuum_and_one_root_sector() {
    let spec = ChainSpec::open_sp(GradingSignature::slmn(2, 1), 2, BoundarySpec::Identity);
    let mut sets = vec![BetheRootSet::empty(2)];
    sets.extend(solve_all(&spec, &[vec![1, 0]]));
    assert!(sets.len() > 1);
    let rep = match_spectrum(&spec, &sets, &samples(8), 1e-8, 7).unwrap();
    let hit = |k: usize| rep.curves.iter().any(|c| c.matched && c.rootset == Some(k));
    assert!(hit(0));
    assert!((1..sets.len()).all(hit), "{rep:?}");
}

#[test]
fn sl2_trivial_boundary_four_sites() {
    assert_complete(&ChainSpec::open_sp(GradingSignature::sl(2), 4, BoundarySpec::Identity), 4);
}
