use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BetheError, BetheRootSet, BetheSystem, SelfTermPolicy};
use crate::chain::ChainSpec;

/// Produces starting points for the Newton solver.
pub trait SeedStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// `count` flattened starting vectors for the given level counts.
    fn seeds(&self, system: &BetheSystem, counts: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>>;
}

/// Random points on a jittered lattice covering the region where roots live.
#[derive(Debug, Clone)]
pub struct GridSeeds {
    pub re_range: f64,
    pub im_range: f64,
    pub spacing: f64,
}

impl Default for GridSeeds {
    fn default() -> Self {
        GridSeeds { re_range: 2.5, im_range: 1.5, spacing: 0.25 }
    }
}

impl SeedStrategy for GridSeeds {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn seeds(&self, _system: &BetheSystem, counts: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
        let total: usize = counts.iter().sum();
        let nr = (self.re_range / self.spacing).round() as i64;
        let ni = (self.im_range / self.spacing).round() as i64;
        (0..count)
            .map(|_| {
                (0..total)
                    .map(|_| {
                        let gr = rng.gen_range(-nr..=nr) as f64 * self.spacing;
                        let gi = rng.gen_range(-ni..=ni) as f64 * self.spacing;
                        let j = 0.4 * self.spacing;
                        Complex64::new(gr + rng.gen_range(-j..j), gi + rng.gen_range(-j..j))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Tracks H(z, t) = (1−t)γ(z − s) + t·F(z) from t = 0 to 1, starting from the
/// free-magnon positions ½cot(πk/2L) on level 1 and random points elsewhere.
#[derive(Debug, Clone)]
pub struct HomotopySeeds {
    pub steps: usize,
}

impl Default for HomotopySeeds {
    fn default() -> Self {
        HomotopySeeds { steps: 24 }
    }
}

impl SeedStrategy for HomotopySeeds {
    fn name(&self) -> &'static str {
        "homotopy"
    }

    fn seeds(&self, system: &BetheSystem, counts: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
        let shape = BetheRootSet::new(counts.iter().map(|&c| vec![Complex64::new(0.0, 0.0); c]).collect());
        let two_l = (2 * system.sites).max(2);
        (0..count)
            .map(|_| {
                let mut start = Vec::new();
                for (lvl, &c) in counts.iter().enumerate() {
                    for _ in 0..c {
                        let z = if lvl == 0 {
                            let k = rng.gen_range(1..two_l);
                            let th = std::f64::consts::PI * k as f64 / two_l as f64;
                            0.5 / th.tan() + if k * 2 == two_l { 0.3 } else { 0.0 }
                        } else {
                            rng.gen_range(-1.5..1.5)
                        };
                        start.push(Complex64::new(z + rng.gen_range(-0.05..0.05), rng.gen_range(-0.3..0.3)));
                    }
                }
                let gamma = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                track(system, &shape, &start, gamma, self.steps).unwrap_or(start)
            })
            .collect()
    }
}

fn track(system: &BetheSystem, shape: &BetheRootSet, start: &[Complex64], gamma: Complex64, steps: usize) -> Option<Vec<Complex64>> {
    let mut z = start.to_vec();
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let h = |w: &[Complex64]| -> Option<Vec<Complex64>> {
            let f = system.residuals(&shape.with_flat(w)).ok()?;
            Some(w.iter().zip(start).zip(f).map(|((wi, si), fi)| gamma * (1.0 - t) * (wi - si) + fi * t).collect())
        };
        for _ in 0..6 {
            let hv = h(&z)?;
            let step = newton_step(&h, &z, &hv)?;
            z.iter_mut().zip(&step).for_each(|(a, b)| *a += b);
        }
    }
    Some(z)
}

/// Central-difference complex Jacobian.
fn jacobian(f: &dyn Fn(&[Complex64]) -> Option<Vec<Complex64>>, z: &[Complex64]) -> Option<DMatrix<Complex64>> {
    let n = z.len();
    let mut j = DMatrix::<Complex64>::zeros(n, n);
    let mut w = z.to_vec();
    for c in 0..n {
        let h = 1e-6 * (1.0 + z[c].norm());
        w[c] = z[c] + h;
        let fp = f(&w)?;
        w[c] = z[c] - h;
        let fm = f(&w)?;
        w[c] = z[c];
        for r in 0..n {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    Some(j)
}

fn newton_step(
    f: &dyn Fn(&[Complex64]) -> Option<Vec<Complex64>>,
    z: &[Complex64],
    fz: &[Complex64],
) -> Option<Vec<Complex64>> {
    let j = jacobian(f, z)?;
    let rhs = DVector::from_iterator(fz.len(), fz.iter().map(|v| -v));
    let step = j.lu().solve(&rhs)?;
    step.iter().all(|v| v.is_finite()).then(|| step.iter().copied().collect())
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub policy: SelfTermPolicy,
    /// Registered seeding strategy names.
    pub strategies: Vec<String>,
    pub seeds_per_strategy: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub tolerance: f64,
    pub step_tolerance: f64,
    /// Residual bound a returned root set must meet.
    pub accept: f64,
    pub dedup_tolerance: f64,
    /// Roots closer than this to a singular point count as singular.
    pub singular_tolerance: f64,
    /// Roots larger than this are treated as having escaped to infinity.
    pub max_root_norm: f64,
    /// Solutions whose Jacobian has relative smallest singular value below this
    /// lie on a continuum and are dropped.
    pub isolation_tolerance: f64,
    pub threads: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            policy: SelfTermPolicy::default(),
            strategies: vec!["grid".into(), "homotopy".into()],
            seeds_per_strategy: 64,
            seed: 1,
            max_iterations: 200,
            max_halvings: 20,
            tolerance: 1e-12,
            step_tolerance: 1e-14,
            accept: 1e-10,
            dedup_tolerance: 1e-7,
            singular_tolerance: 1e-6,
            max_root_norm: 1e4,
            isolation_tolerance: 1e-7,
            threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub counts: Vec<usize>,
    pub rootsets: Vec<BetheRootSet>,
    /// max |residual| per returned root set.
    pub residuals: Vec<f64>,
    pub attempts: usize,
    pub converged: usize,
    pub not_converged: usize,
    pub rejected_singular: usize,
    pub rejected_continuum: usize,
    pub rejected_infinite: usize,
}

pub fn seed_registry() -> Vec<Box<dyn SeedStrategy>> {
    vec![Box::new(GridSeeds::default()), Box::new(HomotopySeeds::default())]
}

pub fn seed_strategy(name: &str) -> Option<Box<dyn SeedStrategy>> {
    seed_registry().into_iter().find(|s| s.name() == name)
}

enum Attempt {
    Failed,
    Converged(Vec<Complex64>, f64, DMatrix<Complex64>),
}

fn newton(system: &BetheSystem, shape: &BetheRootSet, z0: &[Complex64], opts: &SolverOptions) -> Attempt {
    let f = |w: &[Complex64]| system.residuals(&shape.with_flat(w)).ok().filter(|v| v.iter().all(|x| x.is_finite()));
    let mut z = z0.to_vec();
    let Some(mut fz) = f(&z) else { return Attempt::Failed };
    let mut r = max_abs(&fz);
    for _ in 0..opts.max_iterations {
        if r < opts.tolerance {
            break;
        }
        let Some(step) = newton_step(&f, &z, &fz) else { return Attempt::Failed };
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<Complex64> = z.iter().zip(&step).map(|(a, b)| a + b * scale).collect();
            if let Some(ft) = f(&trial) {
                let rt = max_abs(&ft);
                if rt < r {
                    z = trial;
                    fz = ft;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
        if max_abs(&step) * scale < opts.step_tolerance {
            break;
        }
    }
    if r >= opts.accept {
        return Attempt::Failed;
    }
    match jacobian(&f, &z) {
        Some(j) => Attempt::Converged(z, r, j),
        None => Attempt::Failed,
    }
}

/// A root at 0 or ±i/2, or two roots of one level at equal or opposite positions.
fn is_singular(roots: &BetheRootSet, tol: f64) -> bool {
    let half = Complex64::new(0.0, 0.5);
    roots.roots.iter().any(|lv| {
        lv.iter().any(|x| x.norm() < tol || (x - half).norm() < tol || (x + half).norm() < tol)
            || lv.iter().enumerate().any(|(i, a)| lv[i + 1..].iter().any(|b| (a - b).norm() < tol || (a + b).norm() < tol))
    })
}

fn is_continuum(j: &DMatrix<Complex64>, tol: f64) -> bool {
    if j.nrows() == 0 {
        return false;
    }
    let sv = j.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    max == 0.0 || min / max < tol
}

/// Solves the Bethe equations for the given level counts. The empty solution is
/// returned for all-zero counts.
pub fn solve_bethe(spec: &ChainSpec, counts: &[usize], opts: &SolverOptions) -> Result<SolveOutcome, BetheError> {
    let system = BetheSystem::new(spec, opts.policy)?;
    if counts.len() != system.level_count() {
        return Err(BetheError::Levels { got: counts.to_vec(), want: system.level_count() });
    }
    let mut out = SolveOutcome {
        counts: counts.to_vec(),
        rootsets: Vec::new(),
        residuals: Vec::new(),
        attempts: 0,
        converged: 0,
        not_converged: 0,
        rejected_singular: 0,
        rejected_continuum: 0,
        rejected_infinite: 0,
    };
    if counts.iter().all(|&c| c == 0) {
        out.rootsets.push(BetheRootSet::empty(counts.len()));
        out.residuals.push(0.0);
        return Ok(out);
    }
    let shape = BetheRootSet::new(counts.iter().map(|&c| vec![Complex64::new(0.0, 0.0); c]).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = Vec::new();
    for name in &opts.strategies {
        let strat = seed_strategy(name).ok_or_else(|| BetheError::Unsupported(format!("unknown seeding strategy {name}")))?;
        starts.extend(strat.seeds(&system, counts, opts.seeds_per_strategy, &mut rng));
    }
    out.attempts = starts.len();
    let threads = opts.threads.max(1);
    let chunk = starts.len().div_ceil(threads).max(1);
    let attempts: Vec<Attempt> = std::thread::scope(|s| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|part| {
                let (system, shape) = (&system, &shape);
                s.spawn(move || part.iter().map(|z0| newton(system, shape, z0, opts)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("solver thread panicked")).collect()
    });
    for a in attempts {
        let Attempt::Converged(z, r, j) = a else {
            out.not_converged += 1;
            continue;
        };
        out.converged += 1;
        let rs = shape.with_flat(&z);
        if z.iter().any(|x| x.norm() > opts.max_root_norm) {
            out.rejected_infinite += 1;
            continue;
        }
        if is_singular(&rs, opts.singular_tolerance) {
            out.rejected_singular += 1;
            continue;
        }
        if is_continuum(&j, opts.isolation_tolerance) {
            out.rejected_continuum += 1;
            continue;
        }
        let canon = rs.canonical();
        if !out.rootsets.iter().any(|o| o.equivalent(&canon, opts.dedup_tolerance)) {
            out.rootsets.push(canon);
            out.residuals.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::bethe_residuals;
    use crate::graded_tensor::GradingSignature;
    use crate::reflection::BoundarySpec;

    #[test]
    fn zero_counts_give_empty_solution() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 2, BoundarySpec::Identity);
        let out = solve_bethe(&spec, &[0], &SolverOptions::default()).unwrap();
        assert_eq!(out.rootsets, vec![BetheRootSet::empty(1)]);
    }

    #[test]
    fn sl2_two_sites_one_magnon() {
        let spec = ChainSpec::open_sp(GradingSignature::sl(2), 2, BoundarySpec::Identity);
        let out = solve_bethe(&spec, &[1], &SolverOptions::default()).unwrap();
        assert_eq!(out.rootsets.len(), 1, "{out:?}");
        let x = out.rootsets[0].roots[0][0];
        assert!((x - Complex64::new(0.5, 0.0)).norm() < 1e-9);
        for rs in &out.rootsets {
            let r = bethe_residuals(&spec, rs, SelfTermPolicy::default()).unwrap();
            assert!(max_abs(&r) < 1e-10);
            let flipped = BetheRootSet::new(rs.roots.iter().map(|lv| lv.iter().map(|z| -z).collect()).collect());
            assert!(max_abs(&bethe_residuals(&spec, &flipped, SelfTermPolicy::default()).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(seed_strategy("grid").unwrap().name(), "grid");
        assert_eq!(seed_strategy("homotopy").unwrap().name(), "homotopy");
        assert!(seed_strategy("nope").is_none());
    }
}
