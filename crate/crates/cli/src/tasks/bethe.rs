use num_complex::Complex64;
use openchain_core::bethe::{
    analyticity_check, dressed_eigenvalue, level_structure, match_spectrum, residue_check, solve_bethe, BetheRootSet,
    Case, MatchReport, SelfTermPolicy, SolveOutcome, SolverOptions,
};
use openchain_core::chain::ChainMode;
use serde_json::{json, Value};

use super::{Context, Task};
use crate::error::CliError;
use crate::report::{cx, fmt_f64, num, ReportBuilder, RootRow};

pub struct BetheSolve;

fn count_vectors(levels: usize, max: usize) -> Vec<Vec<usize>> {
    (0..levels).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|c| (0..=max).map(move |k| [c.clone(), vec![k]].concat())).collect()
    })
}

fn solver_options(ctx: &Context, policy: SelfTermPolicy) -> SolverOptions {
    let s = &ctx.config.solver;
    let mut o = SolverOptions {
        policy,
        strategies: s.strategies.clone(),
        seeds_per_strategy: s.seeds_per_strategy,
        seed: s.seed,
        max_iterations: s.max_iterations,
        ..SolverOptions::default()
    };
    if let Some(t) = s.threads {
        o.threads = t.max(1);
    }
    o
}

struct Solved {
    outcomes: Vec<SolveOutcome>,
    /// Flattened root sets with their residuals.
    rootsets: Vec<(BetheRootSet, f64)>,
}

fn solve_all(ctx: &Context, counts: &[Vec<usize>], policy: SelfTermPolicy) -> Result<Solved, CliError> {
    let opts = solver_options(ctx, policy);
    let mut outcomes = Vec::new();
    let mut rootsets = Vec::new();
    for c in counts {
        let o = solve_bethe(&ctx.spec, c, &opts)?;
        rootsets.extend(o.rootsets.iter().cloned().zip(o.residuals.iter().copied()));
        outcomes.push(o);
    }
    Ok(Solved { outcomes, rootsets })
}

/// Smallest max-relative deviation of one root set from any oracle curve.
fn best_curve(ctx: &Context, rep: &MatchReport, rs: &BetheRootSet) -> (Option<usize>, f64) {
    let Ok(vals) = rep.lambdas.iter().map(|&l| dressed_eigenvalue(&ctx.spec, rs, l)).collect::<Result<Vec<Complex64>, _>>()
    else {
        return (None, f64::INFINITY);
    };
    rep.oracle
        .iter()
        .map(|c| {
            let dev = vals.iter().zip(&c.values).map(|(a, b)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
            (Some(c.id), dev)
        })
        .fold((None, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

impl Task for BetheSolve {
    fn name(&self) -> &'static str {
        "bethe-solve"
    }

    fn summary(&self) -> &'static str {
        "solve the Bethe equations and match the root sets against the exact spectrum"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.mode() != ChainMode::Closed && openchain_core::bethe::BetheSystem::new(&ctx.spec, ctx.config.policy()).is_ok()
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        let case = Case::of(&ctx.spec)?;
        let levels = level_structure(case, ctx.sig())?;
        let counts = match &ctx.config.solver.counts {
            Some(c) => c.clone(),
            None => count_vectors(levels.len(), ctx.config.solver.max_count),
        };
        // The oracle is needed for every count vector, so the cap applies up front.
        ctx.transfer()?;
        let tol = &ctx.config.tolerances;
        let lams = ctx.lambdas_c64();
        let policy = ctx.config.policy();
        let solved = solve_all(ctx, &counts, policy)?;
        let sets: Vec<BetheRootSet> = solved.rootsets.iter().map(|(r, _)| r.clone()).collect();
        let rep = match_spectrum(&ctx.spec, &sets, &lams, tol.matching, ctx.config.verify.seed)?;

        let mut spurious = Vec::new();
        let mut residue_worst = 0.0f64;
        let mut analytic_worst = 0.0f64;
        let mut rows = Vec::new();
        for (k, (rs, resid)) in solved.rootsets.iter().enumerate() {
            let (curve, dev) = best_curve(ctx, &rep, rs);
            if dev >= tol.matching {
                spurious.push(k);
            }
            let residue = residue_check(&ctx.spec, rs)?;
            residue_worst = residue_worst.max(residue.max_ratio);
            let analytic = analyticity_check(case, ctx.sig(), rs)?;
            analytic_worst = analytic_worst.max(analytic.max_deviation);
            let mut table = Vec::new();
            for (lvl, roots) in rs.roots.iter().enumerate() {
                for (i, z) in roots.iter().enumerate() {
                    table.push(RootRow { level: lvl + 1, index: i, re: fmt_f64(z.re), im: fmt_f64(z.im) });
                }
            }
            out.root_tables.push(table);
            rows.push(json!({
                "index": k,
                "counts": rs.counts,
                "roots": rs.roots.iter().map(|lv| lv.iter().map(|z| cx(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "residual": num(*resid),
                "curve_id": curve,
                "deviation": num(dev),
                "residue_ratio": num(residue.max_ratio),
                "analyticity_deviation": num(analytic.max_deviation),
            }));
        }
        out.flag(
            "bethe_rootsets_match_oracle",
            spurious.is_empty() && !sets.is_empty(),
            json!({ "rootsets": sets.len(), "unmatched_rootsets": spurious, "tolerance": fmt_f64(tol.matching) }),
        );
        out.bound("bethe_residue_cancellation", residue_worst, tol.residue, json!({ "rootsets": sets.len() }));
        out.bound("bethe_analyticity", analytic_worst, tol.analyticity, json!({ "rootsets": sets.len() }));
        if ctx.config.solver.require_complete {
            out.flag(
                "bethe_coverage_complete",
                rep.complete(),
                json!({ "matched_curves": rep.matched_curves, "curves": rep.curves.len(), "matched_dimension": rep.matched_dimension, "dimension": rep.dimension }),
            );
        }

        if ctx.config.solver.calibrate_policy {
            let mut evidence = serde_json::Map::new();
            for p in SelfTermPolicy::all() {
                let matched = if p == policy {
                    rep.matched_curves
                } else {
                    let alt = solve_all(ctx, &counts, p)?;
                    let alt_sets: Vec<BetheRootSet> = alt.rootsets.into_iter().map(|(r, _)| r).collect();
                    match_spectrum(&ctx.spec, &alt_sets, &lams, tol.matching, ctx.config.verify.seed)?.matched_curves
                };
                evidence.insert(p.name().into(), json!({ "matched_curves": matched, "curves": rep.curves.len() }));
            }
            out.calibrate("self_term_policy", policy.name(), Value::Object(evidence));
        }

        out.section(
            "bethe-solve",
            json!({
                "case": case.name(),
                "policy": policy.name(),
                "levels": levels.iter().map(|d| json!({ "level": d.level, "kind": format!("{:?}", d.kind), "driven": d.driven })).collect::<Vec<_>>(),
                "sectors": solved.outcomes.iter().map(|o| json!({
                    "counts": o.counts,
                    "solutions": o.rootsets.len(),
                    "attempts": o.attempts,
                    "converged": o.converged,
                    "not_converged": o.not_converged,
                    "rejected_singular": o.rejected_singular,
                    "rejected_continuum": o.rejected_continuum,
                    "rejected_infinite": o.rejected_infinite,
                })).collect::<Vec<_>>(),
                "rootsets": rows,
                "matches": rep.curves.iter().map(|c| json!({
                    "curve_id": c.curve_id,
                    "multiplicity": c.multiplicity,
                    "rootset": c.rootset,
                    "counts": c.counts,
                    "deviation": num(c.deviation),
                    "matched": c.matched,
                })).collect::<Vec<_>>(),
                "matched_curves": rep.matched_curves,
                "curves": rep.curves.len(),
                "matched_dimension": rep.matched_dimension,
                "dimension": rep.dimension,
            }),
        );
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_vectors_enumerate_the_box() {
        assert_eq!(count_vectors(1, 2), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(count_vectors(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
