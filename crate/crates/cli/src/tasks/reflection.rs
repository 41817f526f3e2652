use openchain_core::chain::ChainMode;
use openchain_core::graded_tensor::{ExactScalar, GradingSignature};
use openchain_core::reflection::{
    broken_two_parameter_k, brute_force_sp_solutions, build_snp_k, build_sp_k, classify_family, random_snp_matrix,
    random_sp_boundary, snp_re_residual, sp_re_residual, BoundarySpec, BruteForceOptions, SpClass, SpClassification,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{require_open, Context, Task};
use crate::error::CliError;
use crate::report::{cx, exact, ReportBuilder};

pub struct VerifyRe;

fn sp_residual_nnz(spec: &BoundarySpec, sig: &GradingSignature) -> Result<usize, CliError> {
    let k = build_sp_k(spec, sig).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(sp_re_residual(&k, sig).nnz())
}

fn snp_residual_nnz(spec: &BoundarySpec, sig: &GradingSignature) -> Result<usize, CliError> {
    let k = build_snp_k(spec, sig).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(snp_re_residual(&k, sig).nnz())
}

impl Task for VerifyRe {
    fn name(&self) -> &'static str {
        "verify-re"
    }

    fn summary(&self) -> &'static str {
        "exact reflection-equation residuals of the configured and random boundaries"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.mode() != ChainMode::Closed
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        require_open(ctx, self.name())?;
        let sig = ctx.sig();
        let v = &ctx.config.verify;
        let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
        let sp = ctx.mode() == ChainMode::OpenSp;
        let residual = |b: &BoundarySpec| if sp { sp_residual_nnz(b, sig) } else { snp_residual_nnz(b, sig) };
        for (side, b) in [("minus", &ctx.spec.boundary_minus), ("plus", &ctx.spec.boundary_plus)] {
            let nnz = residual(b)?;
            out.flag(format!("re_exact_{side}"), nnz == 0, json!({ "nonzero_entries": nnz }));
        }

        let mut failures = Vec::new();
        for trial in 0..v.random_boundaries {
            let nnz = if sp {
                residual(&random_sp_boundary(sig, &mut rng))?
            } else {
                let eps = if trial % 2 == 0 { 1 } else { -1 };
                snp_re_residual(&random_snp_matrix(sig, eps, &mut rng), sig).nnz()
            };
            if nnz != 0 {
                failures.push(trial);
            }
        }
        out.flag(
            "re_exact_random",
            failures.is_empty(),
            json!({ "trials": v.random_boundaries, "seed": v.seed, "failed_trials": failures }),
        );

        // A matrix that is not a solution must be detected as such.
        let control = if sp {
            (sig.dim() == 3 && !sig.is_graded()).then(|| {
                let k = broken_two_parameter_k(&ExactScalar::ratio(1, 2), &ExactScalar::ratio(3, 2));
                ("broken_two_parameter", sp_re_residual(&k, sig).nnz())
            })
        } else {
            let k = random_snp_matrix(sig, 1, &mut rng).add(&random_snp_matrix(sig, -1, &mut rng));
            Some(("mixed_symmetry", snp_re_residual(&k, sig).nnz()))
        };
        if let Some((name, nnz)) = control {
            out.flag("re_negative_control", nnz > 0, json!({ "control": name, "nonzero_entries": nnz }));
        }
        out.section("verify-re", json!({ "backend": "exact", "boundary_type": if sp { "sp" } else { "snp" } }));
        Ok(())
    }
}

pub struct ClassifyK;

fn classification_json(c: &SpClassification) -> Value {
    json!({
        "class": c.class.label(),
        "xi": c.xi.as_ref().map(exact),
        "xi_float": c.xi_float.map(cx),
        "rank_sequence": c.rank_sequence,
    })
}

fn is_classified(c: &SpClass) -> bool {
    matches!(c, SpClass::Diagonalizable { .. } | SpClass::Nilpotent)
}

impl Task for ClassifyK {
    fn name(&self) -> &'static str {
        "classify-k"
    }

    fn summary(&self) -> &'static str {
        "classify the SP boundary matrices; optionally run the brute-force oracle"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.mode() == ChainMode::OpenSp
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        if !self.applies(ctx) {
            return Err(CliError::Unsupported("classify-k needs an open_sp chain".into()));
        }
        let sig = ctx.sig();
        let mut section = serde_json::Map::new();
        for (side, b) in [("minus", &ctx.spec.boundary_minus), ("plus", &ctx.spec.boundary_plus)] {
            let k = build_sp_k(b, sig).map_err(|e| CliError::Config(e.to_string()))?;
            match classify_family(sig, &k) {
                Ok(c) => {
                    out.flag(format!("classified_{side}"), is_classified(&c.class), json!({ "class": c.class.label() }));
                    section.insert(side.into(), classification_json(&c));
                }
                Err(e) => {
                    out.flag(format!("classified_{side}"), false, json!({ "error": e.to_string() }));
                }
            }
        }
        let v = &ctx.config.verify;
        if v.brute_force {
            let opts = BruteForceOptions { values: v.brute_force_values.clone(), even_only: None };
            let r = brute_force_sp_solutions(sig, &opts);
            let outside = r.families.iter().filter(|f| !is_classified(&f.classification.class)).count();
            out.flag(
                "brute_force_all_classified",
                r.all_classified(),
                json!({ "families": r.families.len(), "outside_classification": outside, "unresolved": r.unresolved }),
            );
            section.insert(
                "brute_force".into(),
                json!({
                    "grid": v.brute_force_values,
                    "b_candidates": r.b_candidates,
                    "families": r.families.len(),
                    "singular_dropped": r.singular_dropped,
                    "unresolved": r.unresolved,
                    "class_counts": r.class_counts,
                }),
            );
        }
        out.section("classify-k", Value::Object(section));
        Ok(())
    }
}
