use openchain_core::graded_tensor::GradingSignature;
use openchain_core::yang_baxter::{crossing_unitarity_check, rbar_slot_discrepancy, unitarity_residual, ybe_residual, ybe_sampled};
use serde_json::json;

use super::{Context, Task};
use crate::error::CliError;
use crate::report::{exact, num, ReportBuilder};

pub struct VerifyYbe;

impl Task for VerifyYbe {
    fn name(&self) -> &'static str {
        "verify-ybe"
    }

    fn summary(&self) -> &'static str {
        "Yang-Baxter, unitarity and crossing identities of the R-matrix"
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        let sig = ctx.sig();
        if ctx.exact {
            let r = ybe_residual(sig);
            out.flag("ybe_exact", r.is_zero(), json!({ "nonzero_entries": r.nnz() }));
        } else {
            let l = ctx.lambdas_c64();
            let pairs: Vec<_> = l.iter().zip(l.iter().cycle().skip(1)).map(|(a, b)| (*a, *b)).collect();
            out.bound("ybe_sampled", ybe_sampled(sig, &pairs), ctx.config.tolerances.ybe_numeric, json!({ "pairs": pairs.len() }));
        }
        let u = unitarity_residual(sig);
        out.flag("unitarity_exact", u.is_zero(), json!({ "nonzero_entries": u.nnz() }));

        // R̄ slot consistency for every legal θ₀. The crossing matrix needs a
        // palindromic grading, so other gradings only get the count reported.
        let mut legal = Vec::new();
        let mut rbar_info = Vec::new();
        for theta0 in [1i8, -1] {
            let Ok(s) = GradingSignature::new(sig.m(), sig.n(), sig.basis(), theta0) else { continue };
            let d = rbar_slot_discrepancy(&s);
            legal.push(theta0);
            let name = format!("rbar_consistency_theta0_{}", if theta0 > 0 { "plus" } else { "minus" });
            if sig.is_palindromic() {
                out.flag(name, d.is_zero(), json!({ "nonzero_entries": d.nnz() }));
            } else {
                rbar_info.push(json!({ "check": name, "nonzero_entries": d.nnz(), "asserted": false }));
            }
        }
        let cu = crossing_unitarity_check(sig);
        out.flag(
            "crossing_unitarity",
            cu.holds,
            json!({
                "c": cu.c.as_ref().map(exact),
                "rho_tilde": cu.rho_tilde.as_ref().map(exact),
                "scalar": cu.scalar.as_ref().map(|p| p.to_string()),
                "residual": num(cu.residual_norm),
            }),
        );
        out.section(
            "verify-ybe",
            json!({
                "dimension": sig.dim(),
                "grading": sig.gradings(),
                "rho": exact(&sig.rho_scalar()),
                "legal_theta0": legal,
                "rbar_unasserted": rbar_info,
            }),
        );
        Ok(())
    }
}
