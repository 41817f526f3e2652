use num_complex::Complex64;
use openchain_core::bethe::lambda0;
use openchain_core::chain::{ChainMode, Transfer};
use openchain_core::graded_tensor::ExactScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{require_open, Context, Task};
use crate::error::CliError;
use crate::report::{cx, exact, fmt_f64, num, ReportBuilder, SpectrumRow};

pub struct Commutation;

impl Task for Commutation {
    fn name(&self) -> &'static str {
        "commutation"
    }

    fn summary(&self) -> &'static str {
        "max |[t(λ₁), t(λ₂)]| over random spectral-parameter pairs"
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        let tr = ctx.transfer()?;
        let v = &ctx.config.verify;
        let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
        let mut point = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.5..1.5));
        let pairs: Vec<(Complex64, Complex64)> = (0..v.commutation_pairs).map(|_| (point(), point())).collect();
        let norms: Vec<f64> = pairs.iter().map(|&(a, b)| tr.commutator_norm(a, b)).collect();
        let worst = norms.iter().copied().fold(0.0, f64::max);
        out.bound(
            "commutation",
            worst,
            ctx.config.tolerances.commutation,
            json!({ "pairs": pairs.len(), "seed": v.seed, "dimension": tr.dim() }),
        );
        if ctx.exact {
            let c = tr.commutator_symbolic();
            out.flag("commutation_exact", c.is_zero(), json!({ "nonzero_entries": c.nnz() }));
        }
        out.section(
            "commutation",
            json!({
                "samples": pairs.iter().zip(&norms).map(|((a, b), n)| json!({ "lambda1": cx(*a), "lambda2": cx(*b), "norm": num(*n) })).collect::<Vec<_>>(),
            }),
        );
        Ok(())
    }
}

pub struct VacuumCheck;

/// Whether t(λ)|ω₊⟩ equals Λ⁰(λ)|ω₊⟩ exactly at a rational λ.
fn vacuum_exact_match(ctx: &Context, tr: &Transfer, lam: &ExactScalar) -> Result<(ExactScalar, bool), CliError> {
    let col = tr.vacuum_column_exact(lam);
    let want = lambda0::<ExactScalar>(&ctx.spec, lam)?;
    let ok = col[0] == want && col.iter().skip(1).all(ExactScalar::is_zero);
    Ok((want, ok))
}

impl Task for VacuumCheck {
    fn name(&self) -> &'static str {
        "vacuum-check"
    }

    fn summary(&self) -> &'static str {
        "t(λ)|ω₊⟩ = Λ⁰(λ)|ω₊⟩ against the closed-form vacuum eigenvalue"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.mode() != ChainMode::Closed && lambda0::<Complex64>(&ctx.spec, &Complex64::new(0.3, 0.7)).is_ok()
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        require_open(ctx, self.name())?;
        let tr = ctx.transfer()?;
        let mut rows = Vec::new();
        let mut worst = 0.0f64;
        let tol = ctx.config.tolerances.vacuum;
        let mut exact_ok = true;
        let mut settled_exactly = 0usize;
        for lam in &ctx.lambdas {
            let l = lam.to_complex();
            let va = tr.vacuum_action(l);
            let want: Complex64 = lambda0(&ctx.spec, &l)?;
            let mut dev = ((va.eigenvalue - want).norm_sqr() + va.defect * va.defect).sqrt() / va.image_norm;
            // When t|ω₊⟩ vanishes the relative measure is 0/0; an exact
            // comparison at the same rational λ settles it.
            let mut settled = false;
            if !(dev < tol) && vacuum_exact_match(ctx, &tr, lam)?.1 {
                dev = 0.0;
                settled = true;
                settled_exactly += 1;
            }
            worst = worst.max(dev);
            let mut row = json!({
                "lambda": exact(lam),
                "transfer": cx(va.eigenvalue),
                "formula": cx(want),
                "relative_deviation": num(dev),
                "settled_exactly": settled,
            });
            if ctx.exact {
                let (want, ok) = vacuum_exact_match(ctx, &tr, lam)?;
                exact_ok &= ok;
                row["formula_exact"] = exact(&want);
                row["exact_match"] = json!(ok);
            }
            rows.push(row);
        }
        out.bound("vacuum_identity", worst, tol, json!({ "samples": ctx.lambdas.len(), "settled_exactly": settled_exactly }));
        if ctx.exact {
            out.flag("vacuum_identity_exact", exact_ok, json!({ "samples": ctx.lambdas.len() }));
        }
        out.calibrate(
            "k_plus",
            "identity",
            json!({
                "note": "the closed-form vacuum eigenvalue assumes K⁺ = 𝕀; any other K⁺ is rejected before evaluation",
                "max_relative_deviation": fmt_f64(worst),
            }),
        );
        out.section("vacuum-check", json!({ "dimension": tr.dim(), "samples": rows }));
        Ok(())
    }
}

pub struct Spectrum;

impl Task for Spectrum {
    fn name(&self) -> &'static str {
        "spectrum"
    }

    fn summary(&self) -> &'static str {
        "joint eigenvalue curves of the transfer matrix by exact diagonalisation"
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        let tr = ctx.transfer()?;
        let lams = ctx.lambdas_c64();
        let curves = tr.eigen_curves(&lams, ctx.config.verify.seed)?;
        let spread = curves.iter().map(|c| c.spread).fold(0.0, f64::max);
        let dim: usize = curves.iter().map(|c| c.multiplicity).sum();
        out.bound("spectrum_resolved", spread, ctx.config.tolerances.spread, json!({ "curves": curves.len(), "dimension": dim }));
        for c in &curves {
            for (l, v) in lams.iter().zip(&c.values) {
                out.spectrum_rows.push(SpectrumRow {
                    lambda_re: fmt_f64(l.re),
                    lambda_im: fmt_f64(l.im),
                    eigenvalue_re: fmt_f64(v.re),
                    eigenvalue_im: fmt_f64(v.im),
                    curve_id: c.id,
                });
            }
        }
        out.section(
            "spectrum",
            json!({
                "dimension": dim,
                "lambdas": ctx.lambdas.iter().map(exact).collect::<Vec<_>>(),
                "curves": curves.iter().map(|c| json!({
                    "id": c.id,
                    "multiplicity": c.multiplicity,
                    "spread": num(c.spread),
                    "values": c.values.iter().map(|v| cx(*v)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
        );
        Ok(())
    }
}
