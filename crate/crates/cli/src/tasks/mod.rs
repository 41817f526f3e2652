//! Pipelines selectable by name from the command line.

mod bethe;
mod chain;
mod full;
mod reflection;
mod ybe;

use num_complex::Complex64;
use openchain_core::chain::{ChainMode, ChainSpec, Transfer};
use openchain_core::graded_tensor::{ExactScalar, GradingSignature};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::ReportBuilder;

pub use bethe::BetheSolve;
pub use chain::{Commutation, Spectrum, VacuumCheck};
pub use full::FullReport;
pub use reflection::{ClassifyK, VerifyRe};
pub use ybe::VerifyYbe;

/// Inputs shared by every task of a run.
pub struct Context {
    pub config: RunConfig,
    pub spec: ChainSpec,
    pub exact: bool,
    pub lambdas: Vec<ExactScalar>,
}

impl Context {
    pub fn new(config: RunConfig, exact: bool) -> Result<Self, CliError> {
        let spec = config.chain_spec()?;
        let lambdas = config.lambda_samples.exact()?;
        Ok(Context { config, spec, exact, lambdas })
    }

    pub fn sig(&self) -> &GradingSignature {
        &self.spec.sig
    }

    pub fn mode(&self) -> ChainMode {
        self.spec.mode
    }

    pub fn lambdas_c64(&self) -> Vec<Complex64> {
        self.lambdas.iter().map(ExactScalar::to_complex).collect()
    }

    /// Builds the transfer matrix, enforcing the dimension cap.
    pub fn transfer(&self) -> Result<Transfer, CliError> {
        Ok(Transfer::new(&self.spec)?)
    }
}

pub trait Task: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Whether the task makes sense for this chain; full-report skips the rest.
    fn applies(&self, _ctx: &Context) -> bool {
        true
    }
    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError>;
}

pub fn registry() -> Vec<Box<dyn Task>> {
    vec![
        Box::new(VerifyYbe),
        Box::new(VerifyRe),
        Box::new(ClassifyK),
        Box::new(Commutation),
        Box::new(VacuumCheck),
        Box::new(Spectrum),
        Box::new(BetheSolve),
        Box::new(FullReport),
    ]
}

pub fn lookup(name: &str) -> Option<Box<dyn Task>> {
    registry().into_iter().find(|t| t.name() == name)
}

pub fn task_names() -> Vec<&'static str> {
    registry().iter().map(|t| t.name()).collect()
}

fn require_open(ctx: &Context, task: &str) -> Result<(), CliError> {
    if ctx.mode() == ChainMode::Closed {
        return Err(CliError::Unsupported(format!("{task} needs an open chain")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_complete() {
        let names = task_names();
        let want = [
            "verify-ybe",
            "verify-re",
            "classify-k",
            "commutation",
            "vacuum-check",
            "spectrum",
            "bethe-solve",
            "full-report",
        ];
        assert_eq!(names, want);
        assert!(lookup("spectrum").is_some());
        assert!(lookup("nope").is_none());
    }
}
