use serde_json::json;

use super::{registry, Context, Task};
use crate::error::CliError;
use crate::report::ReportBuilder;

/// Every other registered task that applies to the configured chain.
pub struct FullReport;

impl Task for FullReport {
    fn name(&self) -> &'static str {
        "full-report"
    }

    fn summary(&self) -> &'static str {
        "run every applicable task into one report"
    }

    fn run(&self, ctx: &Context, out: &mut ReportBuilder) -> Result<(), CliError> {
        let mut ran = Vec::new();
        let mut skipped = Vec::new();
        for task in registry().into_iter().filter(|t| t.name() != self.name()) {
            if task.applies(ctx) {
                task.run(ctx, out)?;
                ran.push(task.name());
            } else {
                skipped.push(task.name());
            }
        }
        out.section("full-report", json!({ "ran": ran, "skipped": skipped }));
        Ok(())
    }
}
