//! Command-line orchestration over `openchain-core`: JSON run configs,
//! name-selected task pipelines, JSON reports and CSV exports.

pub mod config;
pub mod error;
pub mod report;
pub mod tasks;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;

use config::RunConfig;
use error::CliError;
use report::{Report, ReportBuilder, Timestamp, ToolInfo, REPORT_SCHEMA_VERSION};
use tasks::Context;

#[derive(Debug, Parser)]
#[command(name = "openchain", version, about = "Graded open spin chains: verification, spectra and Bethe roots")]
pub struct Args {
    /// Task to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(tasks::task_names()))]
    pub task: String,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config field, e.g. --set chain.sites=3 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Use exact rational arithmetic where the task supports it.
    #[arg(long)]
    pub exact: bool,
    /// Report path; defaults to output.path from the config, then stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A finished run: the report plus the CSV tables it produced.
pub struct RunOutput {
    pub report: Report,
    pub builder: ReportBuilder,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

/// Runs `task` on an already parsed config.
pub fn execute(task: &str, mut config: RunConfig, exact: bool) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let generated_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let runner = tasks::lookup(task).ok_or_else(|| CliError::Config(format!("unknown task {task:?}")))?;
    config.task = Some(task.to_string());
    let ctx = Context::new(config, exact)?;
    let mut builder = ReportBuilder::default();
    runner.run(&ctx, &mut builder)?;
    let report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        tool: ToolInfo { name: "openchain", version: env!("CARGO_PKG_VERSION") },
        task: task.to_string(),
        exact,
        config: ctx.config,
        passed: builder.passed(),
        checks: builder.checks.clone(),
        calibration: builder.calibration.clone(),
        sections: std::mem::take(&mut builder.sections),
        timestamp: Timestamp { generated_at, elapsed_ms: start.elapsed().as_millis() },
    };
    Ok(RunOutput { report, builder })
}

/// Writes `spectrum.csv` and one `roots_NNN.csv` per Bethe root set.
pub fn write_csv(dir: &Path, builder: &ReportBuilder) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    if !builder.spectrum_rows.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("spectrum.csv"))?;
        for row in &builder.spectrum_rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    for (k, table) in builder.root_tables.iter().enumerate() {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_path(dir.join(format!("roots_{k:03}.csv")))?;
        w.write_record(["level", "index", "re", "im"])?;
        for row in table {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(())
}

/// Full command-line flow; returns the process exit code.
pub fn run_cli(args: Args) -> i32 {
    match run_inner(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_inner(args: &Args) -> Result<i32, CliError> {
    let config = RunConfig::load(&args.config, &args.overrides)?;
    let out_path = args.out.clone().or_else(|| config.output.path.as_ref().map(PathBuf::from));
    let csv_dir = config.output.csv_dir.clone();
    let run = execute(&args.task, config, args.exact)?;
    let json = run.report.to_json();
    match out_path {
        Some(p) => std::fs::write(p, json)?,
        None => print!("{json}"),
    }
    if let Some(dir) = csv_dir {
        write_csv(Path::new(&dir), &run.builder)?;
    }
    for c in run.report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} (value {:?}, tolerance {:?})", c.name, c.value, c.tolerance);
    }
    Ok(run.exit_code())
}

/// The report with its `timestamp` object removed, for byte comparisons.
pub fn strip_timestamp(report_json: &str) -> Result<String, serde_json::Error> {
    let mut v: serde_json::Value = serde_json::from_str(report_json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timestamp");
    }
    serde_json::to_string_pretty(&v)
}
