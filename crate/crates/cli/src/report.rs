//! Report assembly and number formatting.
//!
//! Everything except the `timestamp` object is a pure function of the config,
//! so reports from identical runs compare equal byte for byte once that
//! object is removed.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use openchain_core::graded_tensor::ExactScalar;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const REPORT_SCHEMA_VERSION: &str = "1";

/// Shortest round-trip decimal, scientific outside [1e-4, 1e15); `-0` is
/// folded into `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexOut {
    pub re: String,
    pub im: String,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        ComplexOut { re: fmt_f64(z.re), im: fmt_f64(z.im) }
    }
}

impl From<&ExactScalar> for ComplexOut {
    fn from(z: &ExactScalar) -> Self {
        ComplexOut { re: fmt_rational(&z.re), im: fmt_rational(&z.im) }
    }
}

pub fn cx(z: Complex64) -> Value {
    serde_json::to_value(ComplexOut::from(z)).expect("plain struct")
}

pub fn exact(z: &ExactScalar) -> Value {
    serde_json::to_value(ComplexOut::from(z)).expect("plain struct")
}

pub fn num(x: f64) -> Value {
    Value::String(fmt_f64(x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured quantity compared against `tolerance` (decimal string).
    pub value: Option<String>,
    pub tolerance: Option<String>,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub decision: String,
    pub choice: String,
    pub evidence: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timestamp {
    pub generated_at: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool: ToolInfo,
    pub task: String,
    pub exact: bool,
    pub config: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub calibration: Vec<Calibration>,
    pub sections: BTreeMap<String, Value>,
    pub timestamp: Timestamp,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// One row of the spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    #[serde(rename = "λ_re")]
    pub lambda_re: String,
    #[serde(rename = "λ_im")]
    pub lambda_im: String,
    pub eigenvalue_re: String,
    pub eigenvalue_im: String,
    pub curve_id: usize,
}

/// One row of a root-set CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootRow {
    pub level: usize,
    pub index: usize,
    pub re: String,
    pub im: String,
}

/// Mutable state shared by the tasks of one run.
#[derive(Debug, Default)]
pub struct ReportBuilder {
    pub checks: Vec<Check>,
    pub calibration: Vec<Calibration>,
    pub sections: BTreeMap<String, Value>,
    pub spectrum_rows: Vec<SpectrumRow>,
    /// One table per Bethe root set, in report order.
    pub root_tables: Vec<Vec<RootRow>>,
}

impl ReportBuilder {
    /// Records a check; `value` passes when it is below `tolerance`.
    pub fn bound(&mut self, name: impl Into<String>, value: f64, tolerance: f64, detail: Value) {
        self.checks.push(Check {
            name: name.into(),
            passed: value < tolerance,
            value: Some(fmt_f64(value)),
            tolerance: Some(fmt_f64(tolerance)),
            detail,
        });
    }

    pub fn flag(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), passed, value: None, tolerance: None, detail });
    }

    pub fn calibrate(&mut self, decision: impl Into<String>, choice: impl Into<String>, evidence: Value) {
        let decision = decision.into();
        if self.calibration.iter().all(|c| c.decision != decision) {
            self.calibration.push(Calibration { decision, choice: choice.into(), evidence });
        }
    }

    pub fn section(&mut self, name: &str, value: Value) {
        self.sections.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_round_trip_and_sign_stable() {
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(1e-300), "1e-300");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn exact_scalars_are_p_over_q() {
        let z = &ExactScalar::ratio(3, 2) + &ExactScalar::gaussian(0, -2);
        assert_eq!(ComplexOut::from(&z), ComplexOut { re: "3/2".into(), im: "-2/1".into() });
    }

    #[test]
    fn checks_compare_strictly() {
        let mut b = ReportBuilder::default();
        b.bound("a", 1e-13, 1e-12, Value::Null);
        assert!(b.passed());
        b.bound("b", 1e-12, 1e-12, Value::Null);
        assert!(!b.passed());
    }
}
