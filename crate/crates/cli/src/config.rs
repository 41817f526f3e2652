//! Run configuration: JSON on disk, dotted `--set` overrides, and conversion
//! into core types.

use std::path::Path;

use num_complex::Complex64;
use openchain_core::bethe::SelfTermPolicy;
use openchain_core::chain::{ChainMode, ChainSpec, DEFAULT_DIM_CAP};
use openchain_core::graded_tensor::{parse_rational, BasisOrder, DenseExact, ExactScalar, GradingSignature};
use openchain_core::reflection::{BoundarySpec, SnpBoundary, SnpForm, SpBoundary, SpShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const CONFIG_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema_version: String,
    /// Overridden by the task named on the command line.
    #[serde(default)]
    pub task: Option<String>,
    pub chain: ChainConfig,
    #[serde(default)]
    pub boundary: BoundaryPair,
    #[serde(default)]
    pub lambda_samples: LambdaSamples,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_schema() -> String {
    CONFIG_SCHEMA_VERSION.into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Closed,
    OpenSp,
    OpenSnp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisName {
    Distinguished,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub m: usize,
    #[serde(default)]
    pub n: usize,
    pub sites: usize,
    pub mode: ModeName,
    #[serde(default)]
    pub basis: Option<BasisName>,
    #[serde(default = "one")]
    pub theta0: i8,
    #[serde(default = "default_cap")]
    pub dim_cap: usize,
}

fn one() -> i8 {
    1
}

fn default_cap() -> usize {
    DEFAULT_DIM_CAP
}

/// Exact scalars are written as "p/q" / decimal strings, integers, or
/// `{ "re": .., "im": .. }` objects of those.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarInput {
    Text(String),
    Int(i64),
    Complex { re: Box<ScalarInput>, im: Box<ScalarInput> },
}

impl ScalarInput {
    pub fn to_exact(&self) -> Result<ExactScalar, CliError> {
        match self {
            ScalarInput::Int(v) => Ok(ExactScalar::int(*v)),
            ScalarInput::Text(s) => parse_rational(s)
                .map(ExactScalar::real)
                .ok_or_else(|| CliError::Config(format!("not a rational number: {s:?}"))),
            ScalarInput::Complex { re, im } => {
                let re = re.to_exact()?;
                let im = im.to_exact()?;
                if !re.is_real() || !im.is_real() {
                    return Err(CliError::Config("nested complex scalar".into()));
                }
                Ok(ExactScalar::new(re.re, im.re))
            }
        }
    }
}

fn matrix(rows: &[Vec<ScalarInput>]) -> Result<DenseExact, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config("boundary matrix must be square".into()));
    }
    let rows = rows.iter().map(|r| r.iter().map(ScalarInput::to_exact).collect()).collect::<Result<_, _>>()?;
    Ok(DenseExact::from_rows(rows))
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryConfig {
    #[default]
    Identity,
    SpBlocks {
        blocks: [usize; 4],
        xi: ScalarInput,
        #[serde(default)]
        conjugator: Option<Vec<Vec<ScalarInput>>>,
    },
    SpNilpotent {
        xi: ScalarInput,
        e: Vec<Vec<ScalarInput>>,
        #[serde(default)]
        conjugator: Option<Vec<Vec<ScalarInput>>>,
    },
    SnpDiagonal {
        k: Vec<ScalarInput>,
    },
    SnpFull {
        epsilon: i8,
        k: Vec<Vec<ScalarInput>>,
    },
}

impl BoundaryConfig {
    pub fn to_spec(&self) -> Result<BoundarySpec, CliError> {
        let conj = |c: &Option<Vec<Vec<ScalarInput>>>| c.as_deref().map(matrix).transpose();
        Ok(match self {
            BoundaryConfig::Identity => BoundarySpec::Identity,
            BoundaryConfig::SpBlocks { blocks, xi, conjugator } => BoundarySpec::Sp(SpBoundary {
                xi: xi.to_exact()?,
                shape: SpShape::Blocks(*blocks),
                conjugator: conj(conjugator)?,
            }),
            BoundaryConfig::SpNilpotent { xi, e, conjugator } => BoundarySpec::Sp(SpBoundary {
                xi: xi.to_exact()?,
                shape: SpShape::Nilpotent(matrix(e)?),
                conjugator: conj(conjugator)?,
            }),
            BoundaryConfig::SnpDiagonal { k } => BoundarySpec::Snp(SnpBoundary {
                epsilon: 1,
                form: SnpForm::Diagonal(k.iter().map(ScalarInput::to_exact).collect::<Result<_, _>>()?),
            }),
            BoundaryConfig::SnpFull { epsilon, k } => {
                if *epsilon != 1 && *epsilon != -1 {
                    return Err(CliError::Config(format!("epsilon must be ±1, got {epsilon}")));
                }
                BoundarySpec::Snp(SnpBoundary { epsilon: *epsilon, form: SnpForm::Full(matrix(k)?) })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryPair {
    #[serde(default)]
    pub minus: BoundaryConfig,
    #[serde(default)]
    pub plus: BoundaryConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSamples {
    Values { values: Vec<ScalarInput> },
    Random { count: usize, seed: u64 },
}

impl Default for LambdaSamples {
    fn default() -> Self {
        LambdaSamples::Random { count: 8, seed: 1 }
    }
}

impl LambdaSamples {
    /// Exact sample points. Random samples are Gaussian rationals with
    /// denominators up to 8, kept away from the real axis so that no sample
    /// lands on a pole of the vacuum formula.
    pub fn exact(&self) -> Result<Vec<ExactScalar>, CliError> {
        match self {
            LambdaSamples::Values { values } => values.iter().map(ScalarInput::to_exact).collect(),
            LambdaSamples::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..*count)
                    .map(|_| {
                        let q = rng.gen_range(1..=8);
                        let re = ExactScalar::ratio(rng.gen_range(-16..=16), q);
                        let mut im = rng.gen_range(1..=12);
                        if rng.gen_bool(0.5) {
                            im = -im;
                        }
                        &re + &(&ExactScalar::i() * &ExactScalar::ratio(im, 13))
                    })
                    .collect())
            }
        }
    }

    pub fn complex(&self) -> Result<Vec<Complex64>, CliError> {
        Ok(self.exact()?.iter().map(ExactScalar::to_complex).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub commutation: f64,
    pub vacuum: f64,
    pub ybe_numeric: f64,
    pub matching: f64,
    pub analyticity: f64,
    pub residue: f64,
    /// Allowed spread of eigenvalues grouped into one spectral curve.
    pub spread: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { commutation: 1e-10, vacuum: 1e-12, ybe_numeric: 1e-10, matching: 1e-8, analyticity: 1e-12, residue: 1e-8, spread: 1e-6 }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), CliError> {
        let all = [
            ("commutation", self.commutation),
            ("vacuum", self.vacuum),
            ("ybe_numeric", self.ybe_numeric),
            ("matching", self.matching),
            ("analyticity", self.analyticity),
            ("residue", self.residue),
            ("spread", self.spread),
        ];
        match all.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            Some((name, v)) => Err(CliError::Config(format!("tolerance {name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Explicit level counts; when absent every count vector with entries up
    /// to `max_count` is solved.
    pub counts: Option<Vec<Vec<usize>>>,
    pub max_count: usize,
    pub policy: String,
    pub strategies: Vec<String>,
    pub seeds_per_strategy: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub threads: Option<usize>,
    /// Fail unless every oracle curve is matched.
    pub require_complete: bool,
    /// Re-solve under every self-term policy and report the match counts.
    pub calibrate_policy: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            counts: None,
            max_count: 2,
            policy: SelfTermPolicy::default().name().into(),
            strategies: vec!["grid".into(), "homotopy".into()],
            seeds_per_strategy: 64,
            seed: 1,
            max_iterations: 200,
            threads: None,
            require_complete: false,
            calibrate_policy: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Random classified boundaries checked by verify-re.
    pub random_boundaries: usize,
    pub seed: u64,
    /// Run the brute-force reverse classification (sl(2), sl(3) scale).
    pub brute_force: bool,
    pub brute_force_values: Vec<i64>,
    /// λ-pairs for the commutation check.
    pub commutation_pairs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { random_boundaries: 20, seed: 1, brute_force: false, brute_force_values: vec![-1, 0, 1], commutation_pairs: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    /// Directory for CSV exports (spectrum.csv and one roots_NNN.csv per root set).
    pub csv_dir: Option<String>,
}

impl RunConfig {
    pub fn from_value(v: Value) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut v: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut v, o)?;
        }
        Self::from_value(v)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Config(format!("unsupported config schema_version {:?}", self.schema_version)));
        }
        self.tolerances.validate()?;
        if SelfTermPolicy::from_name(&self.solver.policy).is_none() {
            return Err(CliError::Config(format!("unknown self-term policy {:?}", self.solver.policy)));
        }
        self.signature()?;
        Ok(())
    }

    pub fn signature(&self) -> Result<GradingSignature, CliError> {
        let c = &self.chain;
        let basis = match c.basis {
            Some(BasisName::Symmetric) => BasisOrder::Symmetric,
            Some(BasisName::Distinguished) => BasisOrder::Distinguished,
            None if c.mode == ModeName::OpenSnp => BasisOrder::Symmetric,
            None => BasisOrder::Distinguished,
        };
        GradingSignature::new(c.m, c.n, basis, c.theta0).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn chain_spec(&self) -> Result<ChainSpec, CliError> {
        let mode = match self.chain.mode {
            ModeName::Closed => ChainMode::Closed,
            ModeName::OpenSp => ChainMode::OpenSp,
            ModeName::OpenSnp => ChainMode::OpenSnp,
        };
        Ok(ChainSpec::new(self.signature()?, self.chain.sites, mode)
            .with_minus(self.boundary.minus.to_spec()?)
            .with_plus(self.boundary.plus.to_spec()?)
            .with_cap(self.chain.dim_cap))
    }

    pub fn policy(&self) -> SelfTermPolicy {
        SelfTermPolicy::from_name(&self.solver.policy).expect("validated")
    }
}

/// Applies `a.b.c=value`. The value is parsed as JSON when possible and taken
/// as a plain string otherwise; missing intermediate objects are created.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {assignment:?}")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("bad --set key {path:?}")));
    }
    let mut cur = root;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(key.to_string(), value);
                    return Ok(());
                }
                map.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = key.parse().map_err(|_| CliError::Config(format!("{path}: {key:?} is not an index")))?;
                let slot = items.get_mut(idx).ok_or_else(|| CliError::Config(format!("{path}: index {idx} out of range")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(CliError::Config(format!("{path}: {key:?} is not inside an object"))),
        };
    }
    unreachable!("loop returns on the last key")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn base() -> Value {
        json!({"chain": {"m": 2, "sites": 2, "mode": "open_sp"}})
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = RunConfig::from_value(base()).unwrap();
        assert_eq!(cfg.chain.n, 0);
        assert_eq!(cfg.boundary.minus, BoundaryConfig::Identity);
        assert_eq!(cfg.lambda_samples.exact().unwrap().len(), 8);
        assert_eq!(cfg.policy(), SelfTermPolicy::default());
    }

    #[test]
    fn overrides_are_typed() {
        let mut v = base();
        apply_override(&mut v, "chain.sites=3").unwrap();
        apply_override(&mut v, "boundary.minus={\"type\":\"sp_blocks\",\"blocks\":[1,1,0,0],\"xi\":\"3/2\"}").unwrap();
        apply_override(&mut v, "solver.policy=include_self").unwrap();
        let cfg = RunConfig::from_value(v).unwrap();
        assert_eq!(cfg.chain.sites, 3);
        assert_eq!(cfg.policy(), SelfTermPolicy::IncludeSelf);
        let BoundarySpec::Sp(b) = cfg.boundary.minus.to_spec().unwrap() else { panic!() };
        assert_eq!(b.xi, ExactScalar::ratio(3, 2));
    }

    #[test]
    fn bad_input_is_a_config_error() {
        let mut v = base();
        assert!(apply_override(&mut v, "novalue").is_err());
        apply_override(&mut v, "tolerances.vacuum=-1").unwrap();
        assert!(matches!(RunConfig::from_value(v), Err(CliError::Config(_))));
        let mut v = base();
        apply_override(&mut v, "chain.colour=red").unwrap();
        assert!(RunConfig::from_value(v).is_err());
    }

    #[test]
    fn random_samples_are_reproducible_and_off_axis() {
        let s = LambdaSamples::Random { count: 20, seed: 9 };
        let a = s.exact().unwrap();
        assert_eq!(a, s.exact().unwrap());
        assert!(a.iter().all(|z| z.to_complex().im != 0.0));
    }

    #[test]
    fn scalar_forms() {
        let s: ScalarInput = serde_json::from_value(json!({"re": "1/2", "im": -3})).unwrap();
        assert_eq!(s.to_exact().unwrap(), &ExactScalar::ratio(1, 2) + &ExactScalar::gaussian(0, -3));
        let s: ScalarInput = serde_json::from_value(json!("-1.25")).unwrap();
        assert_eq!(s.to_exact().unwrap(), ExactScalar::ratio(-5, 4));
    }
}
