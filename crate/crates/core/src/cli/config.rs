//! Experiment configuration files.
//!
//! A config is one TOML document: run-level keys at the top and one section
//! named after the experiment kind holding its parameters.
//!
//! ```toml
//! kind = "dyn-curve"
//! seed = 42
//!
//! [dyn-curve]
//! sizes = [10, 20, 30]
//!
//! [dyn-curve.model]
//! preset = "minimal"
//! n = 200
//! ```

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::quench::{HamiltonianSpec, Hopping, TimeGrid, TimeScheme};
use crate::rfg::BoundKind;

/// A config problem, located in the source text when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.file, l, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RfgCurve,
    DynCurve,
    Typicality,
    Variance,
    Moments,
    Classify,
    Qp,
    OracleCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::RfgCurve,
        ExperimentKind::DynCurve,
        ExperimentKind::Typicality,
        ExperimentKind::Variance,
        ExperimentKind::Moments,
        ExperimentKind::Classify,
        ExperimentKind::Qp,
        ExperimentKind::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RfgCurve => "rfg-curve",
            ExperimentKind::DynCurve => "dyn-curve",
            ExperimentKind::Typicality => "typicality",
            ExperimentKind::Variance => "variance",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Classify => "classify",
            ExperimentKind::Qp => "qp",
            ExperimentKind::OracleCheck => "oracle-check",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::RfgCurve => "Monte-Carlo Page curve of the random fermionic Gaussian ensemble",
            ExperimentKind::DynCurve => "long-time-averaged entropy after a density-wave quench",
            ExperimentKind::Typicality => "empirical tails against the four concentration bounds",
            ExperimentKind::Variance => "log-log fit of entropy variance against N at fixed N_A",
            ExperimentKind::Moments => "time-averaged Tr X^p against the closed-form moments",
            ExperimentKind::Classify => "conserved mode occupations and the half-occupation verdict",
            ExperimentKind::Qp => "dynamical curve against the quasi-particle lower bound",
            ExperimentKind::OracleCheck => "covariance entropies against brute-force Fock-space entropies",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Minimal,
    OddRange,
    EvenRange,
}

/// Hamiltonian given by preset or by an explicit hopping table.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub preset: Option<Preset>,
    pub n: Option<usize>,
    /// Perturbation strength for the range-2 and range-3 presets.
    pub coupling: Option<f64>,
    pub hoppings: Option<Vec<Hopping>>,
}

impl ModelSection {
    /// Builds the spec on `n` sites (falls back to the section's own `n`).
    pub fn spec(&self, n: Option<usize>) -> Result<HamiltonianSpec, String> {
        let n = n.or(self.n).ok_or("model needs `n`")?;
        let r = match (self.preset, &self.hoppings) {
            (Some(_), Some(_)) => return Err("give either `preset` or `hoppings`, not both".into()),
            (None, None) => return Err("model needs `preset` or `hoppings`".into()),
            (Some(Preset::Minimal), None) => {
                if self.coupling.is_some() {
                    return Err("preset `minimal` takes no `coupling`".into());
                }
                HamiltonianSpec::minimal(n)
            }
            (Some(Preset::OddRange), None) => HamiltonianSpec::odd_range(n, self.coupling.unwrap_or(0.4)),
            (Some(Preset::EvenRange), None) => HamiltonianSpec::even_range(n, self.coupling.unwrap_or(0.3)),
            (None, Some(h)) => HamiltonianSpec::new(n, h.clone()),
        };
        r.map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub scheme: Option<TimeScheme>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

impl TimeSection {
    pub fn grid(section: Option<&TimeSection>, seed: u64) -> TimeGrid {
        let d = TimeGrid::default_with_seed(seed);
        match section {
            None => d,
            Some(s) => TimeGrid {
                scheme: s.scheme.unwrap_or(d.scheme),
                t_min: s.t_min.unwrap_or(d.t_min),
                t_max: s.t_max.unwrap_or(d.t_max),
                samples: s.samples.unwrap_or(d.samples),
                seed,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfgCurveParams {
    pub n: usize,
    pub m: Option<usize>,
    pub samples: usize,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynCurveParams {
    pub sizes: Vec<usize>,
    pub model: ModelSection,
    pub time: Option<TimeSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum BoundChoice {
    One(BoundKind),
    All(AllBounds),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllBounds {
    All,
}

impl BoundChoice {
    pub fn kinds(self) -> Vec<BoundKind> {
        match self {
            BoundChoice::One(k) => vec![k],
            BoundChoice::All(_) => BoundKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypicalityParams {
    pub n: usize,
    pub n_a: usize,
    pub samples: usize,
    pub bound: BoundChoice,
    /// Shared grid; per-bound defaults span the vacuous-to-binding crossover.
    pub epsilons: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarianceParams {
    pub n_values: Vec<usize>,
    pub n_a: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyParams {
    pub model: ModelSection,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckParams {
    pub n_values: Vec<usize>,
    pub models: Vec<ModelSection>,
    pub times: usize,
    pub t_max: f64,
    pub tolerance: Option<f64>,
}

/// Experiment-specific parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    RfgCurve(RfgCurveParams),
    DynCurve(DynCurveParams),
    Typicality(TypicalityParams),
    Variance(VarianceParams),
    Moments(DynCurveParams),
    Classify(ClassifyParams),
    Qp(DynCurveParams),
    OracleCheck(OracleCheckParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    kind: ExperimentKind,
    seed: u64,
    name: Option<String>,
    threads: Option<usize>,
    output: Option<String>,
    plot: Option<bool>,
    #[serde(rename = "rfg-curve")]
    rfg_curve: Option<RfgCurveParams>,
    #[serde(rename = "dyn-curve")]
    dyn_curve: Option<DynCurveParams>,
    typicality: Option<TypicalityParams>,
    variance: Option<VarianceParams>,
    moments: Option<DynCurveParams>,
    classify: Option<ClassifyParams>,
    qp: Option<DynCurveParams>,
    #[serde(rename = "oracle-check")]
    oracle_check: Option<OracleCheckParams>,
}

/// A parsed config plus the exact text it came from.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub name: String,
    pub threads: usize,
    pub output: Option<String>,
    pub plot: bool,
    pub params: Params,
    pub source_text: String,
    pub source_name: String,
}

/// 1-based line of a byte offset.
fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line where `key` is assigned inside `[section]` (or at the top level when
/// `section` is empty).
pub fn locate_key(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_start_matches('[').trim_end_matches(']').trim().to_string();
            if current == format!("{section}.{key}") || (!section.is_empty() && current.starts_with(&format!("{section}.{key}."))) {
                return Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl ExperimentConfig {
    pub fn parse(text: &str, source_name: &str) -> Result<Self, ConfigError> {
        let err = |line: Option<usize>, message: String| ConfigError { file: source_name.to_string(), line, message };
        let doc: Document = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_at(text, s.start));
            err(line, e.message().trim().to_string())
        })?;
        let section = doc.kind.name();
        let missing = || err(locate_key(text, "", "kind"), format!("kind `{section}` needs a [{section}] section"));
        let params = match doc.kind {
            ExperimentKind::RfgCurve => Params::RfgCurve(doc.rfg_curve.ok_or_else(missing)?),
            ExperimentKind::DynCurve => Params::DynCurve(doc.dyn_curve.ok_or_else(missing)?),
            ExperimentKind::Typicality => Params::Typicality(doc.typicality.ok_or_else(missing)?),
            ExperimentKind::Variance => Params::Variance(doc.variance.ok_or_else(missing)?),
            ExperimentKind::Moments => Params::Moments(doc.moments.ok_or_else(missing)?),
            ExperimentKind::Classify => Params::Classify(doc.classify.ok_or_else(missing)?),
            ExperimentKind::Qp => Params::Qp(doc.qp.ok_or_else(missing)?),
            ExperimentKind::OracleCheck => Params::OracleCheck(doc.oracle_check.ok_or_else(missing)?),
        };
        let name = doc.name.unwrap_or_else(|| {
            Path::new(source_name).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| section.to_string())
        });
        let cfg = Self {
            kind: doc.kind,
            seed: doc.seed,
            name,
            threads: doc.threads.unwrap_or(0),
            output: doc.output,
            plot: doc.plot.unwrap_or(false),
            params,
            source_text: text.to_string(),
            source_name: source_name.to_string(),
        };
        cfg.validate().map_err(|(key, msg)| {
            let line = key.and_then(|k| {
                let (sec, leaf) = match k.rsplit_once('.') {
                    Some((s, l)) => (format!("{section}.{s}"), l.to_string()),
                    None => (section.to_string(), k.to_string()),
                };
                locate_key(text, &sec, &leaf).or_else(|| locate_key(text, section, &k))
            });
            err(line.or_else(|| locate_key(text, "", section)), msg)
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            file: path.display().to_string(),
            line: None,
            message: format!("cannot read config: {e}"),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Range checks that the TOML types cannot express. Returns the
    /// offending key (relative to the kind section) and a message.
    fn validate(&self) -> Result<(), (Option<String>, String)> {
        let key = |k: &str, m: String| Err((Some(k.to_string()), m));
        let check_sizes = |sizes: &[usize], n: usize| -> Result<(), (Option<String>, String)> {
            if sizes.is_empty() {
                return key("sizes", "`sizes` must not be empty".into());
            }
            if let Some(bad) = sizes.iter().find(|&&k| k == 0 || k > n) {
                return key("sizes", format!("subsystem size {bad} outside [1, {n}]"));
            }
            Ok(())
        };
        let check_time = |t: &Option<TimeSection>| -> Result<(), (Option<String>, String)> {
            if let Err(e) = TimeSection::grid(t.as_ref(), self.seed).validate() {
                return key("time", e.to_string());
            }
            Ok(())
        };
        let model_spec = |m: &ModelSection| m.spec(None).map_err(|e| (Some("model".to_string()), e));
        match &self.params {
            Params::RfgCurve(p) => {
                let m = p.m.unwrap_or(p.n / 2);
                if let Err(e) = crate::rfg::EnsembleConfig::new(p.n, m, p.samples, self.seed) {
                    return key("n", e.to_string());
                }
                check_sizes(&p.sizes, p.n)
            }
            Params::DynCurve(p) | Params::Moments(p) | Params::Qp(p) => {
                let spec = model_spec(&p.model)?;
                check_sizes(&p.sizes, spec.n)?;
                if matches!(self.params, Params::Moments(_)) {
                    if let Some(bad) = p.sizes.iter().find(|&&k| 2 * k > spec.n && k != spec.n) {
                        return key("sizes", format!("moment formulas need N_A <= N/2 or N_A = N, got {bad}"));
                    }
                }
                check_time(&p.time)
            }
            Params::Typicality(p) => {
                if let Err(e) = crate::rfg::EnsembleConfig::half_filling(p.n, p.samples, self.seed) {
                    return key("n", e.to_string());
                }
                if p.n_a == 0 || p.n_a > p.n {
                    return key("n_a", format!("n_a = {} outside [1, {}]", p.n_a, p.n));
                }
                if let Some(eps) = &p.epsilons {
                    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
                        return key("epsilons", "`epsilons` must be non-empty and positive".into());
                    }
                }
                Ok(())
            }
            Params::Variance(p) => {
                if p.n_values.len() < 3 {
                    return key("n_values", "need at least 3 values of N".into());
                }
                if p.n_a == 0 {
                    return key("n_a", "n_a must be >= 1".into());
                }
                if let Some(bad) = p.n_values.iter().find(|&&n| n < 2 * p.n_a || n % 2 != 0) {
                    return key("n_values", format!("N = {bad} must be even and at least 2 n_a"));
                }
                if p.samples < 4 {
                    return key("samples", "need at least 4 samples per N".into());
                }
                Ok(())
            }
            Params::Classify(p) => model_spec(&p.model).map(|_| ()),
            Params::OracleCheck(p) => {
                if p.n_values.is_empty() {
                    return key("n_values", "`n_values` must not be empty".into());
                }
                if let Some(bad) = p.n_values.iter().find(|&&n| n < 2 || n % 2 != 0 || n > crate::exact_oracle::MAX_MODES) {
                    return key("n_values", format!("oracle needs even 2 <= N <= {}, got {bad}", crate::exact_oracle::MAX_MODES));
                }
                if p.models.is_empty() {
                    return key("models", "`models` must not be empty".into());
                }
                for m in &p.models {
                    for &n in &p.n_values {
                        m.spec(Some(n)).map_err(|e| (Some("models".to_string()), e))?;
                    }
                }
                if p.times == 0 || !(p.t_max > 0.0) {
                    return key("times", "need times >= 1 and t_max > 0".into());
                }
                if matches!(p.tolerance, Some(t) if !(t > 0.0)) {
                    return key("tolerance", "tolerance must be > 0".into());
                }
                Ok(())
            }
        }
    }

    /// Config with a different seed, used by `--seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
