//! Experiment configuration documents.

use std::path::PathBuf;

use oneshot::benchmark::{BenchGrid, FunctionId, Prior};
use oneshot::method::DEFAULT_METHODS;
use oneshot::{SamplerSpec, Target};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sample,
    Bench,
    CheckBounds,
    Report,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Sample => "sample",
            ExperimentKind::Bench => "bench",
            ExperimentKind::CheckBounds => "check-bounds",
            ExperimentKind::Report => "report",
        }
    }
}

/// A complete, self-describing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Master seed; every random draw derives from it.
    pub seed: u64,
    /// Replica count; per-experiment default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    /// Worker threads; all available cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Output directory.
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Method names for `bench`; the default roster when empty.
    #[serde(default)]
    pub methods: Vec<String>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sample: SampleConfig,
    #[serde(default)]
    pub report: ReportConfig,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// `[ambient d, critical d']` pairs.
    pub dims: Vec<[usize; 2]>,
    pub budgets: Vec<usize>,
    pub functions: Vec<FunctionId>,
    pub prior: Prior,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::from(BenchGrid::desk())
    }
}

impl From<BenchGrid> for GridConfig {
    fn from(g: BenchGrid) -> Self {
        Self {
            dims: g.dims.iter().map(|&(d, dp)| [d, dp]).collect(),
            budgets: g.budgets,
            functions: g.functions,
            prior: g.prior,
        }
    }
}

impl GridConfig {
    pub fn to_grid(&self) -> BenchGrid {
        BenchGrid {
            dims: self.dims.iter().map(|&[d, dp]| (d, dp)).collect(),
            budgets: self.budgets.clone(),
            functions: self.functions.clone(),
            prior: self.prior,
        }
    }

    /// Replaces the axes by the full-scale ones, keeping functions and prior.
    pub fn use_full_axes(&mut self) {
        let full = BenchGrid::full();
        self.dims = full.dims.iter().map(|&(d, dp)| [d, dp]).collect();
        self.budgets = full.budgets;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub method: String,
    pub n: usize,
    pub d: usize,
    pub target: Target,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { method: "Random".into(), n: 100, d: 2, target: Target::UnitCube }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    /// Results file to summarise; `<out>/results.csv` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub quantiles: Vec<f64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { input: None, quantiles: vec![0.1, 0.5, 0.9] }
    }
}

/// Default replica count of `bench`.
pub const DEFAULT_BENCH_REPLICAS: usize = 1000;

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            replicas: None,
            jobs: None,
            out: default_out(),
            methods: Vec::new(),
            grid: GridConfig::default(),
            sample: SampleConfig::default(),
            report: ReportConfig::default(),
        }
    }

    /// Parses a TOML document. A missing `kind` or `seed` is taken from the
    /// fallbacks; a `kind` that disagrees with `kind_hint` is an error.
    pub fn from_toml_with(text: &str, kind_hint: Option<ExperimentKind>, seed_hint: Option<u64>) -> Result<Self, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(one_line(&e.to_string())))?;
        if let Some(kind) = kind_hint {
            match table.get("kind").and_then(|v| v.as_str()) {
                Some(k) if k != kind.name() => {
                    return Err(CliError::Config(format!("config kind '{k}' does not match subcommand '{}'", kind.name())))
                }
                _ => {
                    table.insert("kind".into(), toml::Value::String(kind.name().into()));
                }
            }
        }
        if let Some(seed) = seed_hint {
            let seed = i64::try_from(seed).map_err(|_| CliError::Config(format!("seed {seed} does not fit a config document")))?;
            table.insert("seed".into(), toml::Value::Integer(seed));
        }
        if !table.contains_key("seed") {
            return Err(CliError::Config("a seed is required (config key 'seed' or --seed)".into()));
        }
        let config: Self = table.try_into().map_err(|e: toml::de::Error| CliError::Config(one_line(&e.to_string())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Self::from_toml_with(text, None, None)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// The bench roster: configured names, or the default ones.
    pub fn method_names(&self) -> Vec<String> {
        if self.methods.is_empty() {
            DEFAULT_METHODS.iter().map(|s| s.to_string()).collect()
        } else {
            self.methods.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.replicas == Some(0) {
            return bad("replicas must be >= 1".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be >= 1".into());
        }
        for name in self.method_names().iter().chain(std::iter::once(&self.sample.method)) {
            SamplerSpec::parse(name).map_err(|e| CliError::Config(e.to_string()))?;
        }
        self.grid.to_grid().validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.sample.n == 0 || self.sample.d == 0 {
            return bad("sample n and d must be >= 1".into());
        }
        if let Some(q) = self.report.quantiles.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return bad(format!("report quantile {q} outside [0, 1]"));
        }
        Ok(())
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
