use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sequence_spaces::CompactSetSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Converge,
    BasisConstant,
    P0,
    Net,
    Invariants,
    Enumerate,
    Norm,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Converge => "converge",
            Kind::BasisConstant => "basis-constant",
            Kind::P0 => "p0",
            Kind::Net => "net",
            Kind::Invariants => "invariants",
            Kind::Enumerate => "enumerate",
            Kind::Norm => "norm",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A coefficient given either as a real number or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(f64),
    Complex([f64; 2]),
}

impl Coefficient {
    pub fn value(self) -> Complex64 {
        match self {
            Coefficient::Real(x) => Complex64::new(x, 0.0),
            Coefficient::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// JSON experiment description. Every field is optional at parse time;
/// each command checks for the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<CompactSetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Degree (p0, enumerate) or the single degree of a basis-constant run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Basis-constant runs cover degrees `1..=n_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    /// Number of leading coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Top degree of the Taylor polynomial in a converge run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<u32>,
    /// Coefficients of the linear functional in `exp(Σ φ_i z_i)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Coefficient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// A config problem, located by a dotted field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at `{}`: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub const DEFAULT_BUDGET: usize = 2000;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_SAMPLES: usize = 10_000;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let mut track = serde_path_to_error::Track::new();
        let pd = serde_path_to_error::Deserializer::new(&mut de, &mut track);
        match ExperimentConfig::deserialize(pd) {
            Ok(cfg) => {
                de.end().map_err(|e| ConfigError::new("$", e.to_string()))?;
                Ok(cfg)
            }
            Err(e) => {
                let path = track.path().to_string();
                Err(ConfigError::new(
                    if path == "." { "$".to_string() } else { path },
                    e.to_string(),
                ))
            }
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("$", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn require_seed(&self) -> Result<u64, ConfigError> {
        self.seed.ok_or_else(|| {
            ConfigError::new("seed", "a seed is required (pass --seed or set \"seed\")")
        })
    }

    pub fn require_space(&self) -> Result<&CompactSetSpec, ConfigError> {
        self.space
            .as_ref()
            .ok_or_else(|| ConfigError::new("space", "missing compact set description"))
    }

    pub fn positive(
        value: Option<usize>,
        path: &str,
        default: Option<usize>,
    ) -> Result<usize, ConfigError> {
        match value.or(default) {
            Some(0) => Err(ConfigError::new(path, "must be at least 1")),
            Some(v) => Ok(v),
            None => Err(ConfigError::new(path, "missing")),
        }
    }
}
