//! Scenario files: schema, parsing and validation.
//!
//! A file holds either one scenario object or `{"scenarios": [...]}`. Every
//! object rejects unknown keys. `parameters` is checked against the schema of
//! the scenario's `kind` when the file is loaded, before anything runs.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use robertson_core::pt::{ParityMatrix, TwoLevelParams};
use robertson_core::zero_bound::{FamilyDescriptor, Objective};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario '{id}': invalid parameters for kind {kind}: {source}")]
    Parameters {
        id: String,
        kind: String,
        source: serde_json::Error,
    },
    #[error("duplicate scenario_id '{0}'")]
    DuplicateId(String),
    #[error("scenario '{0}' is stochastic and needs a seed")]
    MissingSeed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    FiniteDim,
    FamilyScan,
    Search,
    BoxStandard,
    BoxSymmetric,
    PtModel,
    PtNonUniversality,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::FiniteDim => "finite_dim",
            Self::FamilyScan => "family_scan",
            Self::Search => "search",
            Self::BoxStandard => "box_standard",
            Self::BoxSymmetric => "box_symmetric",
            Self::PtModel => "pt_model",
            Self::PtNonUniversality => "pt_non_universality",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Self::FamilyScan | Self::Search | Self::PtNonUniversality)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    pub kind: ScenarioKind,
    #[serde(default)]
    pub description: String,
    pub parameters: Value,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ScenarioConfig {
    /// Parses `parameters` against the schema of `kind`.
    pub fn typed_parameters(&self) -> Result<Parameters, SchemaError> {
        let p = self.parameters.clone();
        let wrap = |source| SchemaError::Parameters {
            id: self.scenario_id.clone(),
            kind: self.kind.name().to_string(),
            source,
        };
        Ok(match self.kind {
            ScenarioKind::FiniteDim => Parameters::FiniteDim(serde_json::from_value(p).map_err(wrap)?),
            ScenarioKind::FamilyScan => Parameters::FamilyScan(serde_json::from_value(p).map_err(wrap)?),
            ScenarioKind::Search => Parameters::Search(serde_json::from_value(p).map_err(wrap)?),
            ScenarioKind::BoxStandard | ScenarioKind::BoxSymmetric => {
                Parameters::Box(serde_json::from_value(p).map_err(wrap)?)
            }
            ScenarioKind::PtModel => Parameters::PtModel(serde_json::from_value(p).map_err(wrap)?),
            ScenarioKind::PtNonUniversality => {
                Parameters::PtNonUniversality(serde_json::from_value(p).map_err(wrap)?)
            }
        })
    }

    fn validate(&self) -> Result<(), SchemaError> {
        let random_model = matches!(
            self.typed_parameters()?,
            Parameters::PtModel(PtModelParams {
                model: ModelSpec::RandomUnbroken { .. },
                ..
            })
        );
        if (self.kind.is_stochastic() || random_model) && self.seed.is_none() {
            return Err(SchemaError::MissingSeed(self.scenario_id.clone()));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Batch {
    scenarios: Vec<ScenarioConfig>,
}

/// Parses and validates a scenario file.
pub fn parse_scenarios(text: &str) -> Result<Vec<ScenarioConfig>, SchemaError> {
    let value: Value = serde_json::from_str(text)?;
    let configs = if value.get("scenarios").is_some() {
        serde_json::from_value::<Batch>(value)?.scenarios
    } else {
        vec![serde_json::from_value::<ScenarioConfig>(value)?]
    };
    validate_all(&configs)?;
    Ok(configs)
}

pub fn validate_all(configs: &[ScenarioConfig]) -> Result<(), SchemaError> {
    let mut seen = HashSet::new();
    for c in configs {
        if !seen.insert(c.scenario_id.as_str()) {
            return Err(SchemaError::DuplicateId(c.scenario_id.clone()));
        }
        c.validate()?;
    }
    Ok(())
}

/// Expected outputs: numbers compare within `tolerance`, everything else
/// exactly; arrays compare elementwise.
pub type Expectations = BTreeMap<String, Value>;

/// One-sided limits on numeric outputs (`at_least`, `at_most`).
pub type Limits = BTreeMap<String, f64>;

/// Either a catalog name (`sigma_x`, `lambda_4`, ...) or explicit rows of
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Named(String),
    Matrix(MatrixRows),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRows {
    pub rows: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Parameters {
    FiniteDim(FiniteDimParams),
    FamilyScan(FamilyScanParams),
    Search(SearchParams),
    Box(BoxParams),
    PtModel(PtModelParams),
    PtNonUniversality(PtNonUniversalityParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteDimParams {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    /// Amplitudes as `[re, im]` pairs.
    pub state: Vec<[f64; 2]>,
    /// Normalize `state` first; otherwise it must already be normalized.
    #[serde(default)]
    pub normalize: bool,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub at_least: Limits,
    #[serde(default)]
    pub at_most: Limits,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyScanParams {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    pub family: FamilyDescriptor,
    /// Defaults to 512 per pair of free real parameters, capped at 10⁵.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub at_least: Limits,
    #[serde(default)]
    pub at_most: Limits,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn default_restarts() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    pub objective: Objective,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub at_least: Limits,
    #[serde(default)]
    pub at_most: Limits,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxParams {
    pub length: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    /// Default extension phase; probes may override it.
    #[serde(default)]
    pub theta: f64,
    pub probes: Vec<BoxProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoxState {
    /// `u_n` of the probe's extension.
    Eigenfunction { n: i64 },
    /// Lowest state vanishing at both walls.
    DirichletGround,
    /// `amplitude · e^{ikx}`.
    PlaneWave { amplitude: [f64; 2], k: f64 },
    /// `amplitude · cos(kx + phase)`.
    Trig { amplitude: f64, k: f64, phase: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoxProbe {
    Eigenpair {
        n: i64,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    /// Checks whether `x · u_n` obeys the boundary law of the extension.
    DomainCheckPosition {
        n: i64,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    CanonicalCommutator {
        state: BoxState,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    XmCommutator {
        state: BoxState,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    XmReport {
        state: BoxState,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    CanonicalReport {
        state: BoxState,
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        expect: Expectations,
        #[serde(default)]
        at_least: Limits,
        #[serde(default)]
        at_most: Limits,
        #[serde(default)]
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `[[r e^{iθ}, s], [s, r e^{−iθ}]]` with the exchange parity.
    TwoLevel(TwoLevelParams),
    /// Row-major `[re, im]` entries; parity defaults to the exchange matrix.
    Matrix {
        rows: Vec<Vec<[f64; 2]>>,
        #[serde(default)]
        parity: Option<ParityMatrix>,
    },
    /// A seeded well-conditioned unbroken model.
    RandomUnbroken { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedObservable {
    Hamiltonian,
    C,
    Identity,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtModelParams {
    pub model: ModelSpec,
    /// Operators tested against the CPT observable condition (needs C).
    #[serde(default)]
    pub observables: Vec<NamedObservable>,
    /// For two-level models: follow θ linearly down to 0 over this many
    /// points and report `‖C − P‖` at the ends and the middle.
    #[serde(default)]
    pub hermitian_limit_points: Option<usize>,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub at_least: Limits,
    #[serde(default)]
    pub at_most: Limits,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn two() -> usize {
    2
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtNonUniversalityParams {
    #[serde(default = "two")]
    pub dim: usize,
    #[serde(default = "three")]
    pub pairs: usize,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub at_least: Limits,
    #[serde(default)]
    pub at_most: Limits,
    #[serde(default)]
    pub tolerance: Option<f64>,
}
