use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use roughmorrey::catalog::{FunctionSpec, RadiiSet, WeightSpec};
use roughmorrey::conditions::ConditionId;
use roughmorrey::grid::{Grid, Point};
use roughmorrey::kernel::KernelShape;
use roughmorrey::operators::OperatorParams;
use roughmorrey::tails::HalfLineFunction;
use roughmorrey::verify::OperatorId;

/// Reads the config file as a JSON object and checks its optional `command`
/// field against the subcommand.
pub fn load(path: &Path, command: &str) -> Result<Map<String, Value>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("malformed JSON in {}: {e}", path.display()))?;
    let Value::Object(mut map) = value else {
        return Err(format!("{} must hold a JSON object", path.display()));
    };
    match map.remove("command") {
        None => Ok(map),
        Some(Value::String(c)) if c == command => Ok(map),
        Some(other) => Err(format!("config is for command {other}, not \"{command}\"")),
    }
}

pub fn parse<C: DeserializeOwned>(map: Map<String, Value>) -> Result<C, String> {
    serde_json::from_value(Value::Object(map)).map_err(|e| format!("invalid config: {e}"))
}

/// Rejects keys outside `allowed`, for configs that cannot deny unknown
/// fields through serde.
pub fn check_keys(map: &Map<String, Value>, allowed: &[&str]) -> Result<(), String> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(format!("invalid config: unknown field `{k}`")),
        None => Ok(()),
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormSelector {
    LocalMorrey {
        p: f64,
        #[serde(default)]
        weak: bool,
    },
    GlobalMorrey {
        p: f64,
        centers: Vec<Point<f64>>,
    },
    Beurling {
        q: f64,
        #[serde(default = "yes")]
        homogeneous: bool,
        k_min: i32,
        k_max: i32,
    },
    BeurlingAlgebra {
        q: f64,
        k_max: i32,
    },
    Cbmo {
        q: f64,
        lambda: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub grid: Grid<f64>,
    pub function: FunctionSpec<f64>,
    pub norm: NormSelector,
    pub weight1: Option<WeightSpec<f64>>,
    pub center: Option<Point<f64>>,
    pub radii: Option<RadiiSet<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplyConfig {
    pub grid: Grid<f64>,
    pub function: FunctionSpec<f64>,
    pub operator: OperatorId,
    pub params: OperatorParams<f64>,
    pub kernel: Option<KernelShape<f64>>,
    pub symbol: Option<FunctionSpec<f64>>,
    pub points: Option<Vec<Point<f64>>>,
    pub operator_radii: Option<RadiiSet<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyConfig {
    pub v1: HalfLineFunction<f64>,
    pub v2: HalfLineFunction<f64>,
    pub w: HalfLineFunction<f64>,
    /// The `t` grid; four decades at least.
    pub radii: Option<RadiiSet<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub condition: ConditionId,
    pub weight1: WeightSpec<f64>,
    pub weight2: Option<WeightSpec<f64>>,
    pub params: Option<OperatorParams<f64>>,
    pub center: Option<Point<f64>>,
    pub radii: RadiiSet<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[default]
    Boundedness,
    LocalEstimate,
    Pointwise,
    CbmoLog,
}

/// Fields of an experiment spec accepted by `verify`.
pub const EXPERIMENT_KEYS: &[&str] = &[
    "operator",
    "params",
    "kernel",
    "weight1",
    "weight2",
    "norm",
    "center",
    "functions",
    "symbol",
    "grid",
    "radii",
    "radii_mode",
    "operator_radii",
    "ratio_cap",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CbmoLogConfig {
    pub grid: Grid<f64>,
    pub function: FunctionSpec<f64>,
    pub q: f64,
    pub lambda: f64,
    pub center: Option<Point<f64>>,
    pub pairs: Vec<(f64, f64)>,
    pub ratio_cap: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelInfoConfig {
    pub dim: usize,
    pub kernel: KernelShape<f64>,
    /// Finite sphere exponents; the essential sup is always reported.
    pub s: Option<Vec<f64>>,
}
