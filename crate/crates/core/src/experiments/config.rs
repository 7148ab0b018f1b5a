use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::C64;
use crate::spectra::pseudospectrum::Region;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Spectra of `P_m T_n P_m` on the (m, n) grid with distances to a reference.
    #[default]
    Sweep,
    /// Distance of the leading blocks to the planted diagonal as a function of n.
    Rate,
    /// Random-ensemble spectra with participation ratios and membership statistics.
    Ensemble,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub region: Region,
    pub resolution: [usize; 2],
    /// Truncation used for the pseudospectrum.
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub operator_id: String,
    pub m_values: Vec<usize>,
    pub n_values: Vec<usize>,
    /// `[re, im]`; the run uses `T + shift` and reports spectra shifted back.
    pub shift: [f64; 2],
    pub seed: u64,
    pub samples: usize,
    pub epsilon: Option<f64>,
    pub grid: Option<GridSpec>,
    pub outputs: Vec<String>,
    /// Name of a metadata set, or `pseudospectrum` to use the ε-mask of `grid`.
    pub reference: Option<String>,
}

pub const OUTPUTS: &[&str] = &["points", "distances", "report", "rates"];

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            kind: ExperimentKind::Sweep,
            operator_id: String::new(),
            m_values: Vec::new(),
            n_values: Vec::new(),
            shift: [0.0, 0.0],
            seed: 0,
            samples: 1,
            epsilon: None,
            grid: None,
            outputs: OUTPUTS.iter().map(|s| s.to_string()).collect(),
            reference: None,
        }
    }
}

impl ExperimentConfig {
    pub fn shift_c64(&self) -> C64 {
        C64::new(self.shift[0], self.shift[1])
    }

    pub fn wants(&self, output: &str) -> bool {
        self.outputs.iter().any(|o| o == output)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("configs serialize")
    }

    /// Semantic checks; all problems are reported together.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errs.push(format!("schema_version: expected {SCHEMA_VERSION}, got {}", self.schema_version));
        }
        if self.operator_id.trim().is_empty() {
            errs.push("operator_id: must be nonempty".into());
        }
        if self.m_values.is_empty() {
            errs.push("m_values: must be nonempty".into());
        }
        if self.m_values.contains(&0) {
            errs.push("m_values: entries must be positive".into());
        }
        if self.n_values.is_empty() {
            errs.push("n_values: must be nonempty".into());
        }
        if self.samples == 0 {
            errs.push("samples: must be at least 1".into());
        }
        if !self.shift.iter().all(|v| v.is_finite()) {
            errs.push("shift: must be finite".into());
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) || !e.is_finite() {
                errs.push(format!("epsilon: must be positive, got {e}"));
            }
        }
        if let Some(g) = &self.grid {
            if g.resolution.contains(&0) {
                errs.push("grid.resolution: entries must be positive".into());
            }
            if g.m == 0 {
                errs.push("grid.m: must be positive".into());
            }
            let r = &g.region;
            if !(r.re_min <= r.re_max && r.im_min <= r.im_max) {
                errs.push("grid.region: min must not exceed max".into());
            }
        }
        if self.reference.as_deref() == Some("pseudospectrum") && (self.grid.is_none() || self.epsilon.is_none()) {
            errs.push("reference: `pseudospectrum` needs both grid and epsilon".into());
        }
        for o in &self.outputs {
            if !OUTPUTS.contains(&o.as_str()) {
                errs.push(format!("outputs: unknown artifact `{o}` (known: {})", OUTPUTS.join(", ")));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    /// The figure-scale parameters for the operators studied at larger sizes.
    pub fn paper_scale(&mut self) {
        let name = self.operator_id.split(':').next().unwrap_or("");
        match name {
            "bidiagonal_a" | "operator_a" => {
                self.m_values = vec![300];
                self.n_values = vec![0, 1000];
            }
            "pt_h1" | "h1" => {
                self.m_values = vec![500];
                self.n_values = vec![0, 3000];
            }
            "feinberg_zee" | "feinberg_zee_h3" | "h3" => {
                self.m_values = vec![200];
                self.n_values = vec![0, 50, 2000];
                self.samples = 200;
            }
            "hatano_nelson" | "hatano_nelson_h4" | "h4" => {
                self.samples = 200;
            }
            _ => {}
        }
    }
}

const KEYS: &[&str] = &[
    "schema_version",
    "kind",
    "operator_id",
    "m_values",
    "n_values",
    "shift",
    "seed",
    "samples",
    "epsilon",
    "grid",
    "outputs",
    "reference",
];

fn check_uint_list(v: &Value, key: &str, errs: &mut Vec<String>) {
    match v.as_array() {
        Some(a) => {
            for (i, x) in a.iter().enumerate() {
                if x.as_u64().is_none() {
                    errs.push(format!("{key}[{i}]: expected a non-negative integer, got {x}"));
                }
            }
        }
        None => errs.push(format!("{key}: expected a list of integers, got {v}")),
    }
}

fn check_number(v: &Value, key: &str, errs: &mut Vec<String>) {
    if !v.is_number() {
        errs.push(format!("{key}: expected a number, got {v}"));
    }
}

fn check_grid(v: &Value, errs: &mut Vec<String>) {
    let Some(obj) = v.as_object() else {
        errs.push(format!("grid: expected an object, got {v}"));
        return;
    };
    for k in obj.keys() {
        if !["region", "resolution", "m"].contains(&k.as_str()) {
            errs.push(format!("grid: unknown key `{k}`"));
        }
    }
    match obj.get("region").and_then(Value::as_object) {
        Some(r) => {
            for k in r.keys() {
                if !["re_min", "re_max", "im_min", "im_max"].contains(&k.as_str()) {
                    errs.push(format!("grid.region: unknown key `{k}`"));
                }
            }
            for k in ["re_min", "re_max", "im_min", "im_max"] {
                match r.get(k) {
                    Some(x) => check_number(x, &format!("grid.region.{k}"), errs),
                    None => errs.push(format!("grid.region: missing `{k}`")),
                }
            }
        }
        None => errs.push("grid: missing object `region`".into()),
    }
    match obj.get("resolution").and_then(Value::as_array) {
        Some(a) if a.len() == 2 && a.iter().all(|x| x.as_u64().is_some()) => {}
        _ => errs.push("grid.resolution: expected two non-negative integers".into()),
    }
    if obj.get("m").and_then(Value::as_u64).is_none() {
        errs.push("grid.m: expected a positive integer".into());
    }
}

/// Strict schema check of a JSON document; every violation is collected.
pub fn parse_config_value(v: &Value) -> Result<ExperimentConfig> {
    let Some(obj) = v.as_object() else {
        return Err(Error::Config(vec![format!("expected a JSON object at top level, got {v}")]));
    };
    let mut errs = Vec::new();
    for k in obj.keys() {
        if !KEYS.contains(&k.as_str()) {
            errs.push(format!("unknown key `{k}`"));
        }
    }
    for req in ["operator_id", "m_values", "n_values"] {
        if !obj.contains_key(req) {
            errs.push(format!("missing required key `{req}`"));
        }
    }
    let d = ExperimentConfig::default();
    let mut full: Map<String, Value> = match serde_json::to_value(&d) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("config defaults serialize to an object"),
    };
    for (k, val) in obj {
        match k.as_str() {
            "schema_version" | "seed" | "samples" => {
                if val.as_u64().is_none() {
                    errs.push(format!("{k}: expected a non-negative integer, got {val}"));
                }
            }
            "kind" => {
                if serde_json::from_value::<ExperimentKind>(val.clone()).is_err() {
                    errs.push(format!("kind: expected one of sweep, rate, ensemble, got {val}"));
                }
            }
            "operator_id" => {
                if !val.is_string() {
                    errs.push(format!("operator_id: expected a string, got {val}"));
                }
            }
            "m_values" | "n_values" => check_uint_list(val, k, &mut errs),
            "shift" => match val.as_array() {
                Some(a) if a.len() == 2 && a.iter().all(Value::is_number) => {}
                _ => errs.push(format!("shift: expected [re, im], got {val}")),
            },
            "epsilon" => {
                if !val.is_null() {
                    check_number(val, "epsilon", &mut errs)
                }
            }
            "grid" => {
                if !val.is_null() {
                    check_grid(val, &mut errs)
                }
            }
            "outputs" => match val.as_array() {
                Some(a) => {
                    for (i, x) in a.iter().enumerate() {
                        if !x.is_string() {
                            errs.push(format!("outputs[{i}]: expected a string, got {x}"));
                        }
                    }
                }
                None => errs.push(format!("outputs: expected a list of strings, got {val}")),
            },
            "reference" => {
                if !val.is_null() && !val.is_string() {
                    errs.push(format!("reference: expected a string, got {val}"));
                }
            }
            _ => {}
        }
        full.insert(k.clone(), val.clone());
    }
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    let cfg: ExperimentConfig =
        serde_json::from_value(Value::Object(full)).map_err(|e| Error::Config(vec![e.to_string()]))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config_str(s: &str) -> Result<ExperimentConfig> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Config(vec![format!("invalid JSON: {e}")]))?;
    parse_config_value(&v)
}

/// Applies `key=value` overrides; values are parsed as JSON, falling back to a plain string.
pub fn apply_overrides(base: &Value, overrides: &[String]) -> Result<Value> {
    let mut v = base.clone();
    let obj = v.as_object_mut().ok_or_else(|| Error::Config(vec!["config is not an object".into()]))?;
    let mut errs = Vec::new();
    for o in overrides {
        match o.split_once('=') {
            Some((k, val)) if !k.trim().is_empty() => {
                let parsed = serde_json::from_str(val).unwrap_or_else(|_| Value::String(val.to_string()));
                obj.insert(k.trim().to_string(), parsed);
            }
            _ => errs.push(format!("override `{o}`: expected key=value")),
        }
    }
    if errs.is_empty() {
        Ok(v)
    } else {
        Err(Error::Config(errs))
    }
}
