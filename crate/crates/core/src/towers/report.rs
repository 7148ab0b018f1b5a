use serde::Serialize;

use crate::scalar::C64;

/// One evaluated bound in a tower's search.
#[derive(Clone, Debug, Serialize)]
pub struct BoundStep {
    pub m: usize,
    pub bound: f64,
    pub target: f64,
}

/// Provenance of a tower run: inputs as given, the iteration count used and every evaluated bound.
#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub algorithm: String,
    pub inputs: serde_json::Value,
    pub m_used: usize,
    pub bound_trace: Vec<BoundStep>,
    pub points: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
}

pub(crate) fn pairs(points: &[C64]) -> Vec<[f64; 2]> {
    points.iter().map(|z| [z.re, z.im]).collect()
}

impl TowerReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
