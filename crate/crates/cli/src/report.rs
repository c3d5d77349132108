//! Serialized report schema. Exact rationals are "num/den" strings; reals
//! that approximate something carry an error bound next to them.

use serde::{Deserialize, Serialize};

use crate::args::Output;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Output>,
    pub jobs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bit_budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub command: String,
    pub config: RunConfig,
    pub result: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LattesReport {
    pub curve: Vec<String>,
    pub m: u64,
    pub degree: usize,
    /// Coefficients, constant term first.
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    pub numerator_text: String,
    pub denominator_text: String,
    /// `x' = x + shift` takes the curve to `y² = x³ + A·x + B`.
    pub shift: String,
    pub short_a: String,
    pub short_b: String,
    pub homogeneous_resultant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub part: String,
    pub power: usize,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightRow {
    pub point: String,
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub naive_height: f64,
    pub comparison_constant: f64,
    /// `None` when the preperiodicity test hit its iteration cap.
    pub preperiodic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreperiodicRow {
    pub point: String,
    /// "preperiodic", "wandering" or "inconclusive"
    pub status: String,
    pub tail: Option<usize>,
    pub cycle: Option<usize>,
    pub certificate_iterate: Option<usize>,
    pub certificate_height: Option<f64>,
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QReport {
    pub p: u64,
    pub j: String,
    pub valuation: i64,
    /// q modulo p^precision, as a rational representative.
    pub q: String,
    pub precision: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonRow {
    pub t: String,
    pub val: String,
    pub tent: String,
    pub on_tent: bool,
    pub in_value_group: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub q: QReport,
    pub rows: Vec<SkeletonRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TateRow {
    pub zeta: String,
    pub x: String,
    pub y: String,
    pub residual_valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TateReport {
    pub q: QReport,
    pub rows: Vec<TateRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: usize,
    pub degree: usize,
    pub orbit: Vec<String>,
    pub canonical_height_ratio: String,
    pub canonical_height: f64,
    pub canonical_height_error_bound: f64,
    pub naive_orbit_height: f64,
    pub unramified_at_p: String,
    pub spectrum: Vec<String>,
    pub spectrum_at_infinity: usize,
    /// `max |fⁿ(z) − q₀|` over the numerically located roots.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerReport {
    pub p: u64,
    pub m: u64,
    pub q0: String,
    pub q0_height: f64,
    pub q0_height_error_bound: f64,
    pub comparison_constant: f64,
    pub levels: Vec<LevelRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub valuation: String,
    pub multiplicity: usize,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub p: u64,
    pub e: u64,
    pub polynomial: Vec<String>,
    pub entries: Vec<SpectrumEntry>,
    pub at_infinity: usize,
    pub violations: Vec<String>,
    pub all_member: bool,
}
