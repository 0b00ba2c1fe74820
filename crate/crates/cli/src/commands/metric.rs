//! A single distance between two operators.

use gaplab_core::metrics::tilde_distance_tol;
use gaplab_core::{
    gap_projection_distance, gap_sup_distance, riesz_distance, MetricReport, Operator,
    ToleranceConfig,
};
use serde::Serialize;

use crate::config::Which;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricJson {
    pub value: f64,
    pub certified_error: f64,
    pub method: &'static str,
}

impl From<MetricReport> for MetricJson {
    fn from(r: MetricReport) -> Self {
        Self {
            value: r.value,
            certified_error: r.certified_error,
            method: r.method.as_str(),
        }
    }
}

pub fn run(a: &Operator, b: &Operator, which: Which, tol: &ToleranceConfig) -> Result<MetricJson, CliError> {
    let report = match which {
        Which::GapProj => gap_projection_distance(a, b),
        Which::GapSup => gap_sup_distance(a, b),
        Which::Riesz => riesz_distance(a, b),
        Which::Tilde => tilde_distance_tol(a, b, tol),
    }?;
    Ok(report.into())
}

pub fn json(m: &MetricJson) -> String {
    serde_json::to_string(m).expect("plain struct") + "\n"
}
