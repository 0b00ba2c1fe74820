//! Index-preserving paths between Fredholm operators.

use std::fmt::Write;

use gaplab_core::fredholm::homotopy_path_tol;
use gaplab_core::{HomotopyOutcome, HomotopyPath, Operator, ToleranceConfig};

use super::Output;
use crate::error::{CliError, EXIT_NO_PATH};
use crate::format::g12;

fn index_text(i: Option<i64>) -> String {
    i.map_or_else(|| "none".into(), |i| i.to_string())
}

/// One row per sample; `step_gap` is the gap to the previous sample (0 on the first row).
pub fn csv(path: &HomotopyPath) -> String {
    let mut out = String::from("lambda,index,step_gap\n");
    for (i, (lambda, index)) in path.lambdas.iter().zip(&path.indices).enumerate() {
        let gap = if i == 0 { 0.0 } else { path.step_gaps[i - 1] };
        let _ = writeln!(out, "{},{index},{}", g12(*lambda), g12(gap));
    }
    out
}

pub fn run(
    a: &Operator,
    b: &Operator,
    steps: usize,
    eps_step: f64,
    tol: &ToleranceConfig,
) -> Result<Output, CliError> {
    match homotopy_path_tol(a, b, steps, eps_step, tol)? {
        HomotopyOutcome::Connected(path) => {
            let mut out = Output::body(csv(&path));
            out.status.push(format!(
                "CONNECTED index={} max_step_gap={}",
                index_text(path.index()),
                g12(path.max_step_gap())
            ));
            Ok(out)
        }
        HomotopyOutcome::NoPath {
            index_a, index_b, ..
        } => Ok(Output {
            body: String::new(),
            status: vec![format!(
                "NO-PATH index_a={} index_b={}",
                index_text(index_a),
                index_text(index_b)
            )],
            note: None,
            exit_code: EXIT_NO_PATH,
        }),
    }
}
