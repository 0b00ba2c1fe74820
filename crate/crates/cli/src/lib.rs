//! Command-line experiments on the gap, Riesz and Cayley metrics.
//!
//! Each subcommand reads a [`config::Settings`] (a JSON file, inline flags,
//! or both) and produces an [`commands::Output`]: a CSV or JSON body plus
//! status lines, mapped onto exit codes by [`error::CliError`].

pub mod commands;
pub mod config;
pub mod descriptor;
pub mod ensemble;
pub mod error;
pub mod format;

use commands::{density, fuglede, homotopy, metric, suite, Output};
use config::{Command, Settings};
use error::{CliError, EXIT_FAILURE};

/// Runs `cmd` on fully merged settings.
pub fn execute(cmd: Command, s: &Settings) -> Result<Output, CliError> {
    s.check_fields(cmd)?;
    match cmd {
        Command::Fuglede => Ok(Output::body(fuglede::csv(&fuglede::rows(s.n_max()?)?))),
        Command::Density => {
            let tol = s.tolerance()?;
            let t = s.operator("operator")?;
            let rows = density::rows(&t, s.n_max()?, &tol)?;
            let note = serde_json::to_string(&density::note(&t, &rows, &tol)?)
                .expect("plain data");
            let mut out = Output::body(density::csv(&rows));
            out.status.push(note.clone());
            out.note = Some(note + "\n");
            Ok(out)
        }
        Command::Suite => {
            let tol = s.tolerance()?;
            let report = suite::run(s.seed(), s.trials()?, s.dim_max()?, &tol);
            let mut out = Output::body(report.to_json());
            if !report.passed {
                out.exit_code = EXIT_FAILURE;
                out.status.push(format!(
                    "suite: {} property violation(s)",
                    report.failures.len()
                ));
            }
            Ok(out)
        }
        Command::Homotopy => {
            let tol = s.tolerance()?;
            let (a, b) = (s.operator("a")?, s.operator("b")?);
            homotopy::run(&a, &b, s.steps()?, s.eps_step()?, &tol)
        }
        Command::Metric => {
            let tol = s.tolerance()?;
            let (a, b) = (s.operator("a")?, s.operator("b")?);
            let m = metric::run(&a, &b, s.which()?, &tol)?;
            Ok(Output::body(metric::json(&m)))
        }
    }
}
