//! Subcommand implementations. Each returns its table and status lines;
//! writing them out is left to the caller.

pub mod density;
pub mod fuglede;
pub mod homotopy;
pub mod metric;
pub mod suite;

use crate::error::EXIT_OK;

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    /// CSV or JSON, written to `--out` or stdout.
    pub body: String,
    /// Human-readable lines for stderr.
    pub status: Vec<String>,
    /// JSON written beside `--out` as `<out>.note.json`.
    pub note: Option<String>,
    pub exit_code: i32,
}

impl Output {
    pub fn body(body: String) -> Self {
        Self {
            body,
            status: Vec::new(),
            note: None,
            exit_code: EXIT_OK,
        }
    }
}
