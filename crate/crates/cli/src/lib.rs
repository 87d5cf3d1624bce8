//! Command-line surface for `banach_reduce`: expressions for functions and
//! domains, versioned job manifests, and a runner that writes summaries,
//! certificates and SVG renders.

pub mod expr;
pub mod manifest;
pub mod run;

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub use manifest::{Command, JobManifest};
pub use run::{run, Outcome, EXIT_ERROR, EXIT_OBSTRUCTION, EXIT_OK};

/// An error with a stable code, printed as JSON on stderr.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{code}: {message}")]
pub struct CliError {
    #[serde(rename = "error")]
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CliError {
    pub fn new(code: &str, message: String) -> Self {
        CliError {
            code: code.to_string(),
            message,
            detail: None,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new("io", format!("{}: {e}", path.display()))
    }

    pub fn syntax(e: expr::SyntaxError) -> Self {
        CliError {
            code: "syntax".into(),
            message: e.to_string(),
            detail: Some(serde_json::json!({"offset": e.offset, "expected": e.expected})),
        }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        Self::new("serialization", e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.code))
    }
}

impl From<banach_reduce::Error> for CliError {
    fn from(e: banach_reduce::Error) -> Self {
        let detail = match &e {
            banach_reduce::Error::Scope {
                decision: Some(d), ..
            } => serde_json::to_value(d)
                .ok()
                .map(|d| serde_json::json!({"hole_condition": d})),
            _ => None,
        };
        CliError {
            code: e.code().to_string(),
            message: e.to_string(),
            detail,
        }
    }
}
