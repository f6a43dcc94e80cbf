//! IO, configuration, the verification suite and the command-line front
//! end on top of `rwlab-core`.

pub mod commands;
pub mod config;
pub mod harness;
pub mod mesh;

use rwlab_core::GeometryError;
use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const VERDICT_FAILURE: u8 = 1;
    pub const CONFIG_OR_DOMAIN: u8 = 2;
    pub const NUMERIC: u8 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    kind: &'a str,
    message: String,
    exit_code: u8,
}

impl RunError {
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Geometry(e) if e.is_domain_error() => "domain",
            RunError::Geometry(_) => "numeric",
            RunError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "numeric" => exit::NUMERIC,
            _ => exit::CONFIG_OR_DOMAIN,
        }
    }

    /// One-line JSON record `{"error": {kind, message, exit_code}}`.
    pub fn to_json(&self) -> String {
        let rec = ErrorRecord {
            kind: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        };
        serde_json::json!({ "error": rec }).to_string()
    }
}
