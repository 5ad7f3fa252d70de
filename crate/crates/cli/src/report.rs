use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Quadrature,
    Fitted,
}

/// A value with its provenance tag.
#[derive(Debug, Clone, Serialize)]
pub struct Tagged<T> {
    pub provenance: Provenance,
    pub value: T,
}

impl<T> Tagged<T> {
    pub fn exact(value: T) -> Self {
        Tagged {
            provenance: Provenance::Exact,
            value,
        }
    }

    pub fn quadrature(value: T) -> Self {
        Tagged {
            provenance: Provenance::Quadrature,
            value,
        }
    }

    pub fn fitted(value: T) -> Self {
        Tagged {
            provenance: Provenance::Fitted,
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub message: String,
}

/// The JSON report written by every command. Wall time goes to stderr
/// only, so identical inputs give byte-identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<T: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: serde_json::Value,
    pub results: T,
    pub summary: Summary,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(
        command: &'static str,
        inputs: serde_json::Value,
        results: T,
        summary: Summary,
    ) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            results,
            summary,
        }
    }
}
