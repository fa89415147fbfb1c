use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// One finding from catalog validation or a consistency check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagnostic {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<u32>,
    pub severity: Severity,
    /// Short machine-readable kind, e.g. `degree-consistency`.
    pub code: String,
    /// Catalog field the finding refers to.
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(
        family: Option<u32>,
        code: &str,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            family,
            severity: Severity::Error,
            code: code.to_string(),
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn warning(
        family: Option<u32>,
        code: &str,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(family, code, field, message)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.family {
            Some(no) => write!(f, "{sev}[{}] family {no} {}: {}", self.code, self.field, self.message),
            None => write!(f, "{sev}[{}] {}: {}", self.code, self.field, self.message),
        }
    }
}
