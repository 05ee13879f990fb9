//! Diagnostics. All phases (lexing, parsing, semantic analysis) report
//! problems as [`Diagnostic`] values instead of aborting, so one pass over a
//! file surfaces every issue it contains.
//!
//! Each diagnostic carries a stable short code. The semantic codes
//! (`E-UNDEF-GATE`, `E-REDECLARE`, ...) are a machine-readable contract for
//! external tooling and must not change between releases.

use crate::span::SourceSpan;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => write!(f, "warning"),
            Severity::Error => write!(f, "error"),
        }
    }
}

/// Stable diagnostic codes.
pub mod codes {
    // Lexical and syntactic.
    pub const E_LEX: &str = "E-LEX";
    pub const E_PARSE: &str = "E-PARSE";
    pub const E_VERSION: &str = "E-VERSION";
    pub const E_UNSUPPORTED: &str = "E-UNSUPPORTED";
    pub const W_VERSION: &str = "W-VERSION";
    pub const W_INCLUDE: &str = "W-INCLUDE";

    // Semantic. External contract; do not rename.
    pub const E_UNDEF_GATE: &str = "E-UNDEF-GATE";
    pub const E_GATE_REDEF: &str = "E-GATE-REDEF";
    pub const E_PARAM_ARITY: &str = "E-PARAM-ARITY";
    pub const E_QUBIT_ARITY: &str = "E-QUBIT-ARITY";
    pub const E_UNDEF_QUBIT: &str = "E-UNDEF-QUBIT";
    pub const E_DUP_QUBIT: &str = "E-DUP-QUBIT";
    pub const E_REDECLARE: &str = "E-REDECLARE";
    pub const E_CONST_WRITE: &str = "E-CONST-WRITE";
    pub const E_TYPE_MISMATCH: &str = "E-TYPE-MISMATCH";
    pub const E_WIDTH_MISMATCH: &str = "E-WIDTH-MISMATCH";
    pub const E_UNDEF_SYMBOL: &str = "E-UNDEF-SYMBOL";
    pub const E_NAME_CLASH: &str = "E-NAME-CLASH";
}

/// A single problem report: severity, stable code, message, and the source
/// span it points at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Render in the `path:line:col: severity[CODE]: message` contract format.
    pub fn render(&self, path: &str) -> String {
        format!(
            "{}:{}:{}: {}[{}]: {}",
            path, self.span.start_line, self.span.start_col, self.severity, self.code, self.message
        )
    }
}

/// True if any diagnostic in the slice has error severity.
pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_format() {
        let d = Diagnostic::error(
            codes::E_UNDEF_GATE,
            "gate 'foo' is not defined",
            SourceSpan::new(10, 13, 2, 5, 2, 8),
        );
        assert_eq!(
            d.render("bell.qasm"),
            "bell.qasm:2:5: error[E-UNDEF-GATE]: gate 'foo' is not defined"
        );
    }
}
