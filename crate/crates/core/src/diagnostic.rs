//! Coded findings shared by every stage: parser, model builder, validator
//! and the query operations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Position of a token or declaration in a source file. Line and column are
/// 1-based and counted in Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize, length: usize) -> Self {
        Self {
            file: file.into(),
            line,
            column,
            length,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

/// Ordered so that errors sort before warnings and warnings before infos.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! codes {
    ($($variant:ident => $text:literal, $summary:literal;)*) => {
        /// The closed catalog of diagnostic codes.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Code {
            $($variant,)*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $text,)*
                }
            }

            /// One-line description of what the code reports.
            pub fn summary(self) -> &'static str {
                match self {
                    $(Code::$variant => $summary,)*
                }
            }
        }

        impl FromStr for Code {
            type Err = ();

            fn from_str(s: &str) -> Result<Self, ()> {
                match s {
                    $($text => Ok(Code::$variant),)*
                    _ => Err(()),
                }
            }
        }
    };
}

codes! {
    P001 => "P001", "lexical error";
    P002 => "P002", "syntax error";
    P003 => "P003", "duplicate declaration in the same scope";
    E001 => "E001", "duplicate element id";
    E002 => "E002", "unresolved reference";
    E003 => "E003", "illegal link kind for endpoint kinds";
    E004 => "E004", "malformed element";
    E005 => "E005", "containment cycle or double parent";
    E101 => "E101", "unknown element";
    E102 => "E102", "malformed interchange document";
    E103 => "E103", "unknown kind name";
    E104 => "E104", "invalid rule configuration";
    E105 => "E105", "report subject has the wrong kind";
    E106 => "E106", "format not available for this report";
    E107 => "E107", "model cannot be expressed in the source language";
    E110 => "E110", "view function covers an automated function of another service";
    W101 => "W101", "automated function not covered by its service's dialogs";
    W102 => "W102", "view function not realized by any module";
    W103 => "W103", "module not realized by any method";
    W104 => "W104", "module realizes no view function";
    W105 => "W105", "method realizes no module";
    W106 => "W106", "dialog has no view functions";
    W107 => "W107", "operational service has no dialogs";
    W108 => "W108", "operational service implements no business operation";
    W109 => "W109", "class has no methods";
    I201 => "I201", "business operation has no operational service";
    I202 => "I202", "view function leaves its coverage implicit";
}

impl Code {
    /// Severity implied by the code's leading letter.
    pub fn default_severity(self) -> Severity {
        match self.as_str().as_bytes()[0] {
            b'W' => Severity::Warning,
            b'I' => Severity::Info,
            _ => Severity::Error,
        }
    }

    /// Error-class codes (parse and build failures) can never be demoted.
    pub fn is_error_class(self) -> bool {
        matches!(self.as_str().as_bytes()[0], b'E' | b'P')
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub element: Option<String>,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            severity: code.default_severity(),
            code,
            message: message.into(),
            element: None,
            span: None,
        }
    }

    pub fn with_element(mut self, id: impl Into<String>) -> Self {
        self.element = Some(id.into());
        self
    }

    pub fn with_span(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }

    pub fn unknown_element(id: &str) -> Self {
        Diagnostic::new(Code::E101, format!("unknown element {id}")).with_element(id)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Total order used wherever diagnostics are reported.
    pub fn sort_key(&self) -> (Severity, Code, &str, Option<&SourceSpan>, &str) {
        (
            self.severity,
            self.code,
            self.element.as_deref().unwrap_or(""),
            self.span.as_ref(),
            &self.message,
        )
    }
}

/// Renders as `SEVERITY CODE file:line:col message`; `-` stands in for a
/// missing location.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.severity, self.code)?;
        match &self.span {
            Some(span) => write!(f, "{span}")?,
            None => f.write_str("-")?,
        }
        write!(f, " {}", self.message)
    }
}

impl std::error::Error for Diagnostic {}

pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
