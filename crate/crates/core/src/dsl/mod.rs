//! Text format for architecture descriptions (`.eea`) and Graphviz output.
//!
//! ```text
//! # comment
//! architecture Derating {
//!   controller.powertrain: PowertrainDC;
//! }
//!
//! ecu Inlet {
//!   role: specialized;
//!   pos: (4.0, 0.9, 0.8);
//!   os: [time_driven_rt];
//!   compute: 5
//! }
//! ```
//!
//! A document is a sequence of `kind id { key: value; ... }` blocks. Values
//! are identifiers, numbers, quoted strings, `(x, y, z)` tuples or
//! `[a, b]` lists. Unknown keys are rejected. The `architecture` block is
//! optional and carries the name, `central: <ecu>` and one
//! `controller.<domain>: <ecu>` entry per domain.

mod dot;
mod lexer;
mod parser;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;

pub use dot::{emit_dot, RenderOptions};
pub use serialize::serialize;

use crate::model::{self, Architecture, IntegrityViolation};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: &str, line: usize, column: usize) -> Self {
        SourceSpan { file: file.to_string(), line, column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: impl Into<String>, expected: Vec<String>) -> Self {
        let mut message = message.into();
        if message.is_empty() {
            message = "syntax error".into();
        }
        ParseError { span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// A parsed document together with the source position of every block.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub architecture: Architecture,
    pub spans: BTreeMap<String, SourceSpan>,
}

impl ParsedDocument {
    /// Structural violations, each paired with the span of the block that
    /// defines the offending entity when there is one.
    pub fn violations(&self) -> Vec<(Option<&SourceSpan>, IntegrityViolation)> {
        model::validate(&self.architecture).into_iter().map(|v| (self.spans.get(&v.entity), v)).collect()
    }
}

const DEFAULT_FILE: &str = "<input>";

pub fn parse(text: &str) -> Result<Architecture, ParseError> {
    parse_document(text, DEFAULT_FILE).map(|d| d.architecture)
}

pub fn parse_document(text: &str, file: &str) -> Result<ParsedDocument, ParseError> {
    parser::parse_document(text, file)
}

/// Parses raw bytes; invalid UTF-8 is reported as a parse error at the
/// offending position.
pub fn parse_bytes(bytes: &[u8], file: &str) -> Result<ParsedDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_document(text, file),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError::new(SourceSpan::new(file, line, column), "invalid UTF-8", vec!["UTF-8 text".into()]))
        }
    }
}

/// Parses and validates; syntax errors are fatal, violations are returned
/// alongside the architecture.
pub fn parse_and_validate(text: &str) -> Result<(Architecture, Vec<IntegrityViolation>), ParseError> {
    let arch = parse(text)?;
    let violations = model::validate(&arch);
    Ok((arch, violations))
}
