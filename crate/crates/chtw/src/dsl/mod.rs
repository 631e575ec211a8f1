//! The textual model format: parsing, canonical serialization, and CSV
//! field data.
//!
//! A model is a sequence of line-oriented block declarations:
//!
//! ```text
//! space <id> { axis <name> min <r> max <r> cells <n>; ... }   # no axes: point space
//! cbrane <id> on <space> { init <field>; }
//! tbrane <id> on <space> { rate <field>; }
//! hcarrier <id> <cbrane> -> <tbrane> { kind normal|blocking|associative; threshold <field>; }
//! wcarrier <id> <tbrane> -> <cbrane> { mode pointwise|kernel; gain <field> | kernel <kernel>; }
//! ```
//!
//! Field literals:
//!
//! ```text
//! const <r>
//! box [<a>,<b>] axis <name> inside <r> outside <r>
//! csv "<path>"
//! values [v, v, ...]
//! schedule { <k>: <field>, ... }        # piecewise-constant in the step index
//! ```
//!
//! Kernel literals: `uniform <r>`, `csv "<path>"`, `values [...]` (row-major,
//! |source| x |target|), or a `schedule { ... }` of those. Comments run from
//! `#` to end of line; files are UTF-8. Relative CSV paths resolve against
//! the model file's directory (or a caller-supplied base).
//!
//! Parsing never panics on malformed input: every problem is returned as a
//! [`ParseError`] with a 1-based line and column.

mod ast;
mod csv;
mod lexer;
mod lower;
mod parser;
mod serialize;

use std::fmt;
use std::path::Path;

pub use csv::{load_field_csv, load_kernel_csv, CsvError};
pub use serialize::serialize;

use crate::model::{CHTWSystem, DiagCode, Diagnostic};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Loc {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub code: DiagCode,
    pub message: String,
}

impl ParseError {
    fn new(loc: Loc, code: DiagCode, message: impl Into<String>) -> Self {
        Self {
            line: loc.line,
            col: loc.col,
            code,
            message: message.into(),
        }
    }

    /// Converts to a [`Diagnostic`] with `file:line:col` as the location.
    pub fn to_diagnostic(&self, file: &str) -> Diagnostic {
        Diagnostic::error(
            self.code,
            self.message.clone(),
            format!("{file}:{}:{}", self.line, self.col),
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.code, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed model plus what a tool needs to work with the source: the text
/// itself and the location of every declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub source: String,
    pub system: CHTWSystem,
    /// (declared id, location), in source order.
    pub declarations: Vec<(String, Loc)>,
}

/// Parses model text with an optional base directory for relative CSV paths.
/// On failure, all syntax and reference errors are returned, sorted by
/// source position.
pub fn parse_document(
    text: &str,
    base_dir: Option<&Path>,
) -> Result<ModelDocument, Vec<ParseError>> {
    let lexed = lexer::lex(text);
    let mut errors = lexed.errors;
    let ast = parser::parse_ast(&lexed.tokens, lexed.end, &mut errors);
    let (system, lower_errors) = lower::lower(&ast, base_dir);
    errors.extend(lower_errors);
    if errors.is_empty() {
        let mut declarations: Vec<(String, Loc)> = Vec::new();
        for d in &ast.spaces {
            declarations.push((d.id.text.clone(), d.id.loc));
        }
        for d in &ast.cbranes {
            declarations.push((d.id.text.clone(), d.id.loc));
        }
        for d in &ast.tbranes {
            declarations.push((d.id.text.clone(), d.id.loc));
        }
        for d in &ast.hcarriers {
            declarations.push((d.id.text.clone(), d.id.loc));
        }
        for d in &ast.wcarriers {
            declarations.push((d.id.text.clone(), d.id.loc));
        }
        declarations.sort_by_key(|(_, loc)| (loc.line, loc.col));
        Ok(ModelDocument {
            source: text.to_string(),
            system,
            declarations,
        })
    } else {
        errors.sort_by_key(|e| (e.line, e.col));
        Err(errors)
    }
}

/// Parses model text. Relative CSV paths resolve against the working
/// directory; prefer [`parse_file`] or [`parse_with_base`] for models that
/// load CSV data.
pub fn parse(text: &str) -> Result<CHTWSystem, Vec<ParseError>> {
    parse_document(text, None).map(|doc| doc.system)
}

/// Parses model text, resolving relative CSV paths against `base_dir`.
pub fn parse_with_base(text: &str, base_dir: &Path) -> Result<CHTWSystem, Vec<ParseError>> {
    parse_document(text, Some(base_dir)).map(|doc| doc.system)
}

#[derive(Debug, Error)]
pub enum ParseFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{} parse error(s) in {path}", errors.len())]
    Parse {
        path: String,
        errors: Vec<ParseError>,
    },
}

use thiserror::Error;

/// Reads and parses a model file; relative CSV paths resolve against the
/// file's directory.
pub fn parse_file(path: &Path) -> Result<CHTWSystem, ParseFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_document(&text, path.parent()).map(|doc| doc.system).map_err(|errors| {
        ParseFileError::Parse {
            path: path.display().to_string(),
            errors,
        }
    })
}
