//! TPTP reading and writing for the TFF1, TFF0 and FOF dialects.
//!
//! Explicit type arguments are written as leading arguments of a symbol
//! application, so `cons(A, X, Xs)` applies `cons` at type `A`. Conjectures are
//! negated on input and merged into one negated conjecture.

mod alpha;
mod lexer;
mod parser;
mod printer;

pub use alpha::{alpha_canonical, alpha_eq, problems_alpha_eq};
pub use parser::{parse_type, parse_with};
pub use printer::{print, print_as, PrintError};

use crate::syntax::Problem;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dialect {
    Tff1,
    Tff0,
    Fof,
    #[default]
    Auto,
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Dialect, String> {
        match s.to_ascii_lowercase().as_str() {
            "tff1" => Ok(Dialect::Tff1),
            "tff0" | "tff" => Ok(Dialect::Tff0),
            "fof" => Ok(Dialect::Fof),
            "auto" => Ok(Dialect::Auto),
            _ => Err(format!("unknown dialect `{s}` (expected tff1, tff0, fof or auto)")),
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Tff1 => "tff1",
            Dialect::Tff0 => "tff0",
            Dialect::Fof => "fof",
            Dialect::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    pub dialect: Dialect,
    /// Accept `$$` names, as found in our own output.
    pub allow_reserved: bool,
    /// Directory `include` directives are resolved against.
    pub include_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Unsupported,
    Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based position; 0 when the error is not tied to one.
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, kind: ParseErrorKind::Syntax, message: message.into() }
    }

    pub fn unsupported(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, kind: ParseErrorKind::Unsupported, message: message.into() }
    }

    pub fn type_error(message: impl Into<String>) -> ParseError {
        ParseError { line: 0, col: 0, kind: ParseErrorKind::Type, message: message.into() }
    }

    /// Fills in a position if the error has none.
    pub fn at(mut self, line: usize, col: usize) -> ParseError {
        if self.line == 0 {
            self.line = line;
            self.col = col;
        }
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: ", self.line, self.col)?;
        }
        match self.kind {
            ParseErrorKind::Syntax => write!(f, "syntax error: {}", self.message),
            ParseErrorKind::Unsupported => write!(f, "unsupported construct: {}", self.message),
            ParseErrorKind::Type => write!(f, "type error: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Source information about one input formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedFormula {
    pub name: String,
    pub role: String,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub problem: Problem,
    pub annotated: Vec<AnnotatedFormula>,
}

/// Parses TPTP text with the dialect detected from its statements.
pub fn parse(text: &str) -> Result<Problem, ParseError> {
    parse_with(text, &ParseOptions::default()).map(|p| p.problem)
}

/// Parses text that may contain `$$` names, such as printed encodings.
pub fn parse_output(text: &str) -> Result<Problem, ParseError> {
    let opts = ParseOptions { allow_reserved: true, ..ParseOptions::default() };
    parse_with(text, &opts).map(|p| p.problem)
}

/// Parses a file; includes resolve against its directory unless set.
pub fn parse_file(path: &Path, opts: &ParseOptions) -> Result<Parsed, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::syntax(0, 0, format!("cannot read `{}`: {e}", path.display())))?;
    let mut opts = opts.clone();
    if opts.include_dir.is_none() {
        opts.include_dir = Some(path.parent().map(Path::to_path_buf).unwrap_or_default());
    }
    parse_with(&text, &opts)
}
