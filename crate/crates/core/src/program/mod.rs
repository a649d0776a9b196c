//! Front end for the mini-C verification language: declarations and
//! assumptions, at most one `while` loop, then assertions.

pub mod analysis;
pub mod ast;
pub mod emit;
mod lexer;
pub mod parser;

use thiserror::Error;

pub use analysis::{
    analyze_intervals, analyze_properties, monotonicity_check, prelude_domains, AnalysisError, DomainMap, Monotonicity,
    Properties,
};
pub use ast::*;
pub use emit::emit_source;
pub use parser::parse_program;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    pub(crate) fn at(span: Span, message: impl Into<String>) -> ParseError {
        match span {
            Span::Source { line, col } => ParseError::new(line, col, message),
            Span::Synthetic => ParseError::new(0, 0, message),
        }
    }
}
