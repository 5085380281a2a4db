//! The `.eqs` text format: parser and canonical printer.

mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use parser::parse;
pub use printer::{print_domain, print_equation, print_expr, print_system};

/// A diagnostic with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}
