//! Expression language: parsing, evaluation against a symbol table,
//! canonical printing and scenario documents.

mod ast;
mod eval;
mod parser;
mod pretty;
mod scenario;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{HybridExpr, SymbolTable};

pub use ast::{Ast, AstKind, Builtin, Span};
pub use parser::parse_ast;
pub use pretty::{pretty, pretty_linear_arg};
pub use scenario::{
    parse_scenario, CheckArgs, CheckSpec, Expectation, LeibnizOrder, NamedExpr, Scenario, ScenarioError,
};

/// Named expressions visible to the parser (scenario definitions, REPL `:let`).
pub type Bindings = BTreeMap<String, HybridExpr>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {position} (expected {expected})")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>, expected: impl Into<String>) -> Self {
        ParseError { position, message: message.into(), expected: expected.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("validation error at byte {position}: {message}")]
    Validation { position: usize, message: String },
}

impl DslError {
    pub fn position(&self) -> usize {
        match self {
            DslError::Parse(e) => e.position,
            DslError::Validation { position, .. } => *position,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, DslError::Parse(_))
    }
}

/// Parses `text` and returns its canonical form.
pub fn parse(text: &str, table: &Arc<SymbolTable>) -> Result<HybridExpr, DslError> {
    parse_with(text, table, &Bindings::new())
}

pub fn parse_with(text: &str, table: &Arc<SymbolTable>, bindings: &Bindings) -> Result<HybridExpr, DslError> {
    let ast = parse_ast(text)?;
    eval::Evaluator::new(table, bindings, false).eval(&ast)
}

/// Parses `text` keeping products as written: sums and products are
/// expanded but words are not normal ordered. Builtin calls and named
/// bindings contribute their canonical values.
pub fn parse_raw(text: &str, table: &Arc<SymbolTable>, bindings: &Bindings) -> Result<HybridExpr, DslError> {
    let ast = parse_ast(text)?;
    eval::Evaluator::new(table, bindings, true).eval(&ast)
}
