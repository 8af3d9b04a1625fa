//! Concrete syntax: lexer, recursive-descent parser and pretty-printer.
//!
//! Source files use `--` line comments and nestable `(* *)` block comments.
//! `pretty` output always reparses to the same tree.

mod lexer;
mod parser;
mod pretty;

pub use lexer::is_keyword;
pub use parser::{parse_expr, parse_program, parse_reftype, parse_state_pred, parse_trace_pred};
pub use pretty::{format_float, pretty};

use crate::ast::BinOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message} (found `{found}`)")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, found: &str, message: impl Into<String>) -> ParseError {
        ParseError { line, col, found: found.to_string(), message: message.into() }
    }
}

// Expression precedence levels, loosest first.
const LVL_OPEN: u8 = 0;
const LVL_FBY: u8 = 1;
const LVL_MODELS: u8 = 2;
const LVL_OR: u8 = 3;
const LVL_AND: u8 = 4;
const LVL_CMP: u8 = 5;
const LVL_ADD: u8 = 6;
const LVL_MUL: u8 = 7;
const LVL_UNARY: u8 = 8;
const LVL_APP: u8 = 9;
const LVL_ATOM: u8 = 10;

fn binop_level(op: BinOp) -> u8 {
    match op {
        BinOp::Or => LVL_OR,
        BinOp::And => LVL_AND,
        BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => LVL_CMP,
        BinOp::Add | BinOp::Sub => LVL_ADD,
        BinOp::Mul | BinOp::Div => LVL_MUL,
    }
}
