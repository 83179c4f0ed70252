//! Text form of a problem: a small expression language for the right-hand
//! side and a line-oriented `key = value` problem file.
//!
//! Grammar (`^` binds tighter than unary minus and associates to the right):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are `t` (alias `x`), `u`, `up` (alias `u'`) and `upp` (alias
//! `u''`). Functions are `exp`, `sin`, `cos`, `log`, `sqrt` and `abs`.

mod expr;
mod file;
mod lexer;

pub use expr::{parse, parse_str, BinOp, Expr, Func, Var};
pub use file::{read_problem_file, read_problem_str, ProblemFile, ProblemFileError};
pub use lexer::{tokenize, Token, TokenKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unknown character {ch:?} at offset {position}")]
    UnknownCharacter { ch: char, position: usize },

    #[error("malformed number at offset {position}")]
    MalformedNumber { position: usize },

    #[error("unexpected {found} at offset {position}, expected {}", .expected.join(" or "))]
    UnexpectedToken {
        position: usize,
        found: String,
        expected: Vec<&'static str>,
    },

    #[error("unknown function `{name}` at offset {position}")]
    UnknownFunction { name: String, position: usize },

    #[error("unknown variable `{name}` at offset {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("trailing input at offset {position}")]
    TrailingInput { position: usize },
}

impl ParseError {
    /// Byte offset of the error within the parsed text.
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownCharacter { position, .. }
            | ParseError::MalformedNumber { position }
            | ParseError::UnexpectedToken { position, .. }
            | ParseError::UnknownFunction { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::TrailingInput { position } => *position,
        }
    }
}
