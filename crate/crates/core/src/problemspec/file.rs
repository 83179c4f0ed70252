//! Problem files.
//!
//! ```text
//! # comment
//! f     = "-t*upp - 6*t^2 + 3*t - 6"
//! c1    = 0
//! c2    = 0
//! c3    = 0
//! exact = "t^2*(1.5 - t)"
//! M     = 9
//! L2    = 1
//! ```
//!
//! `f` and `exact` are quoted expressions. Numeric keys take a number or a
//! constant expression, quoted or not (`c3 = "sin(1)"`). `exact` may use only
//! `t`. `M` turns on the constants block; absent `L0`, `L1`, `L2` default to 0.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use super::expr::{parse_str, Expr, Var};
use super::ParseError;
use crate::solver::{Constants, Problem};

const KEYS: [&str; 9] = ["f", "c1", "c2", "c3", "exact", "M", "L0", "L1", "L2"];

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("missing key `{0}`")]
    MissingKey(&'static str),

    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey {
        key: String,
        line: usize,
        first: usize,
    },

    #[error("line {line}, column {column}: unknown key `{key}`")]
    UnknownKey {
        key: String,
        line: usize,
        column: usize,
    },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: {source}")]
    Expression {
        line: usize,
        column: usize,
        #[source]
        source: ParseError,
    },
}

impl ProblemFileError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ProblemFileError::Io { .. } | ProblemFileError::MissingKey(_) => None,
            ProblemFileError::DuplicateKey { line, .. }
            | ProblemFileError::UnknownKey { line, .. }
            | ProblemFileError::Syntax { line, .. }
            | ProblemFileError::Expression { line, .. } => Some(*line),
        }
    }
}

/// Parsed contents of a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub f: Expr,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub exact: Option<Expr>,
    pub constants: Option<Constants>,
}

struct Entry<'a> {
    line: usize,
    /// 1-based column of the first byte of `value`.
    column: usize,
    value: &'a str,
    quoted: bool,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemFileError> {
        let mut entries: HashMap<&'static str, Entry<'_>> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw);
            if content.trim().is_empty() {
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(ProblemFileError::Syntax {
                    line,
                    column: leading_ws(content) + 1,
                    message: "expected `key = value`".into(),
                });
            };
            let key = content[..eq].trim();
            let key_col = leading_ws(content) + 1;
            let Some(&key) = KEYS.iter().find(|k| **k == key) else {
                return Err(ProblemFileError::UnknownKey {
                    key: key.to_string(),
                    line,
                    column: key_col,
                });
            };
            let rest = &content[eq + 1..];
            let value_start = eq + 1 + leading_ws(rest);
            let value = rest.trim();
            let (value, column, quoted) = if let Some(inner) = value.strip_prefix('"') {
                let Some(inner) = inner.strip_suffix('"') else {
                    return Err(ProblemFileError::Syntax {
                        line,
                        column: value_start + 1,
                        message: "unterminated string".into(),
                    });
                };
                (inner, value_start + 2, true)
            } else {
                (value, value_start + 1, false)
            };
            if let Some(first) = entries.get(key) {
                return Err(ProblemFileError::DuplicateKey {
                    key: key.to_string(),
                    line,
                    first: first.line,
                });
            }
            entries.insert(
                key,
                Entry {
                    line,
                    column,
                    value,
                    quoted,
                },
            );
        }

        let f_entry = entries.get("f").ok_or(ProblemFileError::MissingKey("f"))?;
        let f = expression(f_entry, true)?;
        let number = |key: &'static str| -> Result<Option<f64>, ProblemFileError> {
            entries.get(key).map(constant).transpose()
        };
        let required = |key: &'static str| number(key)?.ok_or(ProblemFileError::MissingKey(key));
        let c1 = required("c1")?;
        let c2 = required("c2")?;
        let c3 = required("c3")?;

        let exact = match entries.get("exact") {
            None => None,
            Some(entry) => {
                let e = expression(entry, true)?;
                if [Var::U, Var::Up, Var::Upp].into_iter().any(|v| e.uses(v)) {
                    return Err(ProblemFileError::Syntax {
                        line: entry.line,
                        column: entry.column,
                        message: "`exact` may only depend on t".into(),
                    });
                }
                Some(e)
            }
        };

        let l = [number("L0")?, number("L1")?, number("L2")?];
        let constants = match number("M")? {
            Some(m) => Some(Constants {
                m,
                l0: l[0].unwrap_or(0.0),
                l1: l[1].unwrap_or(0.0),
                l2: l[2].unwrap_or(0.0),
            }),
            None if l.iter().any(Option::is_some) => return Err(ProblemFileError::MissingKey("M")),
            None => None,
        };

        Ok(ProblemFile {
            f,
            c1,
            c2,
            c3,
            exact,
            constants,
        })
    }

    pub fn into_problem(self) -> Problem {
        let f = Arc::new(self.f);
        let mut p = Problem::new(
            move |t, u, up, upp| f.eval(t, u, up, upp),
            self.c1,
            self.c2,
            self.c3,
        );
        if let Some(exact) = self.exact {
            p = p.with_exact(move |t| exact.eval(t, 0.0, 0.0, 0.0));
        }
        if let Some(c) = self.constants {
            p = p.with_constants(c);
        }
        p
    }
}

fn expression(entry: &Entry<'_>, must_quote: bool) -> Result<Expr, ProblemFileError> {
    if must_quote && !entry.quoted {
        return Err(ProblemFileError::Syntax {
            line: entry.line,
            column: entry.column,
            message: "expression values must be quoted".into(),
        });
    }
    parse_str(entry.value).map_err(|source| ProblemFileError::Expression {
        line: entry.line,
        column: entry.column + source.position(),
        source,
    })
}

fn constant(entry: &Entry<'_>) -> Result<f64, ProblemFileError> {
    let e = expression(entry, false)?;
    if !e.is_constant() {
        return Err(ProblemFileError::Syntax {
            line: entry.line,
            column: entry.column,
            message: "expected a constant".into(),
        });
    }
    let v = e.eval(0.0, 0.0, 0.0, 0.0);
    if !v.is_finite() {
        return Err(ProblemFileError::Syntax {
            line: entry.line,
            column: entry.column,
            message: format!("constant evaluates to {v}"),
        });
    }
    Ok(v)
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_string = !in_string,
            '#' if !in_string => return &line[..i],
            _ => {}
        }
    }
    line
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

pub fn read_problem_str(text: &str) -> Result<Problem, ProblemFileError> {
    Ok(ProblemFile::parse(text)?.into_problem())
}

pub fn read_problem_file(path: impl AsRef<Path>) -> Result<Problem, ProblemFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ProblemFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_problem_str(&text)
}
