use std::fmt;

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    U,
    Up,
    Upp,
}

impl Var {
    fn from_name(name: &str) -> Option<Var> {
        Some(match name {
            "t" | "x" => Var::T,
            "u" => Var::U,
            "up" | "u'" => Var::Up,
            "upp" | "u''" => Var::Upp,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
            Var::Up => "up",
            Var::Upp => "upp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    /// Evaluates at `(t, u, u', u'')`. Domain errors surface as NaN or infinity.
    ///
    /// Integer exponents up to 64 in magnitude go through `powi`, matching
    /// hand-written `x.powi(n)`.
    pub fn eval(&self, t: f64, u: f64, up: f64, upp: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => match v {
                Var::T => t,
                Var::U => u,
                Var::Up => up,
                Var::Upp => upp,
            },
            Expr::Neg(e) => -e.eval(t, u, up, upp),
            Expr::Binary(op, l, r) => {
                let a = l.eval(t, u, up, upp);
                let b = r.eval(t, u, up, upp);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => {
                        if b.fract() == 0.0 && b.abs() <= 64.0 {
                            a.powi(b as i32)
                        } else {
                            a.powf(b)
                        }
                    }
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(t, u, up, upp)),
        }
    }

    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses(var),
            Expr::Binary(_, l, r) => l.uses(var) || r.uses(var),
        }
    }

    pub fn is_constant(&self) -> bool {
        [Var::T, Var::U, Var::Up, Var::Upp]
            .into_iter()
            .all(|v| !self.uses(v))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Const(c) if c.is_sign_negative() || !c.is_finite() => 3,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

struct Child<'a>(&'a Expr, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_nan() => f.write_str("(0/0)"),
            Expr::Const(c) if c.is_infinite() && *c > 0.0 => f.write_str("(1/0)"),
            Expr::Const(c) if c.is_infinite() => f.write_str("(-1/0)"),
            Expr::Const(c) if c.is_sign_negative() => write!(f, "-{}", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(e) => write!(f, "-{}", Child(e, 3)),
            Expr::Binary(op, l, r) => {
                let (lp, rp) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                write!(f, "{} {} {}", Child(l, lp), op.symbol(), Child(r, rp))
            }
            Expr::Call(func, e) => write!(f, "{}({})", func.name(), e),
        }
    }
}

/// Tokenizes and parses `src`.
pub fn parse_str(src: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(src)?;
    Parser::new(&tokens, src.len()).run()
}

/// Parses a token stream produced by [`tokenize`].
pub fn parse(tokens: &[Token]) -> Result<Expr, ParseError> {
    let end = tokens
        .last()
        .map(|t| t.position + t.lexeme.len())
        .unwrap_or(0);
    Parser::new(tokens, end).run()
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], end: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            end,
        }
    }

    fn run(mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(tok) => Err(ParseError::TrailingInput {
                position: tok.position,
            }),
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError::UnexpectedToken {
                position: tok.position,
                found: format!("`{}`", tok.lexeme),
                expected,
            },
            None => ParseError::UnexpectedToken {
                position: self.end,
                found: "end of input".into(),
                expected,
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &'static str) -> Result<(), ParseError> {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(vec![what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(TokenKind::Caret) {
            self.pos += 1;
            return Ok(Expr::binary(BinOp::Pow, base, self.factor()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: [&str; 4] = ["number", "variable", "function call", "`(`"];
        let Some(tok) = self.peek() else {
            return Err(self.unexpected(ATOM.to_vec()));
        };
        match tok.kind {
            TokenKind::Number => {
                self.bump();
                let value: f64 = tok
                    .lexeme
                    .parse()
                    .map_err(|_| ParseError::MalformedNumber {
                        position: tok.position,
                    })?;
                Ok(Expr::Const(value))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Ident => {
                self.bump();
                let is_call = self.peek_kind() == Some(TokenKind::LParen);
                if let Some(func) = Func::from_name(&tok.lexeme) {
                    if !is_call {
                        return Err(self.unexpected(vec!["`(`"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if is_call {
                    return Err(ParseError::UnknownFunction {
                        name: tok.lexeme.clone(),
                        position: tok.position,
                    });
                }
                Var::from_name(&tok.lexeme).map(Expr::Var).ok_or_else(|| {
                    ParseError::UnknownVariable {
                        name: tok.lexeme.clone(),
                        position: tok.position,
                    }
                })
            }
            _ => Err(self.unexpected(ATOM.to_vec())),
        }
    }
}
