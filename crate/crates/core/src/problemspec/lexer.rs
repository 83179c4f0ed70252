use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset into the source.
    pub position: usize,
}

/// Splits `src` into tokens, skipping whitespace.
///
/// Identifiers are `[A-Za-z][A-Za-z0-9']*`, which lets `u'` and `u''` lex as
/// single identifiers. Numbers are decimal literals with optional fraction and
/// exponent; a sign is never part of a number.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = match c {
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'/' => TokenKind::Slash,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b',' => TokenKind::Comma,
            b'0'..=b'9' | b'.' => {
                pos = scan_number(bytes, pos)?;
                tokens.push(Token {
                    kind: TokenKind::Number,
                    lexeme: src[start..pos].to_string(),
                    position: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                pos += 1;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'\'')
                {
                    pos += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident,
                    lexeme: src[start..pos].to_string(),
                    position: start,
                });
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError::UnknownCharacter {
                    ch,
                    position: start,
                });
            }
        };
        pos += 1;
        tokens.push(Token {
            kind,
            lexeme: src[start..pos].to_string(),
            position: start,
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], start: usize) -> Result<usize, ParseError> {
    let malformed = Err(ParseError::MalformedNumber { position: start });
    let digits = |mut p: usize| {
        let from = p;
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        (p, p - from)
    };
    let (mut pos, int_digits) = digits(start);
    let mut frac_digits = 0;
    if pos < bytes.len() && bytes[pos] == b'.' {
        let (p, n) = digits(pos + 1);
        pos = p;
        frac_digits = n;
        if n == 0 {
            return malformed;
        }
    }
    if int_digits + frac_digits == 0 {
        return malformed;
    }
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        let mut p = pos + 1;
        if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
            p += 1;
        }
        let (p, n) = digits(p);
        if n == 0 {
            return malformed;
        }
        pos = p;
    }
    // "2t" or "1.5.2" would otherwise split silently
    if pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'.') {
        return malformed;
    }
    Ok(pos)
}
