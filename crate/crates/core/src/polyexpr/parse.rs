use thiserror::Error;

use super::polynomial::{Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("invalid number '{text}' at position {pos}")]
    BadNumber { pos: usize, text: String },
    #[error("exponent at position {pos} must be a nonnegative integer")]
    BadExponent { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Unexpected { pos, .. }
            | ParseError::UnexpectedEnd { pos }
            | ParseError::BadNumber { pos, .. }
            | ParseError::BadExponent { pos } => *pos,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(c) => ParseError::Unexpected {
                pos: self.pos,
                found: format!("'{}'", *c as char),
            },
            None => ParseError::UnexpectedEnd { pos: self.pos },
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.exponent()?;
            base = base.pow(n);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'(')) {
            return Err(ParseError::BadExponent { pos: start });
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected());
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(ParseError::BadExponent { pos: start });
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        text.parse().map_err(|_| ParseError::BadExponent { pos: start })
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => self.variable(Var::X),
            Some(b'y') => self.variable(Var::Y),
            Some(b'z') => self.variable(Var::Z),
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.unexpected()),
        }
    }

    fn variable(&mut self, v: Var) -> Result<Polynomial, ParseError> {
        self.pos += 1;
        if let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' {
                return Err(self.unexpected());
            }
        }
        Ok(Polynomial::var(v))
    }

    fn number(&mut self) -> Result<Polynomial, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            digits(self);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Polynomial::constant)
            .ok_or_else(|| ParseError::BadNumber { pos: start, text: text.to_string() })
    }
}

/// Parses a polynomial expression in `x`, `y`, `z` with `+ - * ^`,
/// parentheses, unary minus and decimal literals.
pub fn parse_poly(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(out)
}
