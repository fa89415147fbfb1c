//! Text grammar for polynomials and rational functions in `n`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <implicit>) unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' (int | '{' int '}' | '(' int ')'))?
//! atom  := int | 'n' | '(' expr ')' | '{' expr '}'
//! ```
//!
//! Whitespace is ignored and the Unicode minus sign is accepted.

use num_bigint::BigInt;

use super::factored::Factored;
use super::poly::IntPoly;
use super::ratfn::RatFn;
use super::{ExactError, Rational};

pub fn parse_factored(input: &str) -> Result<Factored, ExactError> {
    let mut p = Parser::new(input);
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

pub fn parse_ratfn(input: &str) -> Result<RatFn, ExactError> {
    parse_factored(input).map(|f| f.value())
}

pub fn parse_poly(input: &str) -> Result<IntPoly, ExactError> {
    let f = parse_ratfn(input)?;
    f.as_poly().cloned().ok_or_else(|| ExactError::Parse {
        input: input.to_string(),
        pos: 0,
        msg: "expected an integer polynomial".into(),
    })
}

pub fn parse_rational(input: &str) -> Result<Rational, ExactError> {
    let f = parse_ratfn(input)?;
    f.as_constant().ok_or_else(|| ExactError::Parse {
        input: input.to_string(),
        pos: 0,
        msg: "expected a constant".into(),
    })
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        let chars = input
            .char_indices()
            .map(|(i, c)| (i, if c == '\u{2212}' { '-' } else { c }))
            .collect();
        Self {
            input,
            chars,
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> ExactError {
        let pos = self
            .chars
            .get(self.pos)
            .map_or(self.input.len(), |&(i, _)| i);
        ExactError::Parse {
            input: self.input.to_string(),
            pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Factored, ExactError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Factored, ExactError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*' | '\u{b7}' | '\u{d7}') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| self.error("division by zero"))?;
                }
                Some(c) if c.is_ascii_digit() || c == 'n' || c == '(' || c == '{' => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Factored, ExactError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Factored, ExactError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let close = if self.eat('{') {
            Some('}')
        } else if self.eat('(') {
            Some(')')
        } else {
            None
        };
        let e = self.integer()?;
        if let Some(c) = close {
            if !self.eat(c) {
                return Err(self.error("unclosed exponent"));
            }
        }
        let e: u32 = e
            .try_into()
            .map_err(|_| self.error("exponent must be a small non-negative integer"))?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Factored, ExactError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Factored::from_int(self.integer()?)),
            Some('n') => {
                self.pos += 1;
                Ok(Factored::from_poly(IntPoly::var()))
            }
            Some(open @ ('(' | '{')) => {
                self.pos += 1;
                let inner = self.expr()?;
                let close = if open == '(' { ')' } else { '}' };
                if !self.eat(close) {
                    return Err(self.error("unbalanced parenthesis"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }
}
