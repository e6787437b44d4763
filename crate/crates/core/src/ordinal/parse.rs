//! Text grammar:
//!
//! ```text
//! ordinal := "0" | term ("+" term)*
//! term    := "w" ["^" exp] ["*" nat] | nat
//! exp     := nat | "(" ordinal ")"
//! nat     := [1-9][0-9]*
//! ```

use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use super::{Ordinal, OrdinalError};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> OrdinalError {
        OrdinalError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<BigUint, OrdinalError> {
        let start = self.pos;
        match self.peek() {
            Some(b'1'..=b'9') => {}
            Some(b'0') => return Err(self.error("natural numbers may not start with 0")),
            _ => return Err(self.error("expected a natural number")),
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(Ordinal::zero());
        }
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ordinal::from_terms(terms)
    }

    fn term(&mut self) -> Result<(Ordinal, BigUint), OrdinalError> {
        if !self.eat(b'w') {
            return Ok((Ordinal::zero(), self.nat()?));
        }
        let exponent = if self.eat(b'^') {
            if self.eat(b'(') {
                let inner = self.ordinal()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                inner
            } else {
                Ordinal::natural(self.nat()?)
            }
        } else {
            Ordinal::one()
        };
        let coefficient = if self.eat(b'*') {
            self.nat()?
        } else {
            BigUint::one()
        };
        Ok((exponent, coefficient))
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let value = parser.ordinal()?;
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(value)
    }
}
