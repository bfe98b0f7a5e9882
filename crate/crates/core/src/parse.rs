//! Expression parser for `W(X, Y)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := 'X' | 'Y' | int | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and implicit multiplication is rejected. Division
//! may appear anywhere; the result is normalized once at the end.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::{BivariateRational, NormalizationError, SparsePoly};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error(transparent)]
    Normalization(NormalizationError),
}

impl From<NormalizationError> for ParseError {
    fn from(e: NormalizationError) -> Self {
        match e {
            NormalizationError::DivisionByZeroPoly => ParseError::DivisionByZeroPoly,
            other => ParseError::Normalization(other),
        }
    }
}

/// Parse and normalize an expression.
pub fn parse_expression(text: &str) -> Result<BivariateRational, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let Frac { num, den } = value;
    Ok(BivariateRational::normalize(num, den)?)
}

/// Unnormalized quotient used while parsing.
#[derive(Clone)]
struct Frac {
    num: SparsePoly,
    den: SparsePoly,
}

impl Frac {
    fn poly(p: SparsePoly) -> Self {
        Frac { num: p, den: SparsePoly::one() }
    }

    fn add(self, other: Frac, negate: bool) -> Frac {
        let rhs = if negate { other.num.neg() } else { other.num };
        if self.den == other.den {
            return Frac { num: self.num.add(&rhs), den: self.den };
        }
        Frac {
            num: self.num.mul(&other.den).add(&rhs.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduce()
    }

    fn mul(self, other: Frac) -> Frac {
        Frac { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }.reduce()
    }

    fn div(self, other: Frac) -> Result<Frac, ParseError> {
        if other.num.is_zero() {
            return Err(ParseError::DivisionByZeroPoly);
        }
        Ok(Frac { num: self.num.mul(&other.den), den: self.den.mul(&other.num) }.reduce())
    }

    fn pow(self, e: u32) -> Frac {
        Frac { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Cancel common factors to keep intermediate sizes small.
    fn reduce(self) -> Frac {
        if self.den.is_one() || self.num.is_zero() {
            return self;
        }
        let g = self.num.gcd(&self.den);
        if g.is_one() {
            return self;
        }
        Frac {
            num: self.num.div_exact(&g).expect("gcd divides"),
            den: self.den.div_exact(&g).expect("gcd divides"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, op == b'-');
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(self.factor()?)?;
                }
                Some(b'X' | b'Y' | b'(' | b'0'..=b'9') => {
                    return Err(self.error("implicit multiplication is not allowed"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Frac, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e = u32::try_from(&e)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Frac, ParseError> {
        match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                Ok(Frac::poly(SparsePoly::x()))
            }
            Some(b'Y') => {
                self.pos += 1;
                Ok(Frac::poly(SparsePoly::y()))
            }
            Some(b'0'..=b'9') => Ok(Frac::poly(SparsePoly::constant(self.uint()?))),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("expected X, Y, an integer or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }
}
