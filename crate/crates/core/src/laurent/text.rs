//! Text form of Laurent polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coef | [coef '*'] factor ('*' factor)*
//! factor := 'x' <index> ['^' ['-'] int]
//! ```
//!
//! Variables are named `x1..xn`. When there is a single variable a bare `x`
//! is also accepted. Rendering lists terms from the largest exponent vector
//! (lexicographically) to the smallest; the zero polynomial renders as `0`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{ExponentVector, LaurentPolynomial};
use crate::scalar::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ParseError at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl<C: Ring + Signed + fmt::Display> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let magnitude = c.abs();
            let factors = render_factors(e);
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{factors}")?;
            } else {
                write!(f, "{magnitude}*{factors}")?;
            }
        }
        Ok(())
    }
}

fn render_factors(e: &ExponentVector) -> String {
    e.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl<C: Ring + From<BigInt>> LaurentPolynomial<C> {
    /// Parses the text form in `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, ParseError> {
        Parser::new(text, nvars).parse_poly()
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, nvars: usize) -> Self {
        Self {
            bytes: text.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn parse_poly<C: Ring + From<BigInt>>(&mut self) -> Result<LaurentPolynomial<C>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let (e, c) = self.parse_term()?;
            terms.push((e, if negative { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(other) => return Err(self.error(format!("unexpected character '{}'", other as char))),
            }
        }
        let terms: Vec<(ExponentVector, C)> = terms.into_iter().map(|(e, c)| (e, C::from(c))).collect();
        Ok(LaurentPolynomial::from_terms(self.nvars, terms))
    }

    fn parse_term(&mut self) -> Result<(ExponentVector, BigInt), ParseError> {
        let mut exps = vec![0i64; self.nvars];
        let mut coef = BigInt::one();
        let mut expect_factor = false;
        if let Some(d) = self.digits() {
            coef = d.parse().map_err(|_| self.error("bad coefficient"))?;
            if !self.eat(b'*') {
                return Ok((ExponentVector::new(exps), coef));
            }
            expect_factor = true;
        }
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let index = match self.digits() {
                        Some(d) => d.parse::<usize>().map_err(|_| self.error("bad variable index"))?,
                        None if self.nvars == 1 => 1,
                        None => return Err(self.error("variable needs an index")),
                    };
                    if index == 0 || index > self.nvars {
                        return Err(self.error(format!("variable x{index} outside x1..x{}", self.nvars)));
                    }
                    let mut power = 1i64;
                    if self.eat(b'^') {
                        let neg = self.eat(b'-');
                        let d = self.digits().ok_or_else(|| self.error("missing exponent"))?;
                        power = d.parse().map_err(|_| self.error("bad exponent"))?;
                        if neg {
                            power = -power;
                        }
                    }
                    exps[index - 1] += power;
                }
                _ if expect_factor => return Err(self.error("expected a factor")),
                _ => return Err(self.error("expected a term")),
            }
            if !self.eat(b'*') {
                break;
            }
            if let Some(d) = self.digits() {
                // a numeric factor after a variable, e.g. x1*3
                let extra: BigInt = d.parse().map_err(|_| self.error("bad coefficient"))?;
                coef *= extra;
                if !self.eat(b'*') {
                    break;
                }
            }
        }
        Ok((ExponentVector::new(exps), coef))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = LaurentPolynomial<BigInt>;

    #[test]
    fn renders_most_significant_first() {
        let p = P::parse("1 + 3*x1^2*x2^-1", 2).unwrap();
        assert_eq!(p.to_string(), "3*x1^2*x2^-1 + 1");
        let q = P::parse("-x2 + x1 - 4", 2).unwrap();
        assert_eq!(q.to_string(), "x1 - x2 - 4");
        assert_eq!(P::zero(3).to_string(), "0");
        assert_eq!(P::parse("-x1^-1", 1).unwrap().to_string(), "-x1^-1");
    }

    #[test]
    fn whitespace_and_repeated_factors() {
        let a = P::parse("  2 *x1 * x1^ -3 *x2 ", 2).unwrap();
        assert_eq!(a.to_string(), "2*x1^-2*x2");
        assert_eq!(P::parse("x^2 - 1", 1).unwrap(), P::parse("x1^2 - 1", 1).unwrap());
        assert_eq!(P::parse("0", 2).unwrap(), P::zero(2));
    }

    #[test]
    fn parse_errors() {
        assert!(P::parse("x3", 2).is_err());
        assert!(P::parse("x0", 2).is_err());
        assert!(P::parse("x", 2).is_err());
        assert!(P::parse("x1 +", 2).is_err());
        assert!(P::parse("2*", 2).is_err());
        assert!(P::parse("x1 ? x2", 2).is_err());
        assert!(P::parse("", 2).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(-4i64..5, 3), -50i64..50), 0..8).prop_map(|terms| {
            P::from_terms(
                3,
                terms.into_iter().map(|(e, c)| (ExponentVector::new(e), BigInt::from(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(p in arb_poly()) {
            let text = p.to_string();
            prop_assert_eq!(P::parse(&text, 3).unwrap(), p);
        }
    }
}
