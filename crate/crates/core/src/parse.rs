//! Matrix-entry parser.
//!
//! ```text
//! entry  := expr ('/' expr)?
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := int | var | '(' entry ')'
//! ```
//!
//! Whitespace is insignificant. Two conveniences go beyond the plain
//! polynomial grammar: a leading minus, and a quotient inside parentheses.

use num_bigint::BigInt;

use crate::error::ParseError;
use crate::multipoly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::ring::Characteristic;

/// Parses `text` into a canonical rational function in `variables`.
pub fn parse_entry(text: &str, characteristic: &Characteristic, variables: &[String]) -> Result<RatFunc, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, characteristic, variables };
    let value = p.entry()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    characteristic: &'a Characteristic,
    variables: &'a [String],
}

impl Parser<'_> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: BigInt) -> RatFunc {
        RatFunc::from_poly(MultiPoly::constant(self.characteristic.clone(), self.variables.len(), c))
    }

    fn entry(&mut self) -> Result<RatFunc, ParseError> {
        let num = self.expr()?;
        if self.peek() == Some(b'/') {
            let slash = self.pos;
            self.pos += 1;
            let den = self.expr()?;
            if den.is_zero() {
                return Err(ParseError::ZeroDenominator { offset: slash });
            }
            return Ok(num.div(&den).expect("nonzero denominator"));
        }
        Ok(num)
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.syntax("expected a nonnegative exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("exponent {digits} is too large"),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.entry()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(self.constant(digits.parse::<BigInt>().expect("decimal digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                let idx = self
                    .variables
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| ParseError::UnknownVariable { name: name.to_string(), offset: start })?;
                Ok(RatFunc::from_poly(MultiPoly::var(self.characteristic.clone(), self.variables.len(), idx)))
            }
            Some(c) => Err(self.syntax(format!("unexpected {:?}", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constants_and_cancellation() {
        let v = vars(&["t1"]);
        let one = parse_entry("1", &Characteristic::Zero, &v).unwrap();
        assert!(one.is_one());
        assert!(parse_entry("t1 - t1", &Characteristic::Zero, &v).unwrap().is_zero());
    }

    #[test]
    fn quotient_is_canonical() {
        let v = vars(&["t"]);
        let r = parse_entry("(3*t^2 - 1)/(2*t)", &Characteristic::Zero, &v).unwrap();
        assert_eq!(r.display_with(&v).to_string(), "(3*t^2 - 1)/(2*t)");
        let same = parse_entry(" ( 6*t^2-2 ) / ( 4*t ) ", &Characteristic::Zero, &v).unwrap();
        assert_eq!(r, same);
    }

    #[test]
    fn errors_carry_offsets() {
        let v = vars(&["t"]);
        let ch = Characteristic::Zero;
        assert_eq!(
            parse_entry("t + s", &ch, &v),
            Err(ParseError::UnknownVariable { name: "s".into(), offset: 4 })
        );
        assert_eq!(parse_entry("t/(t-t)", &ch, &v), Err(ParseError::ZeroDenominator { offset: 1 }));
        assert!(matches!(parse_entry("t +", &ch, &v), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_entry("t)", &ch, &v), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_entry("t^x", &ch, &v), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn characteristic_reduction() {
        let v = vars(&["t"]);
        let f3 = Characteristic::prime(3).unwrap();
        assert!(parse_entry("3*t", &f3, &v).unwrap().is_zero());
        assert_eq!(parse_entry("1/3", &f3, &v), Err(ParseError::ZeroDenominator { offset: 1 }));
        assert!(parse_entry("4", &f3, &v).unwrap().is_one());
    }

    #[test]
    fn leading_minus_and_nested_quotients() {
        let v = vars(&["t"]);
        let ch = Characteristic::Zero;
        let a = parse_entry("-t + 1", &ch, &v).unwrap();
        let b = parse_entry("1 - t", &ch, &v).unwrap();
        assert_eq!(a, b);
        let c = parse_entry("(1/t)*t", &ch, &v).unwrap();
        assert!(c.is_one());
    }
}
