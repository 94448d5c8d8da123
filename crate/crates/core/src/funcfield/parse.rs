//! Text grammar for elements of Q(t):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := integer | 't' | '(' expr ')'
//! ```
//! Whitespace is ignored. Exponents are nonnegative integers.

use super::RationalFunction;
use crate::arith::{Poly, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse_rational_function(s: &str) -> Result<RationalFunction> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err(&format!("unexpected character '{}'", p.src[p.pos] as char)));
    }
    Ok(v)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { offset: self.pos, message: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while !self.at_end() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                acc = &acc * &rhs;
            } else {
                if rhs.is_zero() {
                    return Err(Error::Parse { offset: at, message: "division by zero".into() });
                }
                acc = &acc / &rhs;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
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

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: i64 = i64::try_from(e)
                .ok()
                .filter(|&e| (0..=100_000).contains(&e))
                .ok_or_else(|| Error::Parse { offset: start, message: "exponent out of range".into() })?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while !self.at_end() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn primary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(Poly::t()))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::from_q(Q::from_integer(n)))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let a = parse_rational_function("-t^2 + 2*t - 1").unwrap();
        assert_eq!(a.num(), &Poly::from_ints(&[-1, 2, -1]));
        let b = parse_rational_function("1/2/t").unwrap();
        assert_eq!(b.to_string(), "(1/2)/(t)");
        assert_eq!(b, parse_rational_function("(1/2)/(t)").unwrap());
    }

    #[test]
    fn error_offsets() {
        match parse_rational_function("t + * 3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_rational_function("2t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rational_function("1/(t-t)").is_err());
        assert!(parse_rational_function("").is_err());
    }
}
