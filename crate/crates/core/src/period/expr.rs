//! Target constants written as arithmetic expressions such as
//! `(9!/16)*(360*zeta2(3,5) + 690*zeta(3)*zeta(5) - (29/315)*pi^8)`.

use super::constants::{pi_rational, zeta2_rational, zeta_rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A parsed target with its high-precision value.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    source: String,
    value: BigRational,
}

impl Target {
    pub fn parse(source: &str) -> Result<Target> {
        let mut p = Parser { src: source.as_bytes(), pos: 0 };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Target { source: source.to_string(), value })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Rational approximation accurate to far more digits than `f64`.
    pub fn exact(&self) -> &BigRational {
        &self.value
    }

    pub fn value(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Expression(format!("{msg} at position {}", self.pos))
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<BigRational> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BigRational> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BigRational> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<BigRational> {
        let base = self.postfix()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            if !exp.is_integer() || exp.abs() > BigRational::from_integer(BigInt::from(64)) {
                return Err(self.error("exponent must be an integer of size at most 64"));
            }
            let n = exp.to_integer().to_i32().unwrap_or(0);
            if n < 0 && base.is_zero() {
                return Err(self.error("division by zero"));
            }
            let p = num_traits::pow(base, n.unsigned_abs() as usize);
            return Ok(if n < 0 { p.recip() } else { p });
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<BigRational> {
        let mut v = self.atom()?;
        while self.peek() == Some(b'!') {
            self.pos += 1;
            if !v.is_integer() || v.is_negative() || v > BigRational::from_integer(BigInt::from(100)) {
                return Err(self.error("factorial needs an integer between 0 and 100"));
            }
            let n = v.to_integer().to_u64().unwrap_or(0);
            v = BigRational::from_integer((1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<BigRational> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("").to_ascii_lowercase();
                match name.as_str() {
                    "pi" => Ok(pi_rational()),
                    "zeta" => {
                        let args = self.arguments()?;
                        match args.as_slice() {
                            [s] if *s >= 2 => Ok(zeta_rational(*s)),
                            _ => Err(self.error("zeta takes one integer argument >= 2")),
                        }
                    }
                    "zeta2" => {
                        let args = self.arguments()?;
                        match args.as_slice() {
                            [a, b] if *a >= 2 && *b >= 1 => Ok(zeta2_rational(*a, *b)),
                            _ => Err(self.error("zeta2 takes integer arguments a >= 2, b >= 1")),
                        }
                    }
                    _ => Err(Error::Expression(format!("unknown name '{name}'"))),
                }
            }
            _ => Err(self.error("expected a number, name or '('")),
        }
    }

    fn arguments(&mut self) -> Result<Vec<u32>> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        loop {
            let v = self.expr()?;
            if !v.is_integer() || v.is_negative() || v > BigRational::from_integer(BigInt::from(200)) {
                return Err(self.error("arguments must be small non-negative integers"));
            }
            out.push(v.to_integer().to_u32().unwrap_or(0));
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let mut frac_part = "";
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_part = std::str::from_utf8(&self.src[fs..self.pos]).unwrap_or("");
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().map_err(|_| self.error("malformed number"))?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(BigRational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(Target::parse("441/8").unwrap().value(), 55.125);
        assert_eq!(Target::parse("-2^3 + 3!").unwrap().value(), -2.0);
        assert_eq!(Target::parse("1.5*2").unwrap().value(), 3.0);
        assert_eq!(Target::parse("2^-1").unwrap().value(), 0.5);
    }

    #[test]
    fn constants() {
        let v = Target::parse("6*zeta(3)").unwrap().value();
        assert!((v - 7.212341418957565).abs() < 1e-14);
        let p = Target::parse("pi").unwrap().value();
        assert_eq!(p, std::f64::consts::PI);
    }

    #[test]
    fn errors() {
        assert!(Target::parse("zeta(1)").is_err());
        assert!(Target::parse("1/0").is_err());
        assert!(Target::parse("foo").is_err());
        assert!(Target::parse("(1").is_err());
        assert!(Target::parse("2 3").is_err());
    }
}
