//! Text form of scalars, written in powers of `tau`.
//!
//! Grammar accepted by [`parse_scalar`]:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? digits)?
//! atom  := digits | 'i' | 'rho' | 'tau' | '(' expr ')'
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{GaussianRational, Rational, RhoPoly, Scalar};
use crate::Error;

/// `(−i/2)^e`, the factor converting `ρ^e` into `τ^e`.
fn rho_to_tau(e: i32) -> GaussianRational {
    GaussianRational::new(Rational::ZERO, Rational::new(-1, 2)).pow(e)
}

/// Terms `(coefficient, τ-exponent)` in descending exponent order.
fn tau_terms(num: &RhoPoly, shift: i32) -> Vec<(GaussianRational, i32)> {
    let mut terms: Vec<_> = num
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let e = j as i32 - shift;
            (c * &rho_to_tau(e), e)
        })
        .collect();
    terms.reverse();
    terms
}

fn write_term(out: &mut String, c: &GaussianRational, e: i32) {
    if e == 0 {
        out.push_str(&c.to_string());
        return;
    }
    let power = if e == 1 {
        String::from("tau")
    } else {
        format!("tau^{e}")
    };
    if c.is_one() {
        out.push_str(&power);
    } else if (-c).is_one() {
        out.push('-');
        out.push_str(&power);
    } else if !c.re.is_zero() && !c.im.is_zero() {
        out.push_str(&format!("({c})*{power}"));
    } else {
        out.push_str(&format!("{c}*{power}"));
    }
}

fn write_sum(terms: &[(GaussianRational, i32)]) -> String {
    if terms.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (k, (c, e)) in terms.iter().enumerate() {
        let mut t = String::new();
        write_term(&mut t, c, *e);
        if k == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.parts();
        if let Some(k) = den.as_rho_power() {
            return f.write_str(&write_sum(&tau_terms(&num, k as i32)));
        }
        let n = write_sum(&tau_terms(&num, 0));
        let d = write_sum(&tau_terms(&den, 0));
        write!(f, "({n}) / ({d})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: String::from(expected),
        }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, Error> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, Error> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                let inv = d.checked_inv().map_err(|_| Error::Parse {
                    offset: at,
                    expected: String::from("nonzero divisor"),
                })?;
                acc = &acc * &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, Error> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, Error> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits().ok_or_else(|| self.err("integer exponent"))?;
        let e: i32 = digits.parse().map_err(|_| Error::Parse {
            offset: start,
            expected: String::from("exponent that fits in 32 bits"),
        })?;
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| Error::Parse {
            offset: start,
            expected: String::from("nonzero base"),
        })
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            core::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let end = self.pos + kw.len();
        if self.src.get(self.pos..end) == Some(kw.as_bytes())
            && !self.src.get(end).is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<Scalar, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("')'"));
                }
                Ok(v)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                let d = self.digits().expect("at least one digit");
                let n = num_bigint::BigInt::parse_bytes(d.as_bytes(), 10).ok_or(Error::Parse {
                    offset: start,
                    expected: String::from("integer"),
                })?;
                Ok(Scalar::from_rational(Rational::from_bigints(
                    n,
                    num_bigint::BigInt::from(1),
                )))
            }
            _ => {
                if self.keyword("tau") {
                    Ok(Scalar::tau())
                } else if self.keyword("rho") {
                    Ok(Scalar::rho())
                } else if self.keyword("i") {
                    Ok(Scalar::i())
                } else {
                    Err(self.err("number, 'i', 'rho', 'tau' or '('"))
                }
            }
        }
    }
}

/// Parses the scalar grammar; the inverse of `Display` on [`Scalar`].
pub fn parse_scalar(src: &str) -> Result<Scalar, Error> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("end of input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_tau() {
        assert_eq!(Scalar::tau().to_string(), "tau");
        assert_eq!(Scalar::tau().checked_inv().unwrap().to_string(), "tau^-1");
        assert_eq!(Scalar::rho().to_string(), "-1/2*i*tau");
        assert_eq!((&Scalar::tau() * &Scalar::tau()).to_string(), "tau^2");
        assert_eq!(Scalar::ratio(-3, 4).to_string(), "-3/4");
        let mixed = &Scalar::tau()
            + &Scalar::from_gaussian(GaussianRational::new(Rational::ONE, Rational::ONE));
        assert_eq!(mixed.to_string(), "tau + 1 + i");
    }

    #[test]
    fn parses_back() {
        for s in [
            "tau",
            "-tau^-1",
            "2*rho - 1/3",
            "(1 + i)*tau^2 - i",
            "(rho + 1)/(rho - 1)",
        ] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&v.to_string()).unwrap(), v, "{s}");
        }
        assert_eq!(parse_scalar("2*i*rho").unwrap(), Scalar::tau());
    }

    #[test]
    fn reports_offsets() {
        match parse_scalar("1 + * 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("tau tau").is_err());
    }
}
