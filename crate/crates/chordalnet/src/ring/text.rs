//! Canonical text form for polynomials.
//!
//! Grammar: `term = [coeff][*] factor (* factor)*`, `factor = x<idx>[^<exp>]`,
//! terms joined by `+` or `-`, coefficients reduced mod p, whitespace
//! insignificant. Example: `3*x0^2*x3 - x1*x2 + 5`.
//!
//! Printing lists terms in decreasing lex order and renders coefficients
//! in balanced form (`p - 1` prints as `- 1`), so `x0^3 - x0` round-trips.

use super::{Monomial, Poly, Ring};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for PolyParseError {}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let p = self.ring.p;
        let mut first = true;
        for (m, c) in self.terms_desc() {
            // Balanced representative: coefficients above p/2 print negated.
            let (neg, mag) = if c > p / 2 { (true, p - c) } else { (false, c) };
            if first {
                if neg {
                    write!(out, "-")?;
                }
                first = false;
            } else if neg {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(out, "{mag}")?;
            } else if mag == 1 {
                write!(out, "{}", factors.join("*"))?;
            } else {
                write!(out, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> PolyParseError {
        PolyParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.advance_raw();
        }
        self.src.get(self.pos).copied()
    }

    fn advance_raw(&mut self) {
        if self.pos < self.src.len() {
            self.pos += 1;
            self.col += 1;
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.advance_raw();
        Some(c)
    }

    fn number(&mut self) -> Result<u64, PolyParseError> {
        let mut seen = false;
        let mut val: u64 = 0;
        while let Some(c) = self.src.get(self.pos).copied() {
            if c.is_ascii_digit() {
                seen = true;
                val = val
                    .checked_mul(10)
                    .and_then(|v| v.checked_add((c - b'0') as u64))
                    .ok_or_else(|| self.err("integer literal too large"))?;
                self.advance_raw();
            } else {
                break;
            }
        }
        if !seen {
            return Err(self.err("expected a number"));
        }
        Ok(val)
    }
}

/// Parse one polynomial. `line` is used for error positions.
pub fn parse_poly_at(ring: Ring, src: &str, line: usize) -> Result<Poly, PolyParseError> {
    let mut lx = Lexer::new(src, line);
    let mut poly = Poly::zero(ring);
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            None if first => return Err(lx.err("empty polynomial")),
            None => break,
            Some(b'+') => {
                lx.bump();
                1
            }
            Some(b'-') => {
                lx.bump();
                -1i64
            }
            Some(_) if first => 1,
            Some(c) => return Err(lx.err(format!("expected '+' or '-', found '{}'", c as char))),
        };
        first = false;
        let (m, c) = parse_term(&mut lx, ring)?;
        let coeff = if sign < 0 { crate::gf::neg(c, ring.p) } else { c };
        poly.add_term(m, coeff);
    }
    Ok(poly)
}

pub fn parse_poly(ring: Ring, src: &str) -> Result<Poly, PolyParseError> {
    parse_poly_at(ring, src, 1)
}

fn parse_term(lx: &mut Lexer, ring: Ring) -> Result<(Monomial, u64), PolyParseError> {
    let mut coeff: u64 = 1;
    let mut mono = Monomial::one(ring.n);

    // Optional leading integer coefficient.
    match lx.peek() {
        Some(c) if c.is_ascii_digit() => {
            coeff = lx.number()? % ring.p;
            if lx.peek() == Some(b'*') {
                lx.bump();
                parse_factor(lx, ring, &mut mono)?;
            } else if lx.peek() == Some(b'x') {
                parse_factor(lx, ring, &mut mono)?;
            } else {
                return Ok((mono, coeff));
            }
        }
        Some(b'x') => parse_factor(lx, ring, &mut mono)?,
        Some(c) => return Err(lx.err(format!("expected a term, found '{}'", c as char))),
        None => return Err(lx.err("expected a term")),
    }

    while lx.peek() == Some(b'*') {
        lx.bump();
        parse_factor(lx, ring, &mut mono)?;
    }
    Ok((mono, coeff))
}

fn parse_factor(lx: &mut Lexer, ring: Ring, mono: &mut Monomial) -> Result<(), PolyParseError> {
    match lx.peek() {
        Some(b'x') => {
            lx.bump();
        }
        Some(c) => return Err(lx.err(format!("expected a variable, found '{}'", c as char))),
        None => return Err(lx.err("expected a variable")),
    }
    let idx = lx.number()? as usize;
    if idx >= ring.n {
        return Err(lx.err(format!("variable x{idx} out of range (n = {})", ring.n)));
    }
    let mut exp: u32 = 1;
    if lx.peek() == Some(b'^') {
        lx.bump();
        if lx.peek() == Some(b'^') {
            return Err(lx.err("duplicated '^'"));
        }
        let e = lx.number()?;
        if e > u32::MAX as u64 {
            return Err(lx.err("exponent too large"));
        }
        exp = e as u32;
    }
    mono.0[idx] = mono.0[idx]
        .checked_add(exp)
        .ok_or_else(|| lx.err("exponent overflow"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(9, 13)
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let r = ring();
        for s in [
            "x0^3 - x0",
            "3*x0^2*x3 - x1*x2 + 5",
            "x2*x3^2 - x3",
            "x8^3 - 1",
            "0",
            "-x0 + 1",
            "x0^2 + x0*x8 + x8^2",
        ] {
            let f = parse_poly(r, s).unwrap();
            assert_eq!(f.to_string(), s, "canonical form of {s}");
            let g = parse_poly(r, &f.to_string()).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn parse_flexible_syntax() {
        let r = ring();
        assert_eq!(parse_poly(r, "3x0").unwrap(), parse_poly(r, "3*x0").unwrap());
        assert_eq!(parse_poly(r, " x0 ^ 2 ").unwrap(), parse_poly(r, "x0^2").unwrap());
        assert_eq!(parse_poly(r, "x0*x0").unwrap(), parse_poly(r, "x0^2").unwrap());
        assert_eq!(parse_poly(r, "14").unwrap(), Poly::constant(r, 1));
        assert_eq!(parse_poly(r, "x1+12*x2").unwrap(), parse_poly(r, "x1 - x2").unwrap());
    }

    #[test]
    fn parse_errors_have_positions() {
        let r = ring();
        let e = parse_poly(r, "x0^^2").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        assert!(parse_poly(r, "x9^2 + x10").is_err()); // x10 out of range for n=9
        assert!(parse_poly(r, "").is_err());
        assert!(parse_poly(r, "x0 + + x1").is_err());
        assert!(parse_poly(r, "y0").is_err());
    }
}
