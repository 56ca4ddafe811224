//! Text syntax for polynomials.
//!
//! ```text
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := coeff ['*'] varpow ('*' varpow)* | varpow ('*' varpow)* | coeff
//! varpow  := var ('^' nat)?
//! coeff   := integer | integer '/' positive-integer
//! ```
//!
//! Whitespace is ignored. Printing emits terms largest-first in grevlex, so
//! equal polynomials print identically.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{format_scalar, FieldSpec, Scalar};
use super::monomial::Monomial;
use super::poly::{Polynomial, Ring};
use crate::error::{Error, Result};

struct RawTerm {
    coeff: Scalar,
    factors: Vec<(String, u32)>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
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

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(Error::syntax(start, "expected a variable")),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn varpow(&mut self) -> Result<(String, u32)> {
        let name = self.ident()?;
        let mut e = 1u32;
        if self.eat(b'^') {
            let at = self.pos;
            let n = self.integer()?;
            e = u32::try_from(&n)
                .ok()
                .filter(|&e| e <= u16::MAX as u32)
                .ok_or_else(|| Error::syntax(at, "exponent too large"))?;
        }
        Ok((name, e))
    }

    fn term(&mut self, sign: bool) -> Result<RawTerm> {
        let mut coeff = Scalar::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::one();
                if self.eat(b'/') {
                    let at = self.pos;
                    den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::syntax(at, "zero denominator"));
                    }
                }
                coeff = Scalar::new(num, den);
                let star = self.eat(b'*');
                match self.peek() {
                    Some(c) if c.is_ascii_alphabetic() => factors.push(self.varpow()?),
                    _ if star => return Err(Error::syntax(self.pos, "expected a variable")),
                    _ => {}
                }
            }
            Some(c) if c.is_ascii_alphabetic() => factors.push(self.varpow()?),
            _ => return Err(Error::syntax(self.pos, "expected a term")),
        }
        if !factors.is_empty() {
            while self.eat(b'*') {
                factors.push(self.varpow()?);
            }
        }
        if sign {
            coeff = -coeff;
        }
        Ok(RawTerm { coeff, factors })
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            terms.push(self.term(neg)?);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    neg = true;
                }
                Some(_) => {
                    return Err(Error::syntax(self.pos, "expected `+`, `-` or end of input"))
                }
            }
        }
        Ok(terms)
    }
}

fn lex(text: &str) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    if lx.peek().is_none() {
        return Err(Error::syntax(0, "empty input"));
    }
    lx.poly()
}

fn build(raw: Vec<RawTerm>, ring: &Ring, field: FieldSpec) -> Result<Polynomial> {
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let mut m = Monomial::one(ring.len());
        for (name, e) in t.factors {
            let i = ring.index_of(&name).ok_or(Error::UnknownVariable(name))?;
            m.set(i, m.exponent(i) + e as u16);
        }
        terms.push((m, field.from_rational(&t.coeff)?));
    }
    Ok(Polynomial::from_terms(ring, field, terms))
}

/// Parses with the ring inferred from the variables that occur, in natural
/// order (`x2` before `x10`).
pub fn parse(text: &str, field: FieldSpec) -> Result<Polynomial> {
    let raw = lex(text)?;
    let ring = Ring::natural(
        raw.iter()
            .flat_map(|t| t.factors.iter().map(|f| f.0.clone())),
    )?;
    build(raw, &ring, field)
}

/// Parses inside a declared ring; unknown variables are an error.
pub fn parse_in(text: &str, ring: &Ring, field: FieldSpec) -> Result<Polynomial> {
    build(lex(text)?, ring, field)
}

/// Variable names occurring in `text`, in order of first appearance.
pub fn variables_of(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for t in lex(text)? {
        for (v, _) in t.factors {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Parses several polynomials into one common ring (natural order of the union
/// of their variables).
pub fn parse_many<S: AsRef<str>>(texts: &[S], field: FieldSpec) -> Result<Vec<Polynomial>> {
    let mut names = Vec::new();
    for t in texts {
        names.extend(variables_of(t.as_ref())?);
    }
    let ring = Ring::natural(names)?;
    texts
        .iter()
        .map(|t| parse_in(t.as_ref(), &ring, field))
        .collect()
}

pub(crate) fn format_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.var(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.var(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => out.write_str("-")?,
                (0, false) => {}
                (_, true) => out.write_str(" - ")?,
                (_, false) => out.write_str(" + ")?,
            }
            if m.is_one() {
                out.write_str(&format_scalar(&a))?;
            } else if a.is_one() {
                out.write_str(&format_monomial(self.ring(), m))?;
            } else {
                write!(
                    out,
                    "{}*{}",
                    format_scalar(&a),
                    format_monomial(self.ring(), m)
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn reads_basic_forms() {
        let f = parse("x0^2 + x1^2", Q).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.degree(), Some(2));
        assert!(parse("0", Q).unwrap().is_zero());
        assert!(parse("6*x0^4", FieldSpec::Prime(3)).unwrap().is_zero());
        let g = parse("-1/2*u0_3^2 + 3 x1*x2", Q).unwrap();
        assert_eq!(g.to_string(), "-1/2*u0_3^2 + 3*x1*x2");
    }

    #[test]
    fn printing_is_canonical() {
        let a = parse("x1*x0 + x0*x1 - 2", Q).unwrap();
        assert_eq!(a.to_string(), "2*x0*x1 - 2");
        let b = parse("x2^2 + x0*x2 + x1^2", Q).unwrap();
        // grevlex: x1^2 > x0*x2 > x2^2
        assert_eq!(b.to_string(), "x1^2 + x0*x2 + x2^2");
        let c = parse("-x0 + 5", FieldSpec::Prime(7)).unwrap();
        assert_eq!(c.to_string(), "6*x0 + 5");
        assert_eq!(parse("x0 - x0", Q).unwrap().to_string(), "0");
    }

    #[test]
    fn natural_ring_inference() {
        let f = parse("x10 + x2", Q).unwrap();
        assert_eq!(f.ring().vars(), &["x2", "x10"]);
        let fs = parse_many(&["x0", "x3*y"], Q).unwrap();
        assert_eq!(fs[0].ring(), fs[1].ring());
        assert_eq!(fs[0].ring().vars(), &["x0", "x3", "y"]);
    }

    #[test]
    fn syntax_errors_report_positions() {
        assert!(matches!(
            parse("x0 +", Q),
            Err(Error::Syntax { position: 4, .. })
        ));
        assert!(matches!(parse("x0 ** x1", Q), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/0", Q), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("", Q),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse("x0 x1", Q),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(parse("1/3*x0", FieldSpec::Prime(3)).is_err());
    }

    #[test]
    fn declared_ring_rejects_unknown_names() {
        let r = Ring::indexed("x", 2);
        assert_eq!(
            parse_in("x0 + y", &r, Q),
            Err(Error::UnknownVariable("y".into()))
        );
    }
}
