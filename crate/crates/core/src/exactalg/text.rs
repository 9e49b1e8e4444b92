//! Parser for the canonical text form of Laurent polynomials.
//!
//! The grammar accepts what `Display` produces plus ordinary arithmetic:
//! `z` is the variable, `z<m>` is the root of unity `ζ_m`, `·` and `*` multiply,
//! `/` divides by a nonzero monomial, `^` takes integer powers.

use crate::error::{Error, Result};
use crate::exactalg::cyclotomic::{CycNum, Rational};
use crate::exactalg::laurent::LaurentPoly;

use dashu_int::IBig;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(IBig),
    Var,
    Root(u32),
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Num(text.parse().expect("digits"))));
            }
            'z' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    out.push((pos, Tok::Var));
                } else {
                    let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                    let m: u32 = text
                        .parse()
                        .map_err(|_| parse_err(pos, "root-of-unity order out of range"))?;
                    if m == 0 {
                        return Err(parse_err(pos, "z0 is not a root of unity"));
                    }
                    out.push((pos, Tok::Root(m)));
                }
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Times));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return Err(parse_err(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    conductor: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Times) => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.bump();
                    let d = self.unary()?;
                    acc = divide_by_monomial(&acc, &d)
                        .ok_or_else(|| parse_err(at, "division is only defined by nonzero monomials"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            _ => false,
        };
        let e: i64 = match self.bump() {
            Some(Tok::Num(n)) => n.try_into().map_err(|_| parse_err(at, "exponent out of range"))?,
            _ => return Err(parse_err(at, "expected an integer exponent")),
        };
        if e > i32::MAX as i64 {
            return Err(parse_err(at, "exponent out of range"));
        }
        if !negative {
            return Ok(base.pow(e as u32));
        }
        let one = LaurentPoly::one(self.conductor);
        let inv = divide_by_monomial(&one, &base)
            .ok_or_else(|| parse_err(at, "negative powers need a nonzero monomial base"))?;
        Ok(inv.pow(e as u32))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(LaurentPoly::constant(CycNum::from_rational(
                self.conductor,
                Rational::from(n),
            ))),
            Some(Tok::Var) => Ok(LaurentPoly::z_pow(self.conductor, 1)),
            Some(Tok::Root(m)) => {
                if !self.conductor.is_multiple_of(m) {
                    return Err(parse_err(
                        at,
                        format!("z{m} is not in the field of conductor {}", self.conductor),
                    ));
                }
                Ok(LaurentPoly::constant(CycNum::root_of_unity(
                    self.conductor,
                    (self.conductor / m) as i64,
                )))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(parse_err(self.offset(), "expected ')'")),
                }
            }
            Some(t) => Err(parse_err(at, format!("unexpected token {t:?}"))),
            None => Err(parse_err(at, "unexpected end of input")),
        }
    }
}

fn divide_by_monomial(a: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    let (c, k) = d.as_monomial()?;
    let inv = c.inv().ok()?;
    Some(a.shift(-k).scale(&inv))
}

/// Parses a Laurent polynomial with coefficients in `Q(ζ_conductor)`.
pub fn parse_laurent(s: &str, conductor: u32) -> Result<LaurentPoly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(parse_err(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
        conductor,
    };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(parse_err(p.offset(), "trailing input"));
    }
    Ok(v)
}

/// Parses a scalar; fails if the text denotes a non-constant polynomial.
pub fn parse_cycnum(s: &str, conductor: u32) -> Result<CycNum> {
    parse_laurent(s, conductor)?
        .as_constant()
        .ok_or_else(|| parse_err(0, "expected a constant"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        let p = parse_laurent("(1+z4)·z^3+2", 4).unwrap();
        assert_eq!(p.to_string(), "(1+z4)·z^3+2");
        assert_eq!(parse_laurent("z^-1", 4).unwrap(), LaurentPoly::z_pow(4, -1));
        assert_eq!(parse_cycnum("3/4", 1).unwrap().to_string(), "3/4");
        assert_eq!(parse_laurent("z4^2", 4).unwrap(), LaurentPoly::from_i64(4, -1));
        assert_eq!(parse_laurent("z2", 4).unwrap(), LaurentPoly::from_i64(4, -1));
        assert_eq!(
            parse_laurent("-z^-2 * 3 - 1/2", 1).unwrap().to_string(),
            "-1/2-3·z^-2"
        );
    }

    #[test]
    fn reports_errors_with_offsets() {
        assert!(matches!(
            parse_laurent("z3", 4),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            parse_laurent("1/(1+z)", 1),
            Err(Error::Parse { offset: 1, .. })
        ));
        assert!(parse_laurent("(z+1", 1).is_err());
        assert!(parse_laurent("z $", 1).is_err());
        assert!(parse_laurent("", 1).is_err());
    }
}
