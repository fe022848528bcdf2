//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//!
//! Identifiers must be ring variables, e.g. `x^2*y - 3/2*z` or `2x y`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = text[..pos].chars().count() + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = pos;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = if i < chars.len() { chars[i].0 } else { text.len() };
            let n: BigInt = text[start..end].parse().map_err(|_| Error::Parse { column: col, message: "bad integer".into() })?;
            out.push((col, Tok::Num(n)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = pos;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = if i < chars.len() { chars[i].0 } else { text.len() };
            out.push((col, Tok::Ident(text[start..end].to_string())));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::Parse { column: col, message: format!("unexpected character '{c}'") }),
        };
        out.push((col, t));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [String],
    field: Field,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.into() })
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse { column: self.col(), message: "exponent too large".into() })?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected exponent after '^'"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            let col = self.col();
                            self.pos += 1;
                            let c = self
                                .field
                                .from_ratio(&n, &d)
                                .map_err(|_| Error::Parse { column: col, message: "zero denominator".into() })?;
                            Ok(Polynomial::constant(self.field, self.nvars(), c))
                        }
                        _ => self.err("expected integer denominator"),
                    }
                } else {
                    Ok(Polynomial::constant(self.field, self.nvars(), self.field.from_bigint(&n)))
                }
            }
            Some(Tok::Ident(name)) => match self.names.iter().position(|v| *v == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.field, self.nvars(), i))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse `text` as a polynomial in the variables `names` over `field`.
pub fn parse_polynomial(text: &str, names: &[String], field: Field) -> Result<Polynomial> {
    let toks = lex(text)?;
    let end_col = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, names, field, end_col };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_grammar_example() {
        let n = names(&["x", "y", "z"]);
        let p = parse_polynomial("x^2*y - 3/2*z", &n, Field::Rationals).unwrap();
        assert_eq!(p.display(&n).to_string(), "x^2*y - 3/2*z");
        let q = parse_polynomial("2x y + (x - z)^2", &n, Field::Rationals).unwrap();
        let r = parse_polynomial("x^2 + 2*x*y - 2*x*z + z^2", &n, Field::Rationals).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn reports_columns() {
        let n = names(&["x"]);
        match parse_polynomial("x + w", &n, Field::Rationals) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("x +", &n, Field::Rationals).is_err());
        assert!(parse_polynomial("1/0", &n, Field::Rationals).is_err());
    }

    #[test]
    fn prime_field_coefficients() {
        let n = names(&["x"]);
        let p = parse_polynomial("1/2*x", &n, Field::Prime(7)).unwrap();
        assert_eq!(p, parse_polynomial("4x", &n, Field::Prime(7)).unwrap());
    }
}
