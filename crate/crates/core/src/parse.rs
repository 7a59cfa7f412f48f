//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term { ("+" | "-") term } ;
//! term     := factor { "*" factor } ;
//! factor   := base [ "^" signed_int ] | "-" factor ;
//! base     := rational | identifier | "(" expr ")" ;
//! rational := int [ "/" int ] ;
//! ```
//!
//! Expressions are evaluated directly into a [`LaurentPoly`] over the given
//! context.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::poly::LaurentPoly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
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
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(AlgebraError::Syntax { pos: start, msg: format!("unexpected character `{other}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a Arc<VarContext>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Syntax { pos: self.offset(), msg: msg.into() })
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
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            let e = self.signed_int()?;
            return base.pow(e).map_err(|err| match err {
                AlgebraError::DivisionByZero => AlgebraError::Syntax { pos: at, msg: "zero raised to a negative power".into() },
                other => other,
            });
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i32> {
        let neg = if let Some(Tok::Minus) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let v: i32 = match i32::try_from(n) {
                    Ok(v) => v,
                    Err(_) => {
                        self.pos -= 1;
                        return self.err("exponent out of range");
                    }
                };
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                self.err("expected integer exponent")
            }
        }
    }

    fn base(&mut self) -> Result<LaurentPoly> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                let mut r = Rational::from(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                self.pos -= 1;
                                return self.err("zero denominator");
                            }
                            r = r.checked_div(&Rational::from(d))?;
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected integer denominator");
                        }
                    }
                }
                Ok(LaurentPoly::constant(self.ctx, r))
            }
            Some(Tok::Ident(name)) => LaurentPoly::var(self.ctx, &name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            Some(_) => {
                self.pos -= 1;
                self.err("expected number, identifier or `(`")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse `text` into a canonical polynomial over `ctx`.
pub fn parse_expr(text: &str, ctx: &Arc<VarContext>) -> Result<LaurentPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), ctx };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(value)
}
