//! Parser for the scalar expression grammar: integers, `p/q`, parameter
//! names, `+ - * / ( )`. Whitespace-insensitive. The printer in `scalar.rs`
//! emits strings in this grammar, and parse-print round-trips exactly.

use super::{ExactError, ParamSet, Rational, Scalar};
use num_bigint::BigInt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, chars: src.char_indices().peekable(), line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ExactError {
        ExactError::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let c = self.chars.next();
        if let Some((_, ch)) = c {
            if ch == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ExactError> {
        let mut out = Vec::new();
        while let Some(&(start, c)) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '+' => {
                    self.bump();
                    out.push((Tok::Plus, line, col));
                }
                '-' => {
                    self.bump();
                    out.push((Tok::Minus, line, col));
                }
                '*' => {
                    self.bump();
                    out.push((Tok::Star, line, col));
                }
                '/' => {
                    self.bump();
                    out.push((Tok::Slash, line, col));
                }
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                '0'..='9' => {
                    let mut end = start;
                    while let Some(&(i, ch)) = self.chars.peek() {
                        if ch.is_ascii_digit() {
                            end = i + ch.len_utf8();
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let lit = &self.src[start..end];
                    let n: BigInt = lit.parse().map_err(|_| self.err("bad integer"))?;
                    out.push((Tok::Int(n), line, col));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut end = start;
                    while let Some(&(i, ch)) = self.chars.peek() {
                        if ch.is_alphanumeric() || ch == '_' {
                            end = i + ch.len_utf8();
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Name(self.src[start..end].to_string()), line, col));
                }
                other => return Err(self.err(format!("unexpected character `{other}`"))),
            }
        }
        Ok(out)
    }
}

struct Parser<'p> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    params: &'p Arc<ParamSet>,
}

impl<'p> Parser<'p> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> ExactError {
        let (line, col) = self.here();
        ExactError::Parse { line, col, msg: msg.into() }
    }

    fn expr(&mut self) -> Result<Scalar, ExactError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ExactError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ExactError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Int(_)) => {
                let Tok::Int(n) = self.toks[self.pos].0.clone() else { unreachable!() };
                self.pos += 1;
                Ok(Scalar::constant(self.params, Rational::from_integer(n)))
            }
            Some(Tok::Name(_)) => {
                let Tok::Name(name) = self.toks[self.pos].0.clone() else { unreachable!() };
                self.pos += 1;
                Scalar::param(self.params, &name)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected integer, parameter name or `(`")),
        }
    }
}

/// Parse a scalar expression against a declared parameter set.
pub fn parse_scalar(src: &str, params: &Arc<ParamSet>) -> Result<Scalar, ExactError> {
    let toks = Lexer::new(src).tokens()?;
    if toks.is_empty() {
        return Err(ExactError::Parse { line: 1, col: 1, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, params };
    let s = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(s)
}
