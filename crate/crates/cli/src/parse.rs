//! Parser for form expressions:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' posint)*
//! atom   := int ['/' int] | 'x' int | 'dx' int | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. A leading sign is accepted so that printed
//! output parses back.

use num::{BigInt, Zero};
use symtrace_core::{AlgebraElement, Form, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {index} at position {pos} is out of range 1..={nvars}")]
    Range { pos: usize, index: u64, nvars: u8 },
    #[error("{0}")]
    Core(#[from] symtrace_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X(u64),
    Dx(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| text[start..*i].to_string())
    };
    while i < b.len() {
        let c = b[i];
        let pos = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let d = digits(&mut i).expect("at least one digit");
                out.push((pos, Tok::Int(d.parse().expect("decimal digits"))));
                continue;
            }
            b'x' | b'd' => {
                let dx = c == b'd';
                i += 1;
                if dx {
                    if i >= b.len() || b[i] != b'x' {
                        return Err(ParseError::Syntax { pos, msg: "expected 'dx'".into() });
                    }
                    i += 1;
                }
                let d = digits(&mut i)
                    .ok_or_else(|| ParseError::Syntax { pos: i, msg: "expected a variable index".into() })?;
                let n: u64 = d
                    .parse()
                    .map_err(|_| ParseError::Syntax { pos, msg: "variable index too large".into() })?;
                out.push((pos, if dx { Tok::Dx(n) } else { Tok::X(n) }));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax { pos, msg: format!("unexpected character '{}'", c as char) });
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    nvars: u8,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<AlgebraElement, ParseError> {
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let e = match self.peek() {
                Some(Tok::Int(n)) if n > &BigInt::zero() => n.clone(),
                _ => return self.err("expected a positive integer exponent"),
            };
            self.at += 1;
            let e: u32 = e.try_into().map_err(|_| ParseError::Syntax { pos: self.pos(), msg: "exponent too large".into() })?;
            let mut acc = AlgebraElement::one();
            for _ in 0..e {
                acc = &acc * &base;
                if acc.is_zero() {
                    break;
                }
            }
            base = acc;
        }
        Ok(base)
    }

    fn index(&self, n: u64) -> Result<u8, ParseError> {
        if n == 0 || n > self.nvars as u64 {
            return Err(ParseError::Range { pos: self.pos(), index: n, nvars: self.nvars });
        }
        Ok(n as u8)
    }

    fn atom(&mut self) -> Result<AlgebraElement, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Int(n) => {
                self.at += 1;
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.at += 1;
                            q /= Rational::from_integer(d);
                        }
                        _ => return self.err("expected a nonzero denominator"),
                    }
                }
                Ok(AlgebraElement::constant(q))
            }
            Tok::X(n) => {
                let i = self.index(n)?;
                self.at += 1;
                Ok(AlgebraElement::x(i))
            }
            Tok::Dx(n) => {
                let i = self.index(n)?;
                self.at += 1;
                Ok(AlgebraElement::dx(i))
            }
            Tok::LParen => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(e)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

/// Parses an expression into a form over `nvars` variables.
pub fn parse_form(text: &str, nvars: u8) -> Result<Form, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), nvars };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(Form::new(nvars, e)?)
}

/// The largest variable index mentioned in `text` (at least 1), for defaulting `--vars`.
pub fn max_index(text: &str) -> Result<u8, ParseError> {
    let mut m = 1u64;
    for (pos, t) in lex(text)? {
        if let Tok::X(n) | Tok::Dx(n) = t {
            if n > u8::MAX as u64 {
                return Err(ParseError::Range { pos, index: n, nvars: u8::MAX });
            }
            m = m.max(n);
        }
    }
    Ok(m as u8)
}
