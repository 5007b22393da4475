//! Recursive-descent parser for the shared polynomial grammar.
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' nat)?
//! atom   := ('d' idx)+ ('x'|'y') idx | ('x'|'y') idx | 't' idx | nat | '(' poly ')'
//! ```
//!
//! Division is only by nonzero scalars, so `p/q` reads as a rational and
//! printed rational-function coefficients re-parse.

use num_bigint::BigInt;

use super::poly::DiffPoly;
use super::ring::{FieldMode, Ring};
use super::var::{DerivVar, Family, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    D(usize),
    X(usize),
    Y(usize),
    T(usize),
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
    let digits = |start: usize| -> (usize, &str) {
        let mut j = start;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        (j, &text[start..j])
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((start, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (j, s) = digits(i);
            out.push((start, Tok::Num(s.parse().expect("digits"))));
            i = j;
            continue;
        }
        if matches!(c, b'd' | b'x' | b'y' | b't') {
            let (j, s) = digits(i + 1);
            if s.is_empty() {
                return Err(Error::Syntax {
                    pos: i + 1,
                    msg: format!("expected an index after `{}`", c as char),
                });
            }
            let idx: usize = s.parse().map_err(|_| Error::IndexOutOfRange {
                pos: i + 1,
                msg: format!("index `{s}` is too large"),
            })?;
            let tok = match c {
                b'd' => Tok::D(idx),
                b'x' => Tok::X(idx),
                b'y' => Tok::Y(idx),
                _ => Tok::T(idx),
            };
            out.push((start, tok));
            i = j;
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(Error::Syntax {
            pos: i,
            msg: format!("unexpected character `{ch}`"),
        });
    }
    Ok(out)
}

pub(crate) struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    lex_err: Option<Error>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(ring: &'a Ring, text: &str) -> Self {
        let (toks, lex_err) = match lex(text) {
            Ok(t) => (t, None),
            Err(e) => (Vec::new(), Some(e)),
        };
        Parser {
            ring,
            toks,
            pos: 0,
            end: text.len(),
            lex_err,
        }
    }

    pub(crate) fn parse_all(mut self) -> Result<DiffPoly> {
        if let Some(e) = self.lex_err.take() {
            return Err(e);
        }
        if self.toks.is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: "empty expression".into(),
            });
        }
        let p = self.poly()?;
        if let Some((at, t)) = self.toks.get(self.pos) {
            return Err(Error::Syntax {
                pos: *at,
                msg: format!("unexpected token {t:?}"),
            });
        }
        Ok(p)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn poly(&mut self) -> Result<DiffPoly> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
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

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.here();
                    let d = self.factor()?;
                    let c = d.as_constant().ok_or_else(|| Error::Syntax {
                        pos: at,
                        msg: "division is only by scalars".into(),
                    })?;
                    let inv = c.inv().ok_or_else(|| Error::Syntax {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.try_into().map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(k));
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "expected a natural-number exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn var_index(&self, at: usize, fam: char, idx: usize) -> Result<u32> {
        if idx == 0 || idx > self.ring.n {
            return Err(Error::IndexOutOfRange {
                pos: at,
                msg: format!("{fam}{idx}: variable index must be in 1..={}", self.ring.n),
            });
        }
        Ok(idx as u32)
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(DiffPoly::constant(Scalar::from_bigint(n))),
            Some(Tok::LParen) => {
                let p = self.poly()?;
                let close = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(p),
                    _ => Err(Error::Syntax {
                        pos: close,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some(Tok::T(i)) => {
                if self.ring.field != FieldMode::RationalT {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: format!("t{i} requires field mode rational_t"),
                    });
                }
                if i == 0 || i > self.ring.m + 1 {
                    return Err(Error::IndexOutOfRange {
                        pos: at,
                        msg: format!("t{i}: symbol index must be in 1..={}", self.ring.m + 1),
                    });
                }
                Ok(DiffPoly::constant(Scalar::symbol(i)))
            }
            Some(Tok::X(i)) => {
                let v = self.var_index(at, 'x', i)?;
                Ok(DiffPoly::var(DerivVar::x(v, MultiIndex::zero(self.ring.m))))
            }
            Some(Tok::Y(i)) => {
                let v = self.var_index(at, 'y', i)?;
                Ok(DiffPoly::var(DerivVar::y(v, MultiIndex::zero(self.ring.m))))
            }
            Some(Tok::D(first)) => {
                let mut theta = MultiIndex::zero(self.ring.m);
                let mut next = Some(first);
                let mut d_at = at;
                while let Some(i) = next {
                    if i == 0 || i > self.ring.m {
                        return Err(Error::IndexOutOfRange {
                            pos: d_at,
                            msg: format!("d{i}: derivation index must be in 1..={}", self.ring.m),
                        });
                    }
                    theta.bump(i);
                    d_at = self.here();
                    next = match self.peek() {
                        Some(Tok::D(j)) => {
                            let j = *j;
                            self.bump();
                            Some(j)
                        }
                        _ => None,
                    };
                }
                let var_at = self.here();
                let (fam, i) = match self.bump() {
                    Some(Tok::X(i)) => (Family::X, i),
                    Some(Tok::Y(i)) => (Family::Y, i),
                    _ => {
                        return Err(Error::Syntax {
                            pos: var_at,
                            msg: "derivative operators must be followed by x or y".into(),
                        })
                    }
                };
                let name = if fam == Family::X { 'x' } else { 'y' };
                let v = self.var_index(var_at, name, i)?;
                Ok(DiffPoly::var(DerivVar {
                    family: fam,
                    var: v,
                    theta,
                }))
            }
            Some(t) => Err(Error::Syntax {
                pos: at,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Syntax {
                pos: at,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}
