//! Text syntax for operators.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (['*' | '/'] factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := number | 'i' | 'pi' | 'd1' | 'd2' | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies. Numbers with a decimal point or exponent are
//! floats and make the operator inexact. Division is by scalars only.

use crate::error::{Error, Result};
use crate::exact::ExactComplex;
use crate::operator::{DiffOperator, MultiIndex};

/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Float(f64),
    I,
    Pi,
    D1,
    D2,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position,
        message: message.into(),
    })
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let c = b[k];
        let start = k;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                k += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while k < b.len() && b[k].is_ascii_digit() {
                    k += 1;
                }
                let mut float = false;
                if k < b.len() && b[k] == b'.' {
                    float = true;
                    k += 1;
                    while k < b.len() && b[k].is_ascii_digit() {
                        k += 1;
                    }
                }
                if k < b.len() && (b[k] == b'e' || b[k] == b'E') {
                    let mut j = k + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        while j < b.len() && b[j].is_ascii_digit() {
                            j += 1;
                        }
                        k = j;
                        float = true;
                    }
                }
                let text = &s[start..k];
                if float {
                    match text.parse::<f64>() {
                        Ok(v) => out.push((start, Tok::Float(v))),
                        Err(_) => return err(start, format!("bad number '{text}'")),
                    }
                } else {
                    out.push((start, Tok::Int(text.to_string())));
                }
                continue;
            }
            b'd' if matches!(b.get(k + 1), Some(b'1') | Some(b'2')) => {
                k += 2;
                out.push((start, if b[k - 1] == b'1' { Tok::D1 } else { Tok::D2 }));
                continue;
            }
            b'p' if b.get(k + 1) == Some(&b'i') => {
                k += 2;
                out.push((start, Tok::Pi));
                continue;
            }
            b'i' => Tok::I,
            _ => {
                let ch = s[k..].chars().next().unwrap_or('?');
                return err(k, format!("unexpected character '{ch}'"));
            }
        };
        out.push((start, tok));
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<DiffOperator> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Tok::Minus) => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(t: Option<&Tok>) -> bool {
        matches!(
            t,
            Some(Tok::Int(_) | Tok::Float(_) | Tok::I | Tok::Pi | Tok::D1 | Tok::D2 | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<DiffOperator> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.compose(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.at();
                    let d = self.factor()?;
                    let inv = scalar_value(&d)
                        .and_then(|c| c.inv())
                        .ok_or(Error::Parse {
                            position: at,
                            message: "divisor must be a nonzero scalar".into(),
                        })?;
                    acc = acc.scale(&inv);
                }
                t if Self::starts_atom(t) => acc = acc.compose(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffOperator> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let at = self.at();
            let e = match self.bump() {
                Some(Tok::Int(s)) => match s.parse::<u32>() {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return err(at, format!("exponent {s} exceeds {MAX_EXPONENT}")),
                },
                _ => return err(at, "expected an unsigned integer exponent"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffOperator> {
        let at = self.at();
        let scalar = |c: ExactComplex| DiffOperator::scalar(c);
        match self.bump() {
            Some(Tok::Int(s)) => {
                let n: num_bigint::BigInt = s.parse().map_err(|_| Error::Parse {
                    position: at,
                    message: format!("bad integer '{s}'"),
                })?;
                Ok(scalar(ExactComplex::from_bigint(n)))
            }
            Some(Tok::Float(v)) => Ok(scalar(ExactComplex::from_f64(v))),
            Some(Tok::I) => Ok(scalar(ExactComplex::i())),
            Some(Tok::Pi) => Ok(scalar(ExactComplex::pi())),
            Some(Tok::D1) => Ok(DiffOperator::d1()),
            Some(Tok::D2) => Ok(DiffOperator::d2()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => err(self.toks.get(self.pos - 1).map(|(p, _)| *p).unwrap_or(self.end), "expected ')'"),
                }
            }
            Some(t) => err(at, format!("unexpected token {}", describe(&t))),
            None => err(at, "unexpected end of input"),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::RParen => "')'",
        _ => "operand",
    }
}

/// The constant of a zero-order operator.
fn scalar_value(op: &DiffOperator) -> Option<ExactComplex> {
    if op.is_zero() {
        return Some(ExactComplex::zero());
    }
    if op.len() == 1 {
        let (m, c) = op.terms().next()?;
        if *m == MultiIndex::new(0, 0) {
            return Some(c.clone());
        }
    }
    None
}

pub fn parse_operator(text: &str) -> Result<DiffOperator> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return err(0, "empty expression");
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let op = p.expr()?;
    if p.pos < p.toks.len() {
        let (at, t) = &p.toks[p.pos];
        return err(*at, format!("unexpected token {}", describe(t)));
    }
    Ok(op)
}

/// A scalar expression such as `3/4`, `(1 - 2*i)` or `2*i*pi`.
pub fn parse_coefficient(text: &str) -> Result<ExactComplex> {
    let op = parse_operator(text)?;
    scalar_value(&op).ok_or(Error::Parse {
        position: 0,
        message: "expected a scalar".into(),
    })
}

/// One operator per line; `#` starts a comment, blank lines are skipped.
pub fn parse_operator_list(text: &str) -> Result<Vec<DiffOperator>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let op = parse_operator(body).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: offset + position,
                    message,
                },
                other => other,
            })?;
            out.push(op);
        }
        offset += line.len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0() -> DiffOperator {
        DiffOperator::d1().scale(&ExactComplex::two_pi_i()).sub(&DiffOperator::dmono(0, 2))
    }

    #[test]
    fn examples() {
        let quad = DiffOperator::d1().add(&DiffOperator::d2()).pow(2);
        assert_eq!(parse_operator("d1^2 + 2 d1 d2 + d2^2").unwrap(), quad);
        assert_eq!(parse_operator("2*pi*i*d1 - d2^2").unwrap(), s0());
        let r2 = parse_operator("d1 + 1.41421356 d2").unwrap();
        assert!(!r2.is_exact());
        assert_eq!(parse_operator("(d1 + d2)^2").unwrap(), quad);
        assert_eq!(parse_operator("d1d2").unwrap(), DiffOperator::dmono(1, 1));
        assert_eq!(parse_operator("3/4 d1").unwrap().to_string(), "3/4 d1");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_operator("d1 + x"), Err(Error::Parse { position: 5, .. })));
        assert!(matches!(parse_operator("d1^65"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_operator("d1 +"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_operator("(d1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("1/d1"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_operator("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator(""), Err(Error::Parse { position: 0, .. })));
        assert!(parse_operator("d1^64").is_ok());
    }

    #[test]
    fn printed_forms_reparse() {
        for op in [
            s0(),
            parse_operator("(1 - 2*i) d1^3 - i d2 + 5/7").unwrap(),
            parse_operator("(pi^2 + 1)/(pi - 3) d1 d2").unwrap(),
            parse_operator("-2.5 d1 + (0.5 - 1.25*i) d2^2").unwrap(),
        ] {
            assert_eq!(parse_operator(&op.to_string()).unwrap(), op, "{op}");
        }
    }

    #[test]
    fn list_with_comments() {
        let ops = parse_operator_list("# pair\nd1\n\n  d2 # second\n").unwrap();
        assert_eq!(ops, vec![DiffOperator::d1(), DiffOperator::d2()]);
        assert!(matches!(parse_operator_list("d1\nd2 ?"), Err(Error::Parse { position: 6, .. })));
    }
}
