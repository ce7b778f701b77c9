//! Parsers and printers for the textual literal formats.
//!
//! Polynomials over `F_q` are written like `t^3+a*t+1`, where `a` is the
//! class of `x` in `F_q = F_p[x]/(modulus)`. Field specifications read
//! `q=9;modulus=x^2+1`, tuples `(1,-2,3)` and multiplicity pairs
//! `(1:3),(3:2)`.

use super::field::{FieldSpec, Fq, FqElem};
use super::poly::{Poly, PolyRing};
use crate::error::{MzvError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..=i].iter().collect();
                let n = lit.parse().map_err(|_| MzvError::Parse(format!("integer too large: {lit}")))?;
                out.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() => out.push(Tok::Var(c)),
            _ => return Err(MzvError::Parse(format!("unexpected character {c:?} in {s:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

// Recursive descent over: expr := ['-'] term (('+'|'-') term)*,
// term := factor (['*'] factor)*, factor := atom ['^' int],
// atom := int | var | '(' expr ')'.
struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a PolyRing,
    var: char,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> MzvError {
        MzvError::Parse(format!("{what} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<Poly> {
        let r = self.ring;
        let mut acc = if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            r.neg(&self.term()?)
        } else {
            self.term()?
        };
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = r.add(&acc, &self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = r.sub(&acc, &self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = self.ring.mul(&acc, &self.factor()?);
                }
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = self.ring.mul(&acc, &self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    return Ok(self.ring.pow(&base, e));
                }
                _ => return Err(self.err("expected an exponent after '^'")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let k = self.ring.field();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Poly::constant(k.from_i64((n % k.p() as u64) as i64)))
            }
            Some(Tok::Var(c)) if c == self.var => {
                self.pos += 1;
                Ok(self.ring.t())
            }
            Some(Tok::Var('a')) if self.var != 'a' => {
                self.pos += 1;
                if k.degree() == 1 {
                    return Err(self.err("generator 'a' used over a prime field"));
                }
                Ok(Poly::constant(k.generator()))
            }
            Some(Tok::Var(c)) => Err(self.err(&format!("unknown variable {c:?}"))),
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.err("unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("unexpected end of expression")),
        }
    }
}

fn parse_in(ring: &PolyRing, s: &str, var: char) -> Result<Poly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(MzvError::Parse("empty polynomial literal".into()));
    }
    let mut p = Parser { toks, pos: 0, ring, var, src: s };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a polynomial in `t` over `F_q`.
pub fn parse_poly(ring: &PolyRing, s: &str) -> Result<Poly> {
    parse_in(ring, s, 't')
}

/// Parses `q=<q>` optionally followed by `;modulus=<poly in x over F_p>`.
pub fn parse_field_spec(s: &str) -> Result<FieldSpec> {
    let mut q = None;
    let mut modulus = None;
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| MzvError::Parse(format!("expected key=value, got {part:?}")))?;
        match key.trim() {
            "q" => {
                q = Some(
                    value
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| MzvError::Parse(format!("bad field size {value:?}")))?,
                )
            }
            "modulus" => modulus = Some(value.trim().to_string()),
            other => return Err(MzvError::Parse(format!("unknown field-spec key {other:?}"))),
        }
    }
    let q = q.ok_or_else(|| MzvError::Parse(format!("missing q in {s:?}")))?;
    match modulus {
        None => FieldSpec::with_q(q),
        Some(m) => field_spec_with_modulus(q, &m),
    }
}

/// Builds the field of size `q` defined by a modulus written in `x`.
pub fn field_spec_with_modulus(q: u64, modulus: &str) -> Result<FieldSpec> {
    let default = FieldSpec::with_q(q)?;
    let prime = PolyRing::new(Fq::new(FieldSpec::prime(default.p())?));
    let m = parse_in(&prime, modulus, 'x')?;
    let coeffs: Vec<u32> = m.coeffs().iter().map(|c| c.index()).collect();
    if coeffs.len() as u32 != default.f() + 1 {
        return Err(MzvError::InvalidField(format!("modulus {modulus:?} must have degree {}", default.f())));
    }
    FieldSpec::new(default.p(), default.f(), coeffs)
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

/// Parses `(1,-2,3)`; the parentheses are optional.
pub fn parse_tuple(s: &str) -> Result<Vec<i64>> {
    let inner = strip_parens(s);
    if inner.trim().is_empty() {
        return Err(MzvError::Parse(format!("empty tuple {s:?}")));
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| MzvError::Parse(format!("bad tuple entry {x:?} in {s:?}"))))
        .collect()
}

pub fn format_tuple(s: &[i64]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses `(s:k),(s:k),...`.
pub fn parse_pairs(s: &str) -> Result<Vec<(i64, u32)>> {
    let bad = || MzvError::Parse(format!("bad pair list {s:?}"));
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body_start.find(')').ok_or_else(bad)?;
        let (a, b) = body_start[..close].split_once(':').ok_or_else(bad)?;
        let sv = a.trim().parse::<i64>().map_err(|_| bad())?;
        let kv = b.trim().parse::<u32>().map_err(|_| bad())?;
        out.push((sv, kv));
        rest = body_start[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad());
            }
        } else if !rest.is_empty() {
            return Err(bad());
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub fn format_pairs(pairs: &[(i64, u32)]) -> String {
    let parts: Vec<String> = pairs.iter().map(|(s, k)| format!("({s}:{k})")).collect();
    parts.join(",")
}

/// Parses an `F_q` constant written as a polynomial in `a`.
pub fn parse_fq_elem(field: &Fq, s: &str) -> Result<FqElem> {
    let ring = PolyRing::new(field.clone());
    let p = parse_poly(&ring, s)?;
    match p.degree() {
        None => Ok(FqElem::ZERO),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(MzvError::Parse(format!("{s:?} is not a constant"))),
    }
}
