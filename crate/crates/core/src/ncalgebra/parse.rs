//! Expression language for algebra elements and its canonical printer.
//!
//! ```text
//! expr      := ['-'] term (('+'|'-') term)*
//! term      := factor ('*' factor)*
//! factor    := atom ('^' uint)?
//! atom      := rational | generator | central | '(' expr ')'
//! generator := name '^' uint | name '_' uint ('_' uint)?
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{AlgebraSpec, Gen, NCElement, RelationClass};
use crate::coefficients::{CentralPoly, Rational, Symbol};
use crate::element::Element;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown symbol `{name}` at byte {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("index {index} out of range 1..={n} for `{name}` at byte {offset}")]
    IndexOutOfRange {
        name: String,
        index: usize,
        n: usize,
        offset: usize,
    },
    #[error("word length {len} exceeds the degree cap {cap}")]
    DegreeCapExceeded { len: usize, cap: usize },
}

/// Raw expression tree, before normal ordering.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rational),
    Central(String),
    Generator {
        name: String,
        upper: bool,
        indices: Vec<usize>,
        offset: usize,
    },
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
}

const SPECTRAL: [&str; 6] = ["u", "v", "delta", "g", "h", "m2"];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: &'a AlgebraSpec,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn small_uint(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let v = self.uint()?;
        usize::try_from(v).map_err(|_| ParseError::SyntaxError {
            offset: start,
            message: "integer too large".into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        terms.push((negative, self.term()?));
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            let k = self.small_uint()?;
            let k = u32::try_from(k).map_err(|_| ParseError::SyntaxError {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(Expr::Power(Box::new(atom), k));
        }
        Ok(atom)
    }

    fn family_part(&self, name: &str) -> Option<RelationClass> {
        self.spec
            .families
            .iter()
            .find(|f| f.parts.iter().any(|p| p == name))
            .map(|f| f.class)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let start = self.pos;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(ParseError::SyntaxError {
                            offset: start,
                            message: "zero denominator".into(),
                        });
                    }
                    return Ok(Expr::Number(Rational::new(num, den)));
                }
                Ok(Expr::Number(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii identifier")
                    .to_string();
                match self.family_part(&name) {
                    Some(class) => {
                        let upper = match self.src.get(self.pos) {
                            Some(b'^') => true,
                            Some(b'_') => false,
                            _ => return self.err("expected `_` or `^` after generator name"),
                        };
                        self.pos += 1;
                        let mut indices = vec![self.small_uint()?];
                        if class.two_index() {
                            if upper || self.src.get(self.pos) != Some(&b'_') {
                                return self.err("matrix-indexed generators are written name_i_j");
                            }
                            self.pos += 1;
                            indices.push(self.small_uint()?);
                        }
                        Ok(Expr::Generator {
                            name,
                            upper,
                            indices,
                            offset: start,
                        })
                    }
                    None => {
                        let known = SPECTRAL.contains(&name.as_str())
                            || self.spec.centrals.iter().any(|r| r.symbol.name() == name);
                        if !known {
                            return Err(ParseError::UnknownSymbol {
                                name,
                                offset: start,
                            });
                        }
                        Ok(Expr::Central(name))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
        }
    }
}

fn check_cap(e: NCElement) -> Result<NCElement, ParseError> {
    let len = e.max_word_len();
    let cap = e.spec().max_degree;
    if len > cap {
        return Err(ParseError::DegreeCapExceeded { len, cap });
    }
    Ok(e)
}

fn generator_element(
    spec: &Arc<AlgebraSpec>,
    name: &str,
    upper: bool,
    indices: &[usize],
    offset: usize,
) -> Result<NCElement, ParseError> {
    let (f, fam) = spec
        .families
        .iter()
        .enumerate()
        .find(|(_, f)| f.parts.iter().any(|p| p == name))
        .expect("checked by the parser");
    let part = fam.parts.iter().position(|p| p == name).expect("present");
    for &i in indices {
        if i == 0 || i > fam.n {
            return Err(ParseError::IndexOutOfRange {
                name: name.to_string(),
                index: i,
                n: fam.n,
                offset,
            });
        }
    }
    let i = indices[0] - 1;
    let j = indices.get(1).map(|j| j - 1).unwrap_or(0);
    let natural_upper = fam.class == RelationClass::Clifford;
    if fam.class.two_index() || upper == natural_upper {
        return Ok(NCElement::generator(spec, Gen::new(f, part, i, j)));
    }
    // index moved with the family metric
    let form = if upper {
        &fam.metric.upper
    } else {
        &fam.metric.lower
    };
    let mut acc = NCElement::zero(spec);
    for (b, coef) in form[i].iter().enumerate() {
        if !coef.is_zero() {
            acc = acc.add(&NCElement::generator(spec, Gen::new(f, part, b, 0)).scale(coef));
        }
    }
    Ok(acc)
}

/// Normal form of a raw expression tree.
pub fn evaluate(expr: &Expr, spec: &Arc<AlgebraSpec>) -> Result<NCElement, ParseError> {
    match expr {
        Expr::Number(r) => Ok(NCElement::from_rational(spec, r.clone())),
        Expr::Central(s) => Ok(NCElement::constant(
            spec,
            CentralPoly::symbol(Symbol::new(s)),
        )),
        Expr::Generator {
            name,
            upper,
            indices,
            offset,
        } => generator_element(spec, name, *upper, indices, *offset),
        Expr::Sum(terms) => {
            let mut acc = NCElement::zero(spec);
            for (neg, t) in terms {
                let v = evaluate(t, spec)?;
                acc = if *neg { acc.minus(&v) } else { acc.add(&v) };
            }
            Ok(acc)
        }
        Expr::Product(factors) => {
            let mut acc = NCElement::from_rational(spec, Rational::one());
            for f in factors {
                acc = check_cap(acc.mul(&evaluate(f, spec)?))?;
            }
            Ok(acc)
        }
        Expr::Power(base, k) => {
            let b = evaluate(base, spec)?;
            let mut acc = NCElement::from_rational(spec, Rational::one());
            for _ in 0..*k {
                acc = check_cap(acc.mul(&b))?;
            }
            Ok(acc)
        }
    }
}

/// Parses text into a raw tree without normal ordering.
pub fn parse_expr(text: &str, spec: &AlgebraSpec) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        spec,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses and normal-orders an expression.
pub fn parse(text: &str, spec: &Arc<AlgebraSpec>) -> Result<NCElement, ParseError> {
    let e = parse_expr(text, spec)?;
    check_cap(evaluate(&e, spec)?)
}

/// Canonical text: terms in normal-word order, in the parser's grammar.
pub fn print(e: &NCElement) -> String {
    if e.terms().is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (w, c)) in e.terms().iter().enumerate() {
        e.render_term(&mut out, i == 0, w, c);
    }
    out
}
