//! Exact scalars: arbitrary-precision rationals and polynomials in commuting
//! central symbols (spectral parameters, adjoined centrals, Casimir stand-ins).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use smallvec::SmallVec;
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Renders a rational in the `p/q` text form (integers without denominator).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("relation for `{symbol}` is not triangular: right side mentions `{offender}`")]
    NonTriangularRelations { symbol: String, offender: String },
    #[error("symbol `{0}` is not part of the ring")]
    UnknownSymbol(String),
    #[error("duplicate relation for `{0}`")]
    DuplicateRelation(String),
}

static INTERNER: Lazy<RwLock<Vec<String>>> = Lazy::new(|| {
    RwLock::new(
        ["u", "v", "delta", "g", "h", "m2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
});

/// An interned central symbol. Symbols compare by interning id; printing
/// always goes through the name so output never depends on that id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(u32);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        {
            let table = INTERNER.read().expect("symbol table poisoned");
            if let Some(i) = table.iter().position(|s| s == name) {
                return Symbol(i as u32);
            }
        }
        let mut table = INTERNER.write().expect("symbol table poisoned");
        if let Some(i) = table.iter().position(|s| s == name) {
            return Symbol(i as u32);
        }
        table.push(name.to_string());
        Symbol((table.len() - 1) as u32)
    }

    pub fn name(&self) -> String {
        INTERNER.read().expect("symbol table poisoned")[self.0 as usize].clone()
    }

    pub fn u() -> Symbol {
        Symbol(0)
    }
    pub fn v() -> Symbol {
        Symbol(1)
    }
    pub fn delta() -> Symbol {
        Symbol(2)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sparse exponent vector, sorted by symbol, no zero exponents.
pub type Monomial = SmallVec<[(Symbol, u32); 3]>;

pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Monomial::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn mono_exponent(m: &Monomial, s: Symbol) -> u32 {
    m.iter()
        .find(|(t, _)| *t == s)
        .map(|(_, e)| *e)
        .unwrap_or(0)
}

/// Returns `m` with the exponent of `s` replaced by `e`.
pub fn mono_with_exponent(m: &Monomial, s: Symbol, e: u32) -> Monomial {
    let mut out: Monomial = m.iter().copied().filter(|(t, _)| *t != s).collect();
    if e > 0 {
        let pos = out.iter().position(|(t, _)| *t > s).unwrap_or(out.len());
        out.insert(pos, (s, e));
    }
    out
}

fn mono_text(m: &Monomial) -> Vec<(String, u32)> {
    let mut v: Vec<(String, u32)> = m.iter().map(|(s, e)| (s.name(), *e)).collect();
    v.sort();
    v
}

/// Polynomial with rational coefficients in commuting symbols.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CentralPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CentralPoly {
    pub fn zero() -> Self {
        CentralPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        let mut p = CentralPoly::zero();
        if !r.is_zero() {
            p.terms.insert(Monomial::new(), r);
        }
        p
    }

    pub fn from_int(i: i64) -> Self {
        Self::constant(int(i))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::monomial(smallvec::smallvec![(s, 1)], Rational::one())
    }

    pub fn var(name: &str) -> Self {
        Self::symbol(Symbol::new(name))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = CentralPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value when the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &CentralPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, r: &Rational) -> CentralPoly {
        if r.is_zero() {
            return CentralPoly::zero();
        }
        CentralPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(s, _)| *s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms
            .keys()
            .map(|m| mono_exponent(m, s))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients of successive powers of `s`: `self = Σ_k out[k]·s^k`.
    pub fn coefficients_in(&self, s: Symbol) -> Vec<CentralPoly> {
        let mut out = vec![CentralPoly::zero(); self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            let e = mono_exponent(m, s);
            out[e as usize].add_term(mono_with_exponent(m, s, 0), c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> CentralPoly {
        let mut acc = CentralPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every occurrence of `s` by `value`.
    pub fn substitute(&self, s: Symbol, value: &CentralPoly) -> CentralPoly {
        if self.degree_in(s) == 0 {
            return self.clone();
        }
        let mut powers = vec![CentralPoly::one()];
        let mut out = CentralPoly::zero();
        for (m, c) in &self.terms {
            let e = mono_exponent(m, s) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = CentralPoly::monomial(mono_with_exponent(m, s, 0), c.clone());
            out.add_assign_ref(&(&rest * &powers[e]));
        }
        out
    }

    /// Terms in canonical (name-sorted) order, used by the printer.
    pub fn sorted_terms(&self) -> Vec<(Vec<(String, u32)>, Rational)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (mono_text(m), c.clone()))
            .collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|x| x.1).sum();
            let db: u32 = b.0.iter().map(|x| x.1).sum();
            db.cmp(&da).then_with(|| a.0.cmp(&b.0))
        });
        v
    }
}

/// Writes `coef*sym^k*...` style factors; used by both polynomial and
/// algebra-element printers so the two agree on the grammar.
pub(crate) fn write_signed_term(
    out: &mut String,
    first: bool,
    coef: &Rational,
    factors: &[String],
) {
    let neg = coef.is_negative();
    let mag = coef.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || factors.is_empty() {
        parts.push(format_rational(&mag));
    }
    parts.extend(factors.iter().cloned());
    out.push_str(&parts.join("*"));
}

pub(crate) fn monomial_factors(m: &[(String, u32)]) -> Vec<String> {
    m.iter()
        .map(|(n, e)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{}^{}", n, e)
            }
        })
        .collect()
}

impl fmt::Display for CentralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.sorted_terms().iter().enumerate() {
            write_signed_term(&mut s, i == 0, c, &monomial_factors(m));
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for CentralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CentralPoly({})", self)
    }
}

impl<'a> Add<&'a CentralPoly> for &'a CentralPoly {
    type Output = CentralPoly;
    fn add(self, rhs: &CentralPoly) -> CentralPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a CentralPoly> for &'a CentralPoly {
    type Output = CentralPoly;
    fn sub(self, rhs: &CentralPoly) -> CentralPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a CentralPoly> for &'a CentralPoly {
    type Output = CentralPoly;
    fn mul(self, rhs: &CentralPoly) -> CentralPoly {
        let mut out = CentralPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &CentralPoly {
    type Output = CentralPoly;
    fn neg(self) -> CentralPoly {
        CentralPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl From<Rational> for CentralPoly {
    fn from(r: Rational) -> Self {
        CentralPoly::constant(r)
    }
}

/// A power-substitution rule `symbol^degree ↦ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub symbol: Symbol,
    pub degree: u32,
    pub rhs: CentralPoly,
}

/// Ordered set of symbols with optional triangular reduction rules: each
/// rule's right side may only use symbols earlier in the order.
#[derive(Clone, Debug, Default)]
pub struct PolyRing {
    order: Vec<Symbol>,
    relations: Vec<Relation>,
}

impl PolyRing {
    pub fn new(order: &[&str]) -> Self {
        PolyRing {
            order: order.iter().map(|s| Symbol::new(s)).collect(),
            relations: Vec::new(),
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.order
    }

    fn position(&self, s: Symbol) -> Result<usize, CoeffError> {
        self.order
            .iter()
            .position(|t| *t == s)
            .ok_or_else(|| CoeffError::UnknownSymbol(s.name()))
    }

    pub fn with_relation(
        mut self,
        symbol: &str,
        degree: u32,
        rhs: CentralPoly,
    ) -> Result<Self, CoeffError> {
        let sym = Symbol::new(symbol);
        let pos = self.position(sym)?;
        if self.relations.iter().any(|r| r.symbol == sym) {
            return Err(CoeffError::DuplicateRelation(symbol.to_string()));
        }
        for s in rhs.symbols() {
            match self.order.iter().position(|t| *t == s) {
                Some(p) if p < pos => {}
                _ => {
                    return Err(CoeffError::NonTriangularRelations {
                        symbol: symbol.to_string(),
                        offender: s.name(),
                    })
                }
            }
        }
        self.relations.push(Relation {
            symbol: sym,
            degree,
            rhs,
        });
        Ok(self)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Rewrites every constrained exponent below its relation degree.
    /// Symbols are processed from last to first in ring order; right sides
    /// only introduce earlier symbols, so one sweep suffices.
    pub fn reduce(&self, p: &CentralPoly) -> CentralPoly {
        let mut rels: Vec<&Relation> = self.relations.iter().collect();
        rels.sort_by_key(|r| std::cmp::Reverse(self.position(r.symbol).unwrap_or(0)));
        let mut cur = p.clone();
        for rel in rels {
            if cur.degree_in(rel.symbol) < rel.degree {
                continue;
            }
            let mut out = CentralPoly::zero();
            for (m, c) in cur.terms() {
                let e = mono_exponent(m, rel.symbol);
                let (q, r) = (e / rel.degree, e % rel.degree);
                let base = CentralPoly::monomial(mono_with_exponent(m, rel.symbol, r), c.clone());
                out.add_assign_ref(&(&base * &rel.rhs.pow(q)));
            }
            cur = out;
        }
        cur
    }
}
