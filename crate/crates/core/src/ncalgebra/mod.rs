//! Noncommutative algebra engine: generator words reduced to a PBW-style
//! normal order modulo Clifford, Heisenberg and matrix-unit relations.

mod parse;
pub mod rewrite;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::coefficients::{
    int, mono_with_exponent, monomial_factors, write_signed_term, CentralPoly, Rational, Symbol,
};
use crate::element::{Element, ElementError, Extension};
use crate::metric::Metric;

pub use parse::{evaluate, parse, parse_expr, print, Expr, ParseError};

pub const DEFAULT_MAX_DEGREE: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("index {index} out of range 1..={n} for `{family}`")]
    IndexOutOfRange {
        family: String,
        index: usize,
        n: usize,
    },
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error("algebra has {0} families, at most 255 supported")]
    TooManyFamilies(usize),
    #[error("family name `{0}` used twice")]
    DuplicateFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationClass {
    /// `c^a c^b + ε c^b c^a = ε^{ab}`, sign and form from the family metric.
    Clifford,
    /// `x_a ∂_b − ∂_b x_a = ε_{ba}`, x's and ∂'s commute among themselves.
    HeisenbergBosonic,
    /// `x_a ∂_b + ∂_b x_a = ε_{ba}`, x's and ∂'s anticommute among themselves.
    HeisenbergFermionic,
    /// `E_ij E_kl = δ_jk E_il`, `Σ E_ii = 1`.
    MatrixUnits,
    /// No relations inside the family.
    Free,
}

impl RelationClass {
    pub fn name(&self) -> &'static str {
        match self {
            RelationClass::Clifford => "clifford",
            RelationClass::HeisenbergBosonic => "heisenberg-bosonic",
            RelationClass::HeisenbergFermionic => "heisenberg-fermionic",
            RelationClass::MatrixUnits => "matrix-units",
            RelationClass::Free => "free",
        }
    }

    fn two_index(&self) -> bool {
        matches!(self, RelationClass::MatrixUnits | RelationClass::Free)
    }
}

/// A block of generators sharing one relation class. `parts` are the
/// generator names: one for Clifford and matrix units, `[x, d]` for
/// Heisenberg pairs, any number of labels for free families.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub class: RelationClass,
    pub parts: Vec<String>,
    pub n: usize,
    pub metric: Metric,
}

impl Family {
    pub fn clifford(name: &str, metric: &Metric) -> Family {
        Family {
            class: RelationClass::Clifford,
            parts: vec![name.to_string()],
            n: metric.n,
            metric: metric.clone(),
        }
    }

    pub fn heisenberg(x: &str, d: &str, metric: &Metric, fermionic: bool) -> Family {
        Family {
            class: if fermionic {
                RelationClass::HeisenbergFermionic
            } else {
                RelationClass::HeisenbergBosonic
            },
            parts: vec![x.to_string(), d.to_string()],
            n: metric.n,
            metric: metric.clone(),
        }
    }

    pub fn matrix_units(name: &str, metric: &Metric) -> Family {
        Family {
            class: RelationClass::MatrixUnits,
            parts: vec![name.to_string()],
            n: metric.n,
            metric: metric.clone(),
        }
    }

    pub fn free(labels: &[&str], metric: &Metric) -> Family {
        Family {
            class: RelationClass::Free,
            parts: labels.iter().map(|s| s.to_string()).collect(),
            n: metric.n,
            metric: metric.clone(),
        }
    }

    /// Relation sign: +1 for commuting-type, −1 for anticommuting-type pairs.
    fn sign(&self) -> Rational {
        match self.class {
            RelationClass::Clifford => self.metric.eps.clone(),
            RelationClass::HeisenbergFermionic => int(-1),
            _ => int(1),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}[{}; n={}]",
            self.class.name(),
            self.parts.join(","),
            self.n
        )
    }
}

/// Generator id: family, part, first and second index (0-based), packed so
/// that numeric order is the normal order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen(pub u32);

impl Gen {
    pub fn new(family: usize, part: usize, i: usize, j: usize) -> Gen {
        Gen(((family as u32) << 24) | ((part as u32) << 16) | ((i as u32) << 8) | j as u32)
    }
    pub fn family(self) -> usize {
        (self.0 >> 24) as usize
    }
    pub fn part(self) -> usize {
        ((self.0 >> 16) & 0xff) as usize
    }
    pub fn i(self) -> usize {
        ((self.0 >> 8) & 0xff) as usize
    }
    pub fn j(self) -> usize {
        (self.0 & 0xff) as usize
    }
    fn with_family(self, family: usize) -> Gen {
        Gen::new(family, self.part(), self.i(), self.j())
    }
}

pub type Word = SmallVec<[Gen; 8]>;
type Combo = Vec<(Word, Rational)>;

#[derive(Debug, Clone)]
pub struct CentralRule {
    pub symbol: Symbol,
    pub square: BTreeMap<Word, CentralPoly>,
}

/// Generators, relations and adjoined centrals. Immutable once shared;
/// the product cache is interior and does not affect results.
pub struct AlgebraSpec {
    pub metric: Metric,
    pub families: Vec<Family>,
    pub centrals: Vec<CentralRule>,
    pub max_degree: usize,
    cache: RwLock<FxHashMap<(Word, Gen), Arc<Combo>>>,
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fams: Vec<String> = self.families.iter().map(|f| f.describe()).collect();
        write!(f, "AlgebraSpec({}; {})", self.metric, fams.join(" ⊗ "))
    }
}

impl AlgebraSpec {
    pub fn new(metric: &Metric, families: Vec<Family>) -> Result<Arc<AlgebraSpec>, AlgebraError> {
        if families.len() > 255 {
            return Err(AlgebraError::TooManyFamilies(families.len()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for f in &families {
            for p in &f.parts {
                if seen.contains(&p.as_str()) {
                    return Err(AlgebraError::DuplicateFamily(p.clone()));
                }
                seen.push(p);
            }
        }
        Ok(Arc::new(AlgebraSpec {
            metric: metric.clone(),
            families,
            centrals: Vec::new(),
            max_degree: DEFAULT_MAX_DEGREE,
            cache: RwLock::new(FxHashMap::default()),
        }))
    }

    /// Algebra with no generators: elements are central polynomials.
    pub fn trivial(metric: &Metric) -> Arc<AlgebraSpec> {
        AlgebraSpec::new(metric, Vec::new()).expect("empty family list is valid")
    }

    pub fn with_max_degree(&self, max_degree: usize) -> Arc<AlgebraSpec> {
        Arc::new(AlgebraSpec {
            metric: self.metric.clone(),
            families: self.families.clone(),
            centrals: self.centrals.clone(),
            max_degree,
            cache: RwLock::new(FxHashMap::default()),
        })
    }

    /// Tensor product of algebras: families are concatenated in order and
    /// generators of distinct factors commute. Clashing names get a numeric
    /// suffix. Returns the product and the family offset of each factor.
    pub fn compose(
        factors: &[&Arc<AlgebraSpec>],
    ) -> Result<(Arc<AlgebraSpec>, Vec<usize>), AlgebraError> {
        let metric = factors
            .first()
            .map(|f| f.metric.clone())
            .expect("compose needs at least one factor");
        let mut families: Vec<Family> = Vec::new();
        let mut centrals: Vec<CentralRule> = Vec::new();
        let mut offsets = Vec::new();
        for (k, spec) in factors.iter().enumerate() {
            offsets.push(families.len());
            let off = families.len();
            for fam in &spec.families {
                let mut fam = fam.clone();
                for p in fam.parts.iter_mut() {
                    let taken =
                        |name: &str| families.iter().any(|f| f.parts.iter().any(|q| q == name));
                    if taken(p) {
                        let mut suffix = k + 1;
                        while taken(&format!("{}{}", p, suffix)) {
                            suffix += 1;
                        }
                        *p = format!("{}{}", p, suffix);
                    }
                }
                families.push(fam);
            }
            for rule in &spec.centrals {
                if centrals.iter().any(|r| r.symbol == rule.symbol) {
                    return Err(ElementError::DuplicateSymbol(rule.symbol.name()).into());
                }
                centrals.push(CentralRule {
                    symbol: rule.symbol,
                    square: shift_terms(&rule.square, off),
                });
            }
        }
        let mut out = AlgebraSpec::new(&metric, families)?;
        Arc::get_mut(&mut out).expect("fresh Arc").centrals = centrals;
        Ok((out, offsets))
    }

    pub fn family_of(&self, g: Gen) -> &Family {
        &self.families[g.family()]
    }

    /// Every generator, used for centrality tests.
    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        for (f, fam) in self.families.iter().enumerate() {
            for p in 0..fam.parts.len() {
                for i in 0..fam.n {
                    if fam.class.two_index() {
                        for j in 0..fam.n {
                            out.push(Gen::new(f, p, i, j));
                        }
                    } else {
                        out.push(Gen::new(f, p, i, 0));
                    }
                }
            }
        }
        out
    }

    pub fn gen_name(&self, g: Gen) -> String {
        let fam = self.family_of(g);
        let name = &fam.parts[g.part()];
        match fam.class {
            RelationClass::Clifford => format!("{}^{}", name, g.i() + 1),
            RelationClass::HeisenbergBosonic | RelationClass::HeisenbergFermionic => {
                format!("{}_{}", name, g.i() + 1)
            }
            RelationClass::MatrixUnits | RelationClass::Free => {
                format!("{}_{}_{}", name, g.i() + 1, g.j() + 1)
            }
        }
    }

    pub fn central_symbols(&self) -> Vec<Symbol> {
        self.centrals.iter().map(|r| r.symbol).collect()
    }

    fn rule_for(&self, s: Symbol) -> Option<&CentralRule> {
        self.centrals.iter().find(|r| r.symbol == s)
    }

    /// Replacement for a single letter that is not itself a basis element.
    fn rewrite_letter(&self, x: Gen) -> Option<Combo> {
        let fam = self.family_of(x);
        if fam.class == RelationClass::MatrixUnits && x.i() == fam.n - 1 && x.j() == fam.n - 1 {
            let mut out: Combo = vec![(Word::new(), Rational::one())];
            for i in 0..fam.n - 1 {
                out.push((smallvec::smallvec![Gen::new(x.family(), 0, i, i)], int(-1)));
            }
            return Some(out);
        }
        None
    }

    /// Replacement for the adjacent pair `y x` when it is out of normal
    /// order; `None` when `y x` is already normal.
    pub(crate) fn rewrite_pair(&self, y: Gen, x: Gen) -> Option<Combo> {
        if y.family() != x.family() {
            if y.family() < x.family() {
                return None;
            }
            return Some(vec![(smallvec::smallvec![x, y], Rational::one())]);
        }
        let fam = self.family_of(x);
        let sign = fam.sign();
        match fam.class {
            RelationClass::Free => None,
            RelationClass::MatrixUnits => {
                if y.j() == x.i() {
                    let e = Gen::new(x.family(), 0, y.i(), x.j());
                    Some(vec![(smallvec::smallvec![e], Rational::one())])
                } else {
                    Some(Vec::new())
                }
            }
            RelationClass::Clifford => {
                let (a, b) = (y.i(), x.i());
                if a < b {
                    None
                } else if a == b {
                    if sign.is_one() {
                        Some(vec![(Word::new(), fam.metric.upper[a][a].clone() / int(2))])
                    } else {
                        None
                    }
                } else {
                    // c^y c^x = ε^{yx} − ε c^x c^y
                    let mut out = vec![(smallvec::smallvec![x, y], -sign.clone())];
                    let c = &fam.metric.upper[a][b];
                    if !c.is_zero() {
                        out.push((Word::new(), c.clone()));
                    }
                    Some(out)
                }
            }
            RelationClass::HeisenbergBosonic | RelationClass::HeisenbergFermionic => {
                let ky = (y.part(), y.i());
                let kx = (x.part(), x.i());
                if ky < kx {
                    None
                } else if ky == kx {
                    if fam.class == RelationClass::HeisenbergFermionic {
                        Some(Vec::new())
                    } else {
                        None
                    }
                } else if y.part() == 1 && x.part() == 0 {
                    // ∂_b x_a = s x_a ∂_b − s ε_{ba}
                    let mut out = vec![(smallvec::smallvec![x, y], sign.clone())];
                    let c = &fam.metric.lower[y.i()][x.i()];
                    if !c.is_zero() {
                        out.push((Word::new(), -(&sign * c)));
                    }
                    Some(out)
                } else {
                    Some(vec![(smallvec::smallvec![x, y], sign)])
                }
            }
        }
    }

    /// Normal form of `w·x` for a normal word `w`.
    fn mul_letter(&self, w: &Word, x: Gen) -> Arc<Combo> {
        let key = (w.clone(), x);
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(&key) {
            return hit.clone();
        }
        let out = Arc::new(self.mul_letter_uncached(w, x));
        self.cache
            .write()
            .expect("cache poisoned")
            .insert(key, out.clone());
        out
    }

    fn mul_letter_uncached(&self, w: &Word, x: Gen) -> Combo {
        if let Some(rep) = self.rewrite_letter(x) {
            let mut acc = BTreeMap::new();
            for (r, c) in rep {
                for (v, d) in self.mul_word(w, &r) {
                    add_combo_term(&mut acc, v, c.clone() * d);
                }
            }
            return acc.into_iter().collect();
        }
        let Some(&y) = w.last() else {
            return vec![(smallvec::smallvec![x], Rational::one())];
        };
        let Some(rep) = self.rewrite_pair(y, x) else {
            let mut out = w.clone();
            out.push(x);
            return vec![(out, Rational::one())];
        };
        let prefix: Word = w[..w.len() - 1].iter().copied().collect();
        let mut acc = BTreeMap::new();
        for (r, c) in rep {
            for (v, d) in self.mul_word(&prefix, &r) {
                add_combo_term(&mut acc, v, c.clone() * d);
            }
        }
        acc.into_iter().collect()
    }

    /// Normal form of `w·r` for normal `w` and arbitrary `r`.
    pub fn mul_word(&self, w: &Word, r: &[Gen]) -> Combo {
        let mut cur: Combo = vec![(w.clone(), Rational::one())];
        for &x in r {
            let mut acc = BTreeMap::new();
            for (v, c) in &cur {
                for (v2, d) in self.mul_letter(v, x).iter() {
                    add_combo_term(&mut acc, v2.clone(), c * d);
                }
            }
            cur = acc.into_iter().collect();
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Normal form of an arbitrary word.
    pub fn normal_form_word(&self, r: &[Gen]) -> Combo {
        self.mul_word(&Word::new(), r)
    }

    pub fn is_normal_word(&self, w: &[Gen]) -> bool {
        w.iter().all(|&x| self.rewrite_letter(x).is_none())
            && w.windows(2)
                .all(|p| self.rewrite_pair(p[0], p[1]).is_none())
    }
}

fn add_combo_term(acc: &mut BTreeMap<Word, Rational>, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
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

fn add_term(acc: &mut BTreeMap<Word, CentralPoly>, w: Word, c: CentralPoly) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            e.get_mut().add_assign_ref(&c);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn shift_terms(terms: &BTreeMap<Word, CentralPoly>, offset: usize) -> BTreeMap<Word, CentralPoly> {
    terms
        .iter()
        .map(|(w, c)| {
            (
                w.iter()
                    .map(|g| g.with_family(g.family() + offset))
                    .collect(),
                c.clone(),
            )
        })
        .collect()
}

/// Normal-ordered element: map from normal word to central coefficient.
#[derive(Clone)]
pub struct NCElement {
    spec: Arc<AlgebraSpec>,
    terms: BTreeMap<Word, CentralPoly>,
}

impl PartialEq for NCElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Debug for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCElement({})", self)
    }
}

impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl NCElement {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> NCElement {
        NCElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &Arc<AlgebraSpec>, c: CentralPoly) -> NCElement {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, Word::new(), c);
        NCElement {
            spec: spec.clone(),
            terms,
        }
        .reduce_centrals()
    }

    pub fn from_rational(spec: &Arc<AlgebraSpec>, r: Rational) -> NCElement {
        NCElement::constant(spec, CentralPoly::constant(r))
    }

    /// A single generator (normalized, so dependent letters expand).
    pub fn generator(spec: &Arc<AlgebraSpec>, g: Gen) -> NCElement {
        NCElement::from_word(spec, &[g], CentralPoly::one())
    }

    /// `coef · normal_form(word)`.
    pub fn from_word(spec: &Arc<AlgebraSpec>, word: &[Gen], coef: CentralPoly) -> NCElement {
        let mut terms = BTreeMap::new();
        for (w, c) in spec.normal_form_word(word) {
            add_term(&mut terms, w, coef.scale(&c));
        }
        NCElement {
            spec: spec.clone(),
            terms,
        }
        .reduce_centrals()
    }

    /// Builds an element from a term map, normalizing every word.
    pub fn from_terms(
        spec: &Arc<AlgebraSpec>,
        raw: impl IntoIterator<Item = (Word, CentralPoly)>,
    ) -> NCElement {
        let mut terms = BTreeMap::new();
        for (w, c) in raw {
            for (v, d) in spec.normal_form_word(&w) {
                add_term(&mut terms, v, c.scale(&d));
            }
        }
        NCElement {
            spec: spec.clone(),
            terms,
        }
        .reduce_centrals()
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Word, CentralPoly> {
        &self.terms
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `x` for the `x_i` letter of the named part of the family.
    pub fn gen_by_name(
        spec: &Arc<AlgebraSpec>,
        part: &str,
        i: usize,
        j: usize,
    ) -> Option<NCElement> {
        for (f, fam) in spec.families.iter().enumerate() {
            if let Some(p) = fam.parts.iter().position(|q| q == part) {
                if i >= fam.n || j >= fam.n {
                    return None;
                }
                return Some(NCElement::generator(spec, Gen::new(f, p, i, j)));
            }
        }
        None
    }

    /// Applies `s^2 ↦ S` rules until no constrained exponent reaches 2.
    fn reduce_centrals(self) -> NCElement {
        if self.spec.centrals.is_empty() {
            return self;
        }
        let mut cur = self;
        loop {
            let mut changed = false;
            let mut out: BTreeMap<Word, CentralPoly> = BTreeMap::new();
            for (w, poly) in &cur.terms {
                for (m, c) in poly.terms() {
                    let hit = m.iter().find_map(|(s, e)| {
                        if *e >= 2 {
                            cur.spec.rule_for(*s).map(|r| (r, *e))
                        } else {
                            None
                        }
                    });
                    match hit {
                        None => add_term(
                            &mut out,
                            w.clone(),
                            CentralPoly::monomial(m.clone(), c.clone()),
                        ),
                        Some((rule, e)) => {
                            changed = true;
                            let rest = CentralPoly::monomial(
                                mono_with_exponent(m, rule.symbol, e - 2),
                                c.clone(),
                            );
                            for (sw, sc) in &rule.square {
                                let coef = &rest * sc;
                                for (v, d) in cur.spec.mul_word(sw, w) {
                                    add_term(&mut out, v, coef.scale(&d));
                                }
                            }
                        }
                    }
                }
            }
            cur = NCElement {
                spec: cur.spec.clone(),
                terms: out,
            };
            if !changed {
                return cur;
            }
        }
    }

    pub fn mul(&self, other: &NCElement) -> NCElement {
        let mut terms: BTreeMap<Word, CentralPoly> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                for (v, d) in self.spec.mul_word(w1, w2) {
                    add_term(&mut terms, v, c.scale(&d));
                }
            }
        }
        NCElement {
            spec: self.spec.clone(),
            terms,
        }
        .reduce_centrals()
    }

    pub fn add(&self, other: &NCElement) -> NCElement {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut terms, w.clone(), c.clone());
        }
        NCElement {
            spec: self.spec.clone(),
            terms,
        }
    }

    pub fn scale_by(&self, c: &CentralPoly) -> NCElement {
        let mut terms = BTreeMap::new();
        for (w, p) in &self.terms {
            add_term(&mut terms, w.clone(), p * c);
        }
        NCElement {
            spec: self.spec.clone(),
            terms,
        }
        .reduce_centrals()
    }

    /// `[self, x]` is zero for every `x` in `scope`; else the first index.
    pub fn central_witness_in(&self, scope: &[NCElement]) -> Option<usize> {
        scope.iter().position(|x| !self.commutator(x).is_zero())
    }

    /// Whether the element commutes with all generators, plus a witness.
    pub fn is_central(&self) -> (bool, Option<String>) {
        match self.central_witness() {
            None => (true, None),
            Some(w) => (false, Some(w)),
        }
    }

    /// Re-labels the element into a product algebra whose factor starts at
    /// family `offset`.
    pub fn embed_into(&self, target: &Arc<AlgebraSpec>, offset: usize) -> NCElement {
        NCElement {
            spec: target.clone(),
            terms: shift_terms(&self.terms, offset),
        }
        .reduce_centrals()
    }

    /// Returns the extended spec in which `name` is central with
    /// `name^2 = square`. Centrality of `square` is checked against all
    /// generators, or only against `scope` when given.
    pub fn adjoin_central(
        square: &NCElement,
        name: &str,
        scope: Option<&[NCElement]>,
    ) -> Result<Arc<AlgebraSpec>, AlgebraError> {
        let spec = &square.spec;
        let sym = Symbol::new(name);
        let used_as_gen = spec
            .families
            .iter()
            .any(|f| f.parts.iter().any(|p| p == name));
        let in_square = square.terms.values().any(|c| c.degree_in(sym) > 0);
        if spec.rule_for(sym).is_some() || used_as_gen || in_square {
            return Err(ElementError::DuplicateSymbol(name.to_string()).into());
        }
        let witness = match scope {
            None => square.central_witness(),
            Some(sc) => square.central_witness_in(sc).map(|i| sc[i].to_string()),
        };
        if let Some(w) = witness {
            return Err(ElementError::NonCentralSquare {
                name: name.to_string(),
                witness: w,
            }
            .into());
        }
        let mut centrals = spec.centrals.clone();
        centrals.push(CentralRule {
            symbol: sym,
            square: square.terms.clone(),
        });
        Ok(Arc::new(AlgebraSpec {
            metric: spec.metric.clone(),
            families: spec.families.clone(),
            centrals,
            max_degree: spec.max_degree,
            cache: RwLock::new(FxHashMap::default()),
        }))
    }

    /// Same terms, different (compatible) spec.
    pub fn with_spec(&self, spec: &Arc<AlgebraSpec>) -> NCElement {
        NCElement {
            spec: spec.clone(),
            terms: self.terms.clone(),
        }
        .reduce_centrals()
    }

    /// Pretty rendering of a single term, shared with the printer.
    pub(crate) fn render_term(&self, out: &mut String, first: bool, w: &Word, c: &CentralPoly) {
        let gens: Vec<String> = w.iter().map(|g| self.spec.gen_name(*g)).collect();
        if c.len() == 1 {
            let (m, r) = c.sorted_terms().into_iter().next().expect("one term");
            let mut factors = monomial_factors(&m);
            factors.extend(gens);
            write_signed_term(out, first, &r, &factors);
        } else {
            let mut factors = vec![format!("({})", c)];
            factors.extend(gens);
            write_signed_term(out, first, &Rational::one(), &factors);
        }
    }
}

impl Element for NCElement {
    fn zero_like(&self) -> Self {
        NCElement::zero(&self.spec)
    }
    fn constant_like(&self, c: &CentralPoly) -> Self {
        NCElement::constant(&self.spec, c.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_poly(&self, c: &CentralPoly) -> Self {
        self.scale_by(c)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn substitute(&self, sym: Symbol, value: &CentralPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            add_term(&mut terms, w.clone(), c.substitute(sym, value));
        }
        NCElement {
            spec: self.spec.clone(),
            terms,
        }
        .reduce_centrals()
    }
    fn render(&self) -> String {
        print(self)
    }
    fn central_witness(&self) -> Option<String> {
        for g in self.spec.generators() {
            let x = NCElement::generator(&self.spec, g);
            if !self.commutator(&x).is_zero() {
                return Some(self.spec.gen_name(g));
            }
        }
        None
    }
    fn as_scalar(&self) -> Option<CentralPoly> {
        match self.terms.len() {
            0 => Some(CentralPoly::zero()),
            1 => self.terms.get(&Word::new()).cloned(),
            _ => None,
        }
    }
    fn adjoin_square_root(&self, name: &str, scope: Option<&[Self]>) -> Result<Self, ElementError> {
        self.adjoin_square_root_in(name, scope)
    }
    fn rehome(&self, like: &Self) -> Self {
        self.with_spec(&like.spec)
    }
    fn clifford_extension(&self, metric: &Metric) -> Result<Extension<Self>, ElementError> {
        let mut name = "gamma".to_string();
        while self.spec.families.iter().any(|f| f.parts.contains(&name)) {
            name.push('x');
        }
        let aux = AlgebraSpec::new(metric, vec![Family::clifford(&name, metric)])
            .map_err(|e| ElementError::Unsupported(e.to_string()))?;
        let (spec, offsets) = AlgebraSpec::compose(&[&self.spec, &aux])
            .map_err(|e| ElementError::Unsupported(e.to_string()))?;
        let fam = offsets[1];
        let generators = (0..metric.n)
            .map(|a| NCElement::generator(&spec, Gen::new(fam, 0, a, 0)))
            .collect();
        let target = spec.clone();
        Ok(Extension {
            generators,
            lift: Arc::new(move |e: &NCElement| e.with_spec(&target)),
        })
    }
}

impl NCElement {
    /// Like [`Element::adjoin_square_root`], with centrality of the square
    /// only required inside `scope`.
    pub fn adjoin_square_root_in(
        &self,
        name: &str,
        scope: Option<&[NCElement]>,
    ) -> Result<NCElement, ElementError> {
        let spec = NCElement::adjoin_central(self, name, scope).map_err(|e| match e {
            AlgebraError::Element(e) => e,
            other => ElementError::Unsupported(other.to_string()),
        })?;
        Ok(NCElement::constant(&spec, CentralPoly::var(name)))
    }
}
