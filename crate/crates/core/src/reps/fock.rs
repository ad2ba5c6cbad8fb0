//! Exact finite-dimensional realizations used as an independent oracle for
//! the symbolic engine: Clifford families on spinor Fock spaces, fermionic
//! Heisenberg pairs on occupation-number spaces, matrix units on `V`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{GeneratorMatrix, RepError};
use crate::coefficients::{
    mono_exponent, mono_mul, mono_with_exponent, CentralPoly, Monomial, Rational, Symbol,
};
use crate::element::{Element, ElementError, Extension};
use crate::metric::Metric;
use crate::ncalgebra::{AlgebraSpec, Gen, NCElement, RelationClass};

pub type Cx = Complex<Rational>;

fn cx(r: Rational) -> Cx {
    Complex::new(r, Rational::zero())
}

fn cx_text(z: &Cx) -> String {
    let re = crate::coefficients::format_rational(&z.re);
    let im = crate::coefficients::format_rational(&z.im);
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => re,
        (true, false) => format!("{im}i"),
        (false, false) => format!("({re}+{im}i)"),
    }
}

/// Sparse square matrix over `Q(i)`; zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    dim: usize,
    rows: Vec<BTreeMap<usize, Cx>>,
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, z) in row {
                parts.push(format!("({},{})={}", r + 1, c + 1, cx_text(z)));
            }
        }
        let shown = parts.len().min(4);
        let tail = if parts.len() > shown { ", ..." } else { "" };
        write!(
            f,
            "[{}x{}: {}{}]",
            self.dim,
            self.dim,
            parts[..shown].join(", "),
            tail
        )
    }
}

impl SparseMat {
    pub fn zeros(dim: usize) -> Self {
        SparseMat {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.rows[i].insert(i, Cx::one());
        }
        m
    }

    /// Single entry `z` at `(r, c)`.
    pub fn unit(dim: usize, r: usize, c: usize, z: Cx) -> Self {
        let mut m = Self::zeros(dim);
        m.add_at(r, c, z);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Cx {
        self.rows[r].get(&c).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn add_at(&mut self, r: usize, c: usize, z: Cx) {
        if z.is_zero() {
            return;
        }
        let slot = self.rows[r].entry(c).or_insert_with(Cx::zero);
        *slot += z;
        if slot.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (r, row) in o.rows.iter().enumerate() {
            for (c, z) in row {
                out.add_at(r, *c, z.clone());
            }
        }
        out
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scale(&cx(-Rational::one())))
    }

    pub fn scale(&self, z: &Cx) -> Self {
        if z.is_zero() {
            return Self::zeros(self.dim);
        }
        SparseMat {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(c, x)| (*c, x * z)).collect())
                .collect(),
        }
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, x) in row {
                for (c, y) in &o.rows[*k] {
                    out.add_at(r, *c, x * y);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.times(o).minus(&o.times(self))
    }

    /// `self ⊗ o` with `self` in the most significant position.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.dim * o.dim);
        for (r1, row1) in self.rows.iter().enumerate() {
            for (c1, x) in row1 {
                for (r2, row2) in o.rows.iter().enumerate() {
                    for (c2, y) in row2 {
                        out.add_at(r1 * o.dim + r2, c1 * o.dim + c2, x * y);
                    }
                }
            }
        }
        out
    }

    /// `Some(z)` when the matrix is `z·I`.
    pub fn as_scalar(&self) -> Option<Cx> {
        let z = self.get(0, 0);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                if *c != r || *x != z {
                    return None;
                }
            }
            if !z.is_zero() && row.is_empty() {
                return None;
            }
        }
        Some(z)
    }
}

/// Fixed data shared by every value of one matrix realization.
pub struct MatCtx {
    pub dim: usize,
    pub generators: Vec<(String, SparseMat)>,
    pub centrals: Vec<(Symbol, BTreeMap<Monomial, SparseMat>)>,
}

impl fmt::Debug for MatCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MatCtx(dim={}, gens={})",
            self.dim,
            self.generators.len()
        )
    }
}

/// Matrix with central-polynomial coefficients: `Σ_m m · A_m`.
#[derive(Clone)]
pub struct MatPoly {
    ctx: Arc<MatCtx>,
    terms: BTreeMap<Monomial, SparseMat>,
}

impl PartialEq for MatPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Debug for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatPoly({})", self.render())
    }
}

fn add_mat(terms: &mut BTreeMap<Monomial, SparseMat>, m: Monomial, a: SparseMat) {
    if a.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(x) => {
            *x = x.plus(&a);
            if x.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, a);
        }
    }
}

impl MatPoly {
    pub fn from_matrix(ctx: &Arc<MatCtx>, a: SparseMat) -> Self {
        let mut terms = BTreeMap::new();
        add_mat(&mut terms, Monomial::new(), a);
        MatPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<MatCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, SparseMat> {
        &self.terms
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, SparseMat>) -> Self {
        MatPoly {
            ctx: self.ctx.clone(),
            terms,
        }
        .reduce_centrals()
    }

    fn reduce_centrals(self) -> Self {
        if self.ctx.centrals.is_empty() {
            return self;
        }
        let mut cur = self;
        loop {
            let mut changed = false;
            let mut out = BTreeMap::new();
            for (m, a) in &cur.terms {
                let hit = cur
                    .ctx
                    .centrals
                    .iter()
                    .find(|(s, _)| mono_exponent(m, *s) >= 2);
                match hit {
                    None => add_mat(&mut out, m.clone(), a.clone()),
                    Some((s, square)) => {
                        changed = true;
                        let rest = mono_with_exponent(m, *s, mono_exponent(m, *s) - 2);
                        for (sm, sa) in square {
                            add_mat(&mut out, mono_mul(&rest, sm), sa.times(a));
                        }
                    }
                }
            }
            cur = MatPoly {
                ctx: cur.ctx.clone(),
                terms: out,
            };
            if !changed {
                return cur;
            }
        }
    }

    fn from_poly(
        ctx: &Arc<MatCtx>,
        c: &CentralPoly,
        a: &SparseMat,
    ) -> BTreeMap<Monomial, SparseMat> {
        let mut terms = BTreeMap::new();
        for (m, r) in c.terms() {
            add_mat(&mut terms, m.clone(), a.scale(&cx(r.clone())));
        }
        let _ = ctx;
        terms
    }
}

impl Element for MatPoly {
    fn zero_like(&self) -> Self {
        MatPoly {
            ctx: self.ctx.clone(),
            terms: BTreeMap::new(),
        }
    }
    fn constant_like(&self, c: &CentralPoly) -> Self {
        let id = SparseMat::identity(self.ctx.dim);
        self.with_terms(Self::from_poly(&self.ctx, c, &id))
    }
    fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, a) in &other.terms {
            add_mat(&mut terms, m.clone(), a.clone());
        }
        MatPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
    fn times(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                add_mat(&mut terms, mono_mul(m1, m2), a.times(b));
            }
        }
        self.with_terms(terms)
    }
    fn scale_poly(&self, c: &CentralPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, a) in &self.terms {
            for (m2, r) in c.terms() {
                add_mat(&mut terms, mono_mul(m1, m2), a.scale(&cx(r.clone())));
            }
        }
        self.with_terms(terms)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn substitute(&self, sym: Symbol, value: &CentralPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let e = mono_exponent(m, sym);
            if e == 0 {
                add_mat(&mut terms, m.clone(), a.clone());
                continue;
            }
            let rest = mono_with_exponent(m, sym, 0);
            for (vm, r) in value.pow(e).terms() {
                add_mat(&mut terms, mono_mul(&rest, vm), a.scale(&cx(r.clone())));
            }
        }
        self.with_terms(terms)
    }
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, a)| {
                if m.is_empty() {
                    a.to_string()
                } else {
                    format!(
                        "{}*{}",
                        CentralPoly::monomial(m.clone(), Rational::one()),
                        a
                    )
                }
            })
            .collect();
        parts.join(" + ")
    }
    fn central_witness(&self) -> Option<String> {
        for (name, gm) in &self.ctx.generators {
            if self.terms.values().any(|a| !a.commutator(gm).is_zero()) {
                return Some(name.clone());
            }
        }
        None
    }
    fn as_scalar(&self) -> Option<CentralPoly> {
        let mut out = CentralPoly::zero();
        for (m, a) in &self.terms {
            let z = a.as_scalar()?;
            if !z.im.is_zero() {
                return None;
            }
            out.add_term(m.clone(), z.re);
        }
        Some(out)
    }
    fn adjoin_square_root(&self, name: &str, scope: Option<&[Self]>) -> Result<Self, ElementError> {
        let sym = Symbol::new(name);
        let used = self.ctx.centrals.iter().any(|(s, _)| *s == sym)
            || self.terms.keys().any(|m| mono_exponent(m, sym) > 0)
            || self.ctx.generators.iter().any(|(n, _)| n == name);
        if used {
            return Err(ElementError::DuplicateSymbol(name.to_string()));
        }
        let witness = match scope {
            None => self.central_witness(),
            Some(sc) => sc
                .iter()
                .find(|x| !self.commutator(x).is_zero())
                .map(|x| x.render()),
        };
        if let Some(w) = witness {
            return Err(ElementError::NonCentralSquare {
                name: name.to_string(),
                witness: w,
            });
        }
        let mut centrals: Vec<(Symbol, BTreeMap<Monomial, SparseMat>)> = self
            .ctx
            .centrals
            .iter()
            .map(|(s, t)| (*s, t.clone()))
            .collect();
        centrals.push((sym, self.terms.clone()));
        let ctx = Arc::new(MatCtx {
            dim: self.ctx.dim,
            generators: self.ctx.generators.clone(),
            centrals,
        });
        let mut terms = BTreeMap::new();
        let m: Monomial = smallvec::smallvec![(sym, 1)];
        add_mat(&mut terms, m, SparseMat::identity(ctx.dim));
        Ok(MatPoly { ctx, terms })
    }
    fn rehome(&self, like: &Self) -> Self {
        MatPoly {
            ctx: like.ctx.clone(),
            terms: self.terms.clone(),
        }
        .reduce_centrals()
    }
    fn clifford_extension(&self, metric: &Metric) -> Result<Extension<Self>, ElementError> {
        if !metric.is_orthogonal() || !metric.n.is_multiple_of(2) {
            return Err(ElementError::Unsupported(format!(
                "matrix Clifford extension needs an orthogonal metric of even dimension, got {metric}"
            )));
        }
        let gammas = clifford_matrices(metric.n / 2);
        let gdim = gammas[0].dim();
        let id_small = SparseMat::identity(gdim);
        let id_big = SparseMat::identity(self.ctx.dim);
        let lift_mat = move |a: &SparseMat| a.kron(&id_small);
        let mut generators: Vec<(String, SparseMat)> = self
            .ctx
            .generators
            .iter()
            .map(|(n, a)| (n.clone(), lift_mat(a)))
            .collect();
        let lifted_gammas: Vec<SparseMat> = gammas.iter().map(|g| id_big.kron(g)).collect();
        for (a, g) in lifted_gammas.iter().enumerate() {
            generators.push((format!("gamma^{}", a + 1), g.clone()));
        }
        let centrals = self
            .ctx
            .centrals
            .iter()
            .map(|(s, t)| {
                (
                    *s,
                    t.iter().map(|(m, a)| (m.clone(), lift_mat(a))).collect(),
                )
            })
            .collect();
        let ctx = Arc::new(MatCtx {
            dim: self.ctx.dim * gdim,
            generators,
            centrals,
        });
        let gens = lifted_gammas
            .into_iter()
            .map(|g| MatPoly::from_matrix(&ctx, g))
            .collect();
        let target = ctx.clone();
        Ok(Extension {
            generators: gens,
            lift: Arc::new(move |e: &MatPoly| MatPoly {
                ctx: target.clone(),
                terms: e
                    .terms
                    .iter()
                    .map(|(m, a)| (m.clone(), lift_mat(a)))
                    .collect(),
            }),
        })
    }
}

/// Annihilation operators on `m` fermionic modes with the Jordan–Wigner
/// sign; mode `j` is bit `j` of the basis index.
fn annihilators(m: usize) -> Vec<SparseMat> {
    let dim = 1usize << m;
    (0..m)
        .map(|j| {
            let mut a = SparseMat::zeros(dim);
            for s in 0..dim {
                if s >> j & 1 == 1 {
                    let below = (s & ((1 << j) - 1)).count_ones();
                    let sign = if below % 2 == 0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    };
                    a.add_at(s ^ (1 << j), s, cx(sign));
                }
            }
            a
        })
        .collect()
}

fn transpose(a: &SparseMat) -> SparseMat {
    let mut out = SparseMat::zeros(a.dim);
    for (r, row) in a.rows.iter().enumerate() {
        for (c, z) in row {
            out.add_at(*c, r, z.clone());
        }
    }
    out
}

/// `c^{2j+1} = a_j + a_j†/2`, `c^{2j+2} = i(a_j − a_j†/2)`, satisfying
/// `c^a c^b + c^b c^a = δ^{ab}`.
pub fn clifford_matrices(modes: usize) -> Vec<SparseMat> {
    let half = cx(Rational::new(1.into(), 2.into()));
    let i = Complex::new(Rational::zero(), Rational::one());
    let mut out = Vec::new();
    for a in annihilators(modes) {
        let ad = transpose(&a);
        out.push(a.plus(&ad.scale(&half)));
        out.push(a.minus(&ad.scale(&half)).scale(&i));
    }
    out
}

/// Generator matrices for every supported family of an algebra.
pub struct FockBackend {
    pub spec: Arc<AlgebraSpec>,
    pub ctx: Arc<MatCtx>,
    gens: BTreeMap<Gen, SparseMat>,
}

impl fmt::Debug for FockBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockBackend({:?}, dim={})", self.spec, self.ctx.dim)
    }
}

pub fn fock_backend(spec: &Arc<AlgebraSpec>) -> Result<FockBackend, RepError> {
    let mut local: Vec<Vec<(Gen, SparseMat)>> = Vec::new();
    let mut dims = Vec::new();
    for (f, fam) in spec.families.iter().enumerate() {
        let n = fam.n;
        let mats: Vec<(Gen, SparseMat)> = match fam.class {
            RelationClass::Clifford if fam.metric.is_orthogonal() && n % 2 == 0 => {
                clifford_matrices(n / 2)
                    .into_iter()
                    .enumerate()
                    .map(|(a, m)| (Gen::new(f, 0, a, 0), m))
                    .collect()
            }
            RelationClass::HeisenbergFermionic => {
                let ann = annihilators(n);
                let mut out = Vec::new();
                for a in 0..n {
                    out.push((Gen::new(f, 0, a, 0), transpose(&ann[a])));
                }
                for b in 0..n {
                    let mut d = SparseMat::zeros(1 << n);
                    for (c, ann_c) in ann.iter().enumerate() {
                        let w = &fam.metric.lower[b][c];
                        if !w.is_zero() {
                            d = d.plus(&ann_c.scale(&cx(w.clone())));
                        }
                    }
                    out.push((Gen::new(f, 1, b, 0), d));
                }
                out
            }
            RelationClass::MatrixUnits => {
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        out.push((Gen::new(f, 0, i, j), SparseMat::unit(n, i, j, Cx::one())));
                    }
                }
                out
            }
            _ => {
                return Err(RepError::UnsupportedFamily(fam.describe()));
            }
        };
        dims.push(mats.first().map(|(_, m)| m.dim()).unwrap_or(1));
        local.push(mats);
    }
    let total: usize = dims.iter().product();
    let mut gens = BTreeMap::new();
    for (f, mats) in local.into_iter().enumerate() {
        let before: usize = dims[..f].iter().product();
        let after: usize = dims[f + 1..].iter().product();
        for (g, m) in mats {
            let big = SparseMat::identity(before)
                .kron(&m)
                .kron(&SparseMat::identity(after));
            gens.insert(g, big);
        }
    }
    let generators = spec
        .generators()
        .into_iter()
        .filter_map(|g| gens.get(&g).map(|m| (spec.gen_name(g), m.clone())))
        .collect();
    let bare = Arc::new(MatCtx {
        dim: total,
        generators,
        centrals: Vec::new(),
    });
    let mut backend = FockBackend {
        spec: spec.clone(),
        ctx: bare,
        gens,
    };
    let mut centrals = Vec::new();
    for rule in &spec.centrals {
        let sq = backend.evaluate_terms(&rule.square);
        centrals.push((rule.symbol, sq));
    }
    if !centrals.is_empty() {
        backend.ctx = Arc::new(MatCtx {
            dim: total,
            generators: backend.ctx.generators.clone(),
            centrals,
        });
    }
    Ok(backend)
}

impl FockBackend {
    pub fn dim(&self) -> usize {
        self.ctx.dim
    }

    pub fn generator(&self, g: Gen) -> &SparseMat {
        &self.gens[&g]
    }

    fn word_matrix(&self, w: &[Gen]) -> SparseMat {
        let mut acc = SparseMat::identity(self.ctx.dim);
        for g in w {
            acc = acc.times(&self.gens[g]);
        }
        acc
    }

    fn evaluate_terms<'a>(
        &self,
        terms: impl IntoIterator<Item = (&'a crate::ncalgebra::Word, &'a CentralPoly)>,
    ) -> BTreeMap<Monomial, SparseMat> {
        let mut out = BTreeMap::new();
        for (w, c) in terms {
            let a = self.word_matrix(w);
            for (m, r) in c.terms() {
                add_mat(&mut out, m.clone(), a.scale(&cx(r.clone())));
            }
        }
        out
    }

    /// The matrix polynomial of an element of `self.spec`.
    pub fn evaluate(&self, e: &NCElement) -> MatPoly {
        MatPoly {
            ctx: self.ctx.clone(),
            terms: self.evaluate_terms(e.terms()),
        }
        .reduce_centrals()
    }

    /// Evaluates a raw word product without normal ordering.
    pub fn evaluate_word(&self, w: &[Gen], coef: &CentralPoly) -> MatPoly {
        let a = self.word_matrix(w);
        MatPoly {
            ctx: self.ctx.clone(),
            terms: MatPoly::from_poly(&self.ctx, coef, &a),
        }
        .reduce_centrals()
    }

    pub fn evaluate_matrix(&self, m: &GeneratorMatrix<NCElement>) -> GeneratorMatrix<MatPoly> {
        m.convert(|e| self.evaluate(e))
    }
}
