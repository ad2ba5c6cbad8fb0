//! Algebra-valued generator matrices and the concrete representations used
//! as test beds: fundamental, spinor/oscillator, Jordan–Schwinger, the
//! R-matrix read as a quadratic L, and user files.

pub mod fock;
mod repfile;

use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{int, CentralPoly, Rational};
use crate::element::Element;
use crate::metric::{lower_index, raise_index, Metric, MetricError};
use crate::ncalgebra::{AlgebraError, AlgebraSpec, Family, Gen, NCElement, ParseError};
use crate::tensorspace::{flatten, make_ipk, TensorOperator};

pub use fock::{fock_backend, FockBackend, MatPoly, SparseMat};
pub use repfile::{load_rep, load_rep_str, load_rep_str_capped, write_rep, RepFile};

#[derive(Debug, Error)]
pub enum RepError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown algebra spec: {0}")]
    UnknownAlgebraSpec(String),
    #[error("unsupported family for the matrix backend: {0}")]
    UnsupportedFamily(String),
    #[error("rep file {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `entries[a][b] = M^a_b` (0-based), all in one algebra context.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix<E: Element> {
    pub metric: Metric,
    pub entries: Vec<Vec<E>>,
    pub label: String,
}

impl<E: Element> GeneratorMatrix<E> {
    pub fn new(metric: &Metric, entries: Vec<Vec<E>>, label: &str) -> Result<Self, RepError> {
        let n = metric.n;
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(RepError::DimensionMismatch(format!(
                "expected {n}x{n} entries, got {} rows",
                entries.len()
            )));
        }
        Ok(GeneratorMatrix {
            metric: metric.clone(),
            entries,
            label: label.to_string(),
        })
    }

    fn from_fn(metric: &Metric, label: &str, f: impl Fn(usize, usize) -> E) -> Self {
        let n = metric.n;
        GeneratorMatrix {
            metric: metric.clone(),
            entries: (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect(),
            label: label.to_string(),
        }
    }

    pub fn n(&self) -> usize {
        self.metric.n
    }

    pub fn proto(&self) -> &E {
        &self.entries[0][0]
    }

    pub fn get(&self, a: usize, b: usize) -> &E {
        &self.entries[a][b]
    }

    /// `c·I` in the context of this matrix.
    pub fn scalar_like(&self, c: &E) -> Self {
        let zero = self.proto().zero_like();
        Self::from_fn(&self.metric, "scalar", |a, b| {
            if a == b {
                c.clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn identity_like(&self) -> Self {
        self.scalar_like(&self.proto().one_like())
    }

    pub fn zero_like(&self) -> Self {
        let zero = self.proto().zero_like();
        Self::from_fn(&self.metric, "zero", |_, _| zero.clone())
    }

    /// `M_{ab} = ε_{ac} M^c_b`.
    pub fn lowered(&self) -> Vec<Vec<E>> {
        lower_index(&self.entries, &self.metric).expect("square by construction")
    }

    pub fn from_lowered(metric: &Metric, lowered: &[Vec<E>], label: &str) -> Self {
        GeneratorMatrix {
            metric: metric.clone(),
            entries: raise_index(lowered, metric).expect("square by construction"),
            label: label.to_string(),
        }
    }

    pub fn map(&self, f: impl Fn(&E) -> E) -> Self {
        GeneratorMatrix {
            metric: self.metric.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn convert<F: Element>(&self, f: impl Fn(&E) -> F) -> GeneratorMatrix<F> {
        GeneratorMatrix {
            metric: self.metric.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (row, orow) in out.entries.iter_mut().zip(&o.entries) {
            for (e, x) in row.iter_mut().zip(orow) {
                *e = e.plus(x);
            }
        }
        out
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn negated(&self) -> Self {
        self.map(|e| e.negated())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|e| e.scale(r))
    }

    /// Entrywise left multiplication by an algebra element.
    pub fn left_mul(&self, x: &E) -> Self {
        self.map(|e| x.times(e))
    }

    /// Matrix product with entries multiplied in order.
    pub fn times(&self, o: &Self) -> Self {
        let n = self.n();
        let zero = self.proto().zero_like();
        Self::from_fn(&self.metric, &self.label, |a, c| {
            let mut acc = zero.clone();
            for b in 0..n {
                let (x, y) = (&self.entries[a][b], &o.entries[b][c]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.plus(&x.times(y));
                }
            }
            acc
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.identity_like();
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.times(o).minus(&o.times(self))
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.times(o).plus(&o.times(self))
    }

    /// `Σ_a M^a_a`.
    pub fn trace(&self) -> E {
        let mut acc = self.proto().zero_like();
        for a in 0..self.n() {
            acc = acc.plus(&self.entries[a][a]);
        }
        acc
    }

    /// `(1/n)·tr M`.
    pub fn normalized_trace(&self) -> E {
        self.trace()
            .scale(&Rational::new(1.into(), (self.n() as i64).into()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    /// First nonzero entry as `(a, b, entry)`, 0-based.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &E)> {
        for (a, row) in self.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    return Some((a, b, e));
                }
            }
        }
        None
    }

    pub fn substitute(&self, sym: crate::coefficients::Symbol, value: &CentralPoly) -> Self {
        self.map(|e| e.substitute(sym, value))
    }

    pub fn rehome(&self, like: &E) -> Self {
        self.map(|e| e.rehome(like))
    }

    /// The matrix placed in `slot` of `V^{⊗arity}`.
    pub fn one_sided(&self, slot: usize, arity: usize) -> TensorOperator<E> {
        TensorOperator::one_sided(&self.entries, slot, arity)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }
}

/// Trace part, graded-antisymmetric part, traceless graded-symmetric part.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDecomposition<E: Element> {
    pub trace_part: E,
    pub antisym: GeneratorMatrix<E>,
    pub sym_traceless: GeneratorMatrix<E>,
}

impl<E: Element> GradedDecomposition<E> {
    pub fn reassemble(&self) -> GeneratorMatrix<E> {
        self.antisym
            .scalar_like(&self.trace_part)
            .plus(&self.antisym)
            .plus(&self.sym_traceless)
    }
}

pub fn graded_split<E: Element>(m: &GeneratorMatrix<E>) -> GradedDecomposition<E> {
    let n = m.n();
    let eps = &m.metric.eps;
    let t = m.normalized_trace();
    let low = m.lowered();
    let half = Rational::new(1.into(), 2.into());
    let removed: Vec<Vec<E>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| low[a][b].minus(&t.scale(&m.metric.lower[a][b])))
                .collect()
        })
        .collect();
    let part = |sign: &Rational| -> Vec<Vec<E>> {
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        removed[a][b]
                            .plus(&removed[b][a].scale(&(sign * eps)))
                            .scale(&half)
                    })
                    .collect()
            })
            .collect()
    };
    GradedDecomposition {
        trace_part: t,
        antisym: GeneratorMatrix::from_lowered(&m.metric, &part(&int(-1)), "antisym"),
        sym_traceless: GeneratorMatrix::from_lowered(&m.metric, &part(&int(1)), "sym_traceless"),
    }
}

/// `(1/n) Σ G^a_b G^b_a`.
pub fn casimir_m2<E: Element>(g: &GeneratorMatrix<E>) -> E {
    g.times(g).normalized_trace()
}

fn lowered_to_matrix(
    metric: &Metric,
    label: &str,
    low: Vec<Vec<NCElement>>,
) -> GeneratorMatrix<NCElement> {
    GeneratorMatrix::from_lowered(metric, &low, label)
}

/// Algebra generated by matrix units `E_i_j` acting on the fundamental space.
pub fn matrix_unit_algebra(metric: &Metric) -> Arc<AlgebraSpec> {
    AlgebraSpec::new(metric, vec![Family::matrix_units("E", metric)]).expect("single family")
}

fn unit(spec: &Arc<AlgebraSpec>, i: usize, j: usize) -> NCElement {
    NCElement::generator(spec, Gen::new(0, 0, i, j))
}

/// Lowered generators `G_{ab} = e_{ba} − ε e_{ab}` acting on `V`, where
/// `(e_{ab})^c_d = δ^c_a ε_{bd}`.
pub fn fundamental_rep(metric: &Metric) -> GeneratorMatrix<NCElement> {
    let spec = matrix_unit_algebra(metric);
    let n = metric.n;
    let e = |a: usize, b: usize| -> NCElement {
        let mut acc = NCElement::zero(&spec);
        for (d, f) in metric.lower_row(b) {
            acc = acc.add(&unit(&spec, a, d).scale(f));
        }
        acc
    };
    let low: Vec<Vec<NCElement>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| e(b, a).minus(&e(a, b).scale(&metric.eps)))
                .collect()
        })
        .collect();
    lowered_to_matrix(metric, "fundamental", low)
}

/// Clifford (orthogonal) or oscillator (symplectic) algebra with one family `c`.
pub fn clifford_algebra(metric: &Metric, name: &str) -> Arc<AlgebraSpec> {
    AlgebraSpec::new(metric, vec![Family::clifford(name, metric)]).expect("single family")
}

/// `G^a_b = (ε/2)δ^a_b − c^a c_b` over a given Clifford/oscillator algebra
/// whose family `family` carries the generators.
pub fn spinor_rep_in(
    metric: &Metric,
    spec: &Arc<AlgebraSpec>,
    family: usize,
) -> GeneratorMatrix<NCElement> {
    let c_up = |a: usize| NCElement::generator(spec, Gen::new(family, 0, a, 0));
    let c_down = |b: usize| {
        let mut acc = NCElement::zero(spec);
        for (d, f) in metric.lower_row(b) {
            acc = acc.add(&c_up(d).scale(f));
        }
        acc
    };
    let half_eps = &metric.eps / int(2);
    GeneratorMatrix::from_fn(metric, "spinor", |a, b| {
        let diag = if a == b {
            NCElement::from_rational(spec, half_eps.clone())
        } else {
            NCElement::zero(spec)
        };
        diag.minus(&c_up(a).mul(&c_down(b)))
    })
}

pub fn spinor_rep(metric: &Metric) -> GeneratorMatrix<NCElement> {
    spinor_rep_in(metric, &clifford_algebra(metric, "c"), 0)
}

/// Heisenberg pairs `x_a, d_a`, bosonic for so and fermionic for sp.
pub fn heisenberg_algebra(metric: &Metric) -> Arc<AlgebraSpec> {
    AlgebraSpec::new(
        metric,
        vec![Family::heisenberg(
            "x",
            "d",
            metric,
            !metric.is_orthogonal(),
        )],
    )
    .expect("single family")
}

/// Lowered `G_{ab} = x_a ∂_b − ε x_b ∂_a`.
pub fn js_rep(metric: &Metric) -> GeneratorMatrix<NCElement> {
    let spec = heisenberg_algebra(metric);
    let n = metric.n;
    let x = |a: usize| NCElement::generator(&spec, Gen::new(0, 0, a, 0));
    let d = |a: usize| NCElement::generator(&spec, Gen::new(0, 1, a, 0));
    let low: Vec<Vec<NCElement>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| x(a).mul(&d(b)).minus(&x(b).mul(&d(a)).scale(&metric.eps)))
                .collect()
        })
        .collect();
    lowered_to_matrix(metric, "js", low)
}

/// Reads a two-slot scalar operator as an `End V`-valued matrix acting on
/// the second slot: `M^a_b = Σ_{c,d} op^{ac}_{bd} E_{cd}`.
pub fn operator_as_matrix(
    metric: &Metric,
    spec: &Arc<AlgebraSpec>,
    op: &TensorOperator<CentralPoly>,
    label: &str,
) -> GeneratorMatrix<NCElement> {
    let n = metric.n;
    GeneratorMatrix::from_fn(metric, label, |a, b| {
        let mut acc = NCElement::zero(spec);
        for c in 0..n {
            for d in 0..n {
                if let Some(x) = op.get(flatten(&[a, c], n), flatten(&[b, d], n)) {
                    acc = acc.add(&unit(spec, c, d).scale_by(x));
                }
            }
        }
        acc
    })
}

/// `(G, H) = (βI + P − εK, βP)` read in the second slot, so that
/// `u²I + uG + H` is the R-matrix.
pub fn r_as_quadratic(metric: &Metric) -> (GeneratorMatrix<NCElement>, GeneratorMatrix<NCElement>) {
    let spec = matrix_unit_algebra(metric);
    let z = CentralPoly::zero();
    let (i, p, k) = make_ipk(metric, &z);
    let g = i.scale(&metric.beta).plus(&p).minus(&k.scale(&metric.eps));
    let h = p.scale(&metric.beta);
    (
        operator_as_matrix(metric, &spec, &g, "r-quadratic G"),
        operator_as_matrix(metric, &spec, &h, "r-quadratic H"),
    )
}

/// Free algebra with generator labels `G_i_j`, `H_i_j`.
pub fn free_pair(metric: &Metric) -> (GeneratorMatrix<NCElement>, GeneratorMatrix<NCElement>) {
    let spec =
        AlgebraSpec::new(metric, vec![Family::free(&["G", "H"], metric)]).expect("single family");
    let g = GeneratorMatrix::from_fn(metric, "free G", |a, b| {
        NCElement::generator(&spec, Gen::new(0, 0, a, b))
    });
    let h = GeneratorMatrix::from_fn(metric, "free H", |a, b| {
        NCElement::generator(&spec, Gen::new(0, 1, a, b))
    });
    (g, h)
}

/// True when the lowered matrix is graded-antisymmetric, `M_{ab} = −ε M_{ba}`.
pub fn is_graded_antisymmetric<E: Element>(m: &GeneratorMatrix<E>) -> bool {
    let low = m.lowered();
    let n = m.n();
    (0..n).all(|a| (0..n).all(|b| low[a][b].plus(&low[b][a].scale(&m.metric.eps)).is_zero()))
}

#[cfg(test)]
mod tests;
