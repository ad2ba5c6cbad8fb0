//! Constraint verdicts for linear and quadratic evaluations, the W₁₂ and χ
//! machinery, the Lie-algebra resolution, center function, fusion and
//! direct RLL checks. Every routine is generic over the entry type so the
//! same code runs on symbolic normal forms and on Fock matrices.

mod decompose;
mod linear;
mod quadratic;
mod spectral;
mod spin;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::coefficients::Rational;
use crate::element::{Element, ElementError};
use crate::metric::Metric;
use crate::reps::GeneratorMatrix;
use crate::tensorspace::{make_ipk, TensorOperator};

pub use decompose::{decompose_rll, Decomposition, RowStatus, TableRow};
pub use linear::{check_lie, check_linear};
pub use quadratic::{check_quadratic, prop5_values, Prop5Values};
pub use spectral::{center_function, fuse, linear_l, quadratic_l, verify_rll, CenterFunction};
pub use spin::{
    char_poly, check_lie_resolution, check_lie_resolution_with, check_spin_conditions, chi_eval,
    compute_w12, resolution_pair, w12_consistency, w12_index_form, Gh7Form, ResolutionPair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Zero,
    Nonzero,
}

/// A nonzero entry: 1-based index tuple and the rendered value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub entry: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn zero(id: &str) -> Self {
        CheckResult {
            id: id.to_string(),
            status: Status::Zero,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn nonzero(id: &str, indices: Vec<usize>, entry: String) -> Self {
        CheckResult {
            id: id.to_string(),
            status: Status::Nonzero,
            witness: Some(Witness { indices, entry }),
            notes: Vec::new(),
        }
    }

    /// Row indices then column indices of the first nonzero entry.
    pub fn from_operator<E: Element>(id: &str, op: &TensorOperator<E>) -> Self {
        match op.first_nonzero() {
            None => Self::zero(id),
            Some((r, c, e)) => {
                let indices = r.iter().chain(c.iter()).map(|i| i + 1).collect();
                Self::nonzero(id, indices, e.render())
            }
        }
    }

    pub fn from_matrix<E: Element>(id: &str, m: &GeneratorMatrix<E>) -> Self {
        match m.first_nonzero() {
            None => Self::zero(id),
            Some((a, b, e)) => Self::nonzero(id, vec![a + 1, b + 1], e.render()),
        }
    }

    pub fn from_element<E: Element>(id: &str, e: &E) -> Self {
        if e.is_zero() {
            Self::zero(id)
        } else {
            Self::nonzero(id, Vec::new(), e.render())
        }
    }

    /// Entries of a 4-index array, each index 0-based in storage.
    pub fn from_array4<E: Element>(id: &str, t: &[Vec<Vec<Vec<E>>>]) -> Self {
        for (a, x) in t.iter().enumerate() {
            for (b, y) in x.iter().enumerate() {
                for (c, z) in y.iter().enumerate() {
                    for (d, e) in z.iter().enumerate() {
                        if !e.is_zero() {
                            return Self::nonzero(id, vec![a + 1, b + 1, c + 1, d + 1], e.render());
                        }
                    }
                }
            }
        }
        Self::zero(id)
    }

    pub fn is_zero(&self) -> bool {
        self.status == Status::Zero
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, id: &str) -> Self {
        self.id = id.to_string();
        self
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.status, &self.witness) {
            (Status::Zero, _) => write!(f, "{}: zero", self.id),
            (Status::Nonzero, Some(w)) => {
                write!(f, "{}: nonzero at {:?}: {}", self.id, w.indices, w.entry)
            }
            (Status::Nonzero, None) => write!(f, "{}: nonzero", self.id),
        }
    }
}

/// Central values extracted along the way, kept as elements.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationData<E: Element> {
    pub g: Option<E>,
    pub h: Option<E>,
    pub a: Option<E>,
    pub m2: Option<E>,
    pub alpha: Option<E>,
    pub c26: Option<E>,
    pub c28: Option<E>,
    pub c13: Option<E>,
}

impl<E: Element> Default for EvaluationData<E> {
    fn default() -> Self {
        EvaluationData {
            g: None,
            h: None,
            a: None,
            m2: None,
            alpha: None,
            c26: None,
            c28: None,
            c13: None,
        }
    }
}

impl<E: Element> EvaluationData<E> {
    /// Rendered values keyed by name, absent ones skipped.
    pub fn rendered(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (k, v) in [
            ("g", &self.g),
            ("h", &self.h),
            ("a", &self.a),
            ("m2", &self.m2),
            ("alpha", &self.alpha),
            ("c26", &self.c26),
            ("c28", &self.c28),
            ("c13", &self.c13),
        ] {
            if let Some(e) = v {
                out.insert(k.to_string(), e.render());
            }
        }
        out
    }

    /// Fills unset fields from `other`.
    pub fn merge(&mut self, other: &EvaluationData<E>) {
        let pairs = [
            (&mut self.g, &other.g),
            (&mut self.h, &other.h),
            (&mut self.a, &other.a),
            (&mut self.m2, &other.m2),
            (&mut self.alpha, &other.alpha),
            (&mut self.c26, &other.c26),
            (&mut self.c28, &other.c28),
            (&mut self.c13, &other.c13),
        ];
        for (mine, theirs) in pairs {
            if mine.is_none() {
                mine.clone_from(theirs);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport<E: Element> {
    pub title: String,
    pub results: Vec<CheckResult>,
    pub data: EvaluationData<E>,
    pub notes: Vec<String>,
}

impl<E: Element> ConstraintReport<E> {
    pub fn new(title: &str) -> Self {
        ConstraintReport {
            title: title.to_string(),
            results: Vec::new(),
            data: EvaluationData::default(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: ConstraintReport<E>) {
        self.results.extend(other.results);
        self.data.merge(&other.data);
        self.notes.extend(other.notes);
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn all_zero(&self) -> bool {
        self.results.iter().all(|r| r.is_zero())
    }

    /// Zero verdict for `id`; panics on a missing id.
    pub fn is_zero(&self, id: &str) -> bool {
        self.get(id)
            .unwrap_or_else(|| panic!("no result `{id}` in {}", self.title))
            .is_zero()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckerError {
    #[error("Lie algebra relations fail: {0}")]
    LieViolation(CheckResult),
    #[error("W12 does not vanish: {0}")]
    W12Nonzero(CheckResult),
    #[error("Casimir m2 is not central: fails to commute with {0}")]
    NonCentralCasimir(String),
    #[error("characteristic polynomial of order {0} not supported (orders 2 and 3 only)")]
    UnsupportedOrder(u32),
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error("{0}")]
    Invalid(String),
}

/// `I, P, K, X = P − εK` on `V⊗V` in the context of one element type, with
/// helpers for slot placement.
pub(crate) struct Ops<E: Element> {
    pub metric: Metric,
    pub proto: E,
    pub i: TensorOperator<E>,
    pub p: TensorOperator<E>,
    pub k: TensorOperator<E>,
    pub x: TensorOperator<E>,
}

impl<E: Element> Ops<E> {
    pub fn new(metric: &Metric, proto: &E) -> Self {
        let proto = proto.zero_like();
        let (i, p, k) = make_ipk(metric, &proto);
        let x = p.minus(&k.scale(&metric.eps));
        Ops {
            metric: metric.clone(),
            proto,
            i,
            p,
            k,
            x,
        }
    }

    pub fn eps(&self) -> &Rational {
        &self.metric.eps
    }

    pub fn beta(&self) -> &Rational {
        &self.metric.beta
    }

    pub fn slot1(&self, m: &GeneratorMatrix<E>) -> TensorOperator<E> {
        m.one_sided(1, 2)
    }

    pub fn slot2(&self, m: &GeneratorMatrix<E>) -> TensorOperator<E> {
        m.one_sided(2, 2)
    }

    /// `c · I` for a rational `c`.
    pub fn scalar(&self, c: &Rational) -> TensorOperator<E> {
        self.i.scale(c)
    }

    /// `(1 − εP)·C`.
    pub fn left_antiproj(&self, c: &TensorOperator<E>) -> TensorOperator<E> {
        c.minus(&self.p.times(c).scale(self.eps()))
    }

    /// `C·(1 − εP)`.
    pub fn right_antiproj(&self, c: &TensorOperator<E>) -> TensorOperator<E> {
        c.minus(&c.times(&self.p).scale(self.eps()))
    }
}

pub(crate) fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

pub(crate) fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// `Σ_k coeffs[k] · M^k` with element-valued coefficients multiplying
/// from the left.
pub(crate) fn matrix_poly<E: Element>(m: &GeneratorMatrix<E>, coeffs: &[E]) -> GeneratorMatrix<E> {
    let mut acc = m.zero_like();
    let mut pw = m.identity_like();
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            pw = pw.times(m);
        }
        if !c.is_zero() {
            acc = acc.plus(&pw.left_mul(c));
        }
    }
    acc
}

/// `M − t·I` where `t` is the normalized trace; returns `(t, residual)`.
pub(crate) fn split_off_trace<E: Element>(m: &GeneratorMatrix<E>) -> (E, GeneratorMatrix<E>) {
    let t = m.normalized_trace();
    let res = m.minus(&m.scalar_like(&t));
    (t, res)
}

#[cfg(test)]
mod tests;
