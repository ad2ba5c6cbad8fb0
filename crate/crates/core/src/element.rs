//! Arithmetic interface shared by every entry type a tensor operator can hold.
//!
//! Elements carry their own context (algebra spec, matrix backend), so the
//! `*_like` constructors build new values in the context of `self`.

use std::fmt::Debug;
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{CentralPoly, Rational, Symbol};
use crate::metric::Metric;

/// Generators of an adjoined commuting auxiliary Clifford factor and the
/// map carrying old elements into the enlarged context.
#[derive(Clone)]
pub struct Extension<E> {
    pub generators: Vec<E>,
    pub lift: Arc<dyn Fn(&E) -> E + Send + Sync>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementError {
    #[error("square of `{name}` is not central (fails to commute with {witness})")]
    NonCentralSquare { name: String, witness: String },
    #[error("symbol `{0}` is already in use")]
    DuplicateSymbol(String),
    #[error("operation not supported for this element type: {0}")]
    Unsupported(String),
}

pub trait Element: Clone + Debug + Send + Sync + PartialEq {
    fn zero_like(&self) -> Self;
    /// `c · 1` in the context of `self`.
    fn constant_like(&self, c: &CentralPoly) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scale_poly(&self, c: &CentralPoly) -> Self;
    fn is_zero(&self) -> bool;
    fn substitute(&self, sym: Symbol, value: &CentralPoly) -> Self;
    fn render(&self) -> String;
    /// `None` if `self` commutes with every generator, else a witness name.
    fn central_witness(&self) -> Option<String>;
    /// The value as a pure central polynomial, when no generators occur.
    fn as_scalar(&self) -> Option<CentralPoly>;
    /// Extends the context with a central symbol `name` satisfying
    /// `name^2 = self`, returning `name` as an element of the new context.
    /// Centrality of `self` is required against every generator, or only
    /// against `scope` when given.
    fn adjoin_square_root(&self, name: &str, scope: Option<&[Self]>) -> Result<Self, ElementError>;
    /// Re-expresses `self` in the (extended) context of `like`.
    fn rehome(&self, like: &Self) -> Self;
    /// Adjoins a commuting family `c^a` with `c^a c^b + ε c^b c^a = ε^{ab}`.
    fn clifford_extension(&self, metric: &Metric) -> Result<Extension<Self>, ElementError>;

    fn one_like(&self) -> Self {
        self.constant_like(&CentralPoly::one())
    }
    fn rational_like(&self, r: &Rational) -> Self {
        self.constant_like(&CentralPoly::constant(r.clone()))
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scale_poly(&CentralPoly::constant(r.clone()))
    }
    fn negated(&self) -> Self {
        self.scale(&crate::coefficients::int(-1))
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn commutator(&self, other: &Self) -> Self {
        self.times(other).minus(&other.times(self))
    }
    fn anticommutator(&self, other: &Self) -> Self {
        self.times(other).plus(&other.times(self))
    }
    fn is_central(&self) -> bool {
        self.central_witness().is_none()
    }
}

impl Element for CentralPoly {
    fn zero_like(&self) -> Self {
        CentralPoly::zero()
    }
    fn constant_like(&self, c: &CentralPoly) -> Self {
        c.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_poly(&self, c: &CentralPoly) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        CentralPoly::is_zero(self)
    }
    fn substitute(&self, sym: Symbol, value: &CentralPoly) -> Self {
        CentralPoly::substitute(self, sym, value)
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn central_witness(&self) -> Option<String> {
        None
    }
    fn as_scalar(&self) -> Option<CentralPoly> {
        Some(self.clone())
    }
    fn adjoin_square_root(
        &self,
        name: &str,
        _scope: Option<&[Self]>,
    ) -> Result<Self, ElementError> {
        Err(ElementError::Unsupported(format!(
            "adjoining `{}` needs an algebra context",
            name
        )))
    }
    fn rehome(&self, _like: &Self) -> Self {
        self.clone()
    }
    fn clifford_extension(&self, _metric: &Metric) -> Result<Extension<Self>, ElementError> {
        Err(ElementError::Unsupported(
            "scalar entries have no Clifford extension".into(),
        ))
    }
}
