//! Invariant bilinear forms for so(n) and sp(n).

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{int, rat, Rational};
use crate::element::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    #[serde(rename = "so")]
    Orthogonal,
    #[serde(rename = "sp")]
    Symplectic,
}

impl AlgebraKind {
    pub fn short(&self) -> &'static str {
        match self {
            AlgebraKind::Orthogonal => "so",
            AlgebraKind::Symplectic => "sp",
        }
    }

    pub fn parse(s: &str) -> Option<AlgebraKind> {
        match s {
            "so" | "orthogonal" => Some(AlgebraKind::Orthogonal),
            "sp" | "symplectic" => Some(AlgebraKind::Symplectic),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("symplectic form needs even dimension, got {0}")]
    OddSymplecticDimension(usize),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("matrix is {rows}x{cols}, expected {n}x{n}")]
    DimensionMismatch { rows: usize, cols: usize, n: usize },
}

/// `lower[a][b] = ε_{ab}`, `upper[a][b] = ε^{ab}`, 0-based indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Metric {
    pub kind: AlgebraKind,
    pub n: usize,
    pub eps: Rational,
    pub lower: Vec<Vec<Rational>>,
    pub upper: Vec<Vec<Rational>>,
    pub beta: Rational,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric({}({}))", self.kind.short(), self.n)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.short(), self.n)
    }
}

pub fn make_metric(kind: AlgebraKind, n: usize) -> Result<Metric, MetricError> {
    if n < 2 {
        return Err(MetricError::DimensionTooSmall(n));
    }
    let zero = || vec![vec![Rational::zero(); n]; n];
    let (eps, lower, upper) = match kind {
        AlgebraKind::Orthogonal => {
            let mut id = zero();
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = Rational::one();
            }
            (int(1), id.clone(), id)
        }
        AlgebraKind::Symplectic => {
            if !n.is_multiple_of(2) {
                return Err(MetricError::OddSymplecticDimension(n));
            }
            let m = n / 2;
            let mut j = zero();
            let mut jinv = zero();
            for i in 0..m {
                j[i][i + m] = int(1);
                j[i + m][i] = int(-1);
                jinv[i][i + m] = int(-1);
                jinv[i + m][i] = int(1);
            }
            (int(-1), j, jinv)
        }
    };
    let beta = rat(n as i64, 2) - &eps;
    Ok(Metric {
        kind,
        n,
        eps,
        lower,
        upper,
        beta,
    })
}

impl Metric {
    pub fn new(kind: AlgebraKind, n: usize) -> Result<Metric, MetricError> {
        make_metric(kind, n)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.kind == AlgebraKind::Orthogonal
    }

    /// Nonzero entries of row `a` of the lower metric.
    pub fn lower_row(&self, a: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.lower[a]
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
    }

    pub fn upper_row(&self, a: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.upper[a]
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
    }
}

fn check_square<E>(m: &[Vec<E>], n: usize) -> Result<(), MetricError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(MetricError::DimensionMismatch {
            rows: m.len(),
            cols: m.first().map(|r| r.len()).unwrap_or(0),
            n,
        });
    }
    Ok(())
}

fn contract<E: Element>(form: &[Vec<Rational>], m: &[Vec<E>]) -> Vec<Vec<E>> {
    let n = form.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = m[0][b].zero_like();
                    for (c, f) in form[a].iter().enumerate() {
                        if !f.is_zero() {
                            acc = acc.plus(&m[c][b].scale(f));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `M_{ab} = ε_{ac} M^c_b`.
pub fn lower_index<E: Element>(m: &[Vec<E>], metric: &Metric) -> Result<Vec<Vec<E>>, MetricError> {
    check_square(m, metric.n)?;
    Ok(contract(&metric.lower, m))
}

/// `M^a_b = ε^{ac} M_{cb}`.
pub fn raise_index<E: Element>(m: &[Vec<E>], metric: &Metric) -> Result<Vec<Vec<E>>, MetricError> {
    check_square(m, metric.n)?;
    Ok(contract(&metric.upper, m))
}
