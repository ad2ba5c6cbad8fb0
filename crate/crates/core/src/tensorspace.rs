//! Operators on tensor powers of the fundamental space with entries in any
//! [`Element`] type, and the spectral R-matrix built from I, P, K.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::checker::CheckResult;
use crate::coefficients::{int, CentralPoly, Rational, Symbol};
use crate::element::Element;
use crate::metric::Metric;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("slot {0} used twice")]
    SlotCollision(usize),
    #[error("slot {slot} outside 1..={arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("operator arity {got} does not match {expected}")]
    ArityMismatch { got: usize, expected: usize },
}

/// Sparse square matrix on `V^{⊗arity}`; flattened indices put slot 1 in
/// the most significant position.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator<E: Element> {
    pub n: usize,
    pub arity: usize,
    rows: Vec<BTreeMap<usize, E>>,
    proto: E,
}

pub fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

pub fn unflatten(mut k: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in (0..arity).rev() {
        out[slot] = k % n;
        k /= n;
    }
    out
}

impl<E: Element> TensorOperator<E> {
    pub fn zeros(proto: &E, n: usize, arity: usize) -> Self {
        TensorOperator {
            n,
            arity,
            rows: vec![BTreeMap::new(); n.pow(arity as u32)],
            proto: proto.zero_like(),
        }
    }

    pub fn identity(proto: &E, n: usize, arity: usize) -> Self {
        let mut out = Self::zeros(proto, n, arity);
        let one = proto.one_like();
        for (k, row) in out.rows.iter_mut().enumerate() {
            row.insert(k, one.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn proto(&self) -> &E {
        &self.proto
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&E> {
        self.rows[row].get(&col)
    }

    pub fn entry(&self, row: usize, col: usize) -> E {
        self.get(row, col)
            .cloned()
            .unwrap_or_else(|| self.proto.zero_like())
    }

    pub fn row(&self, row: usize) -> &BTreeMap<usize, E> {
        &self.rows[row]
    }

    /// Adds `e` at `(row, col)`, dropping the entry if it cancels.
    pub fn add_entry(&mut self, row: usize, col: usize, e: E) {
        if e.is_zero() {
            return;
        }
        let slot = &mut self.rows[row];
        let next = match slot.remove(&col) {
            Some(old) => old.plus(&e),
            None => e,
        };
        if !next.is_zero() {
            slot.insert(col, next);
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// First nonzero entry in row-major order, with 0-based multi-indices.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Vec<usize>, &E)> {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some((c, e)) = row.iter().next() {
                return Some((
                    unflatten(r, self.n, self.arity),
                    unflatten(*c, self.n, self.arity),
                    e,
                ));
            }
        }
        None
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, e)| (r, *c, e)))
    }

    fn map_entries(&self, f: impl Fn(&E) -> E + Sync) -> Self {
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, e)| {
                        let v = f(e);
                        (!v.is_zero()).then_some((*c, v))
                    })
                    .collect()
            })
            .collect();
        TensorOperator {
            n: self.n,
            arity: self.arity,
            rows,
            proto: self.proto.clone(),
        }
    }

    /// Converts entries into another element type.
    pub fn convert<F: Element>(&self, proto: &F, f: impl Fn(&E) -> F + Sync) -> TensorOperator<F> {
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, e)| {
                        let v = f(e);
                        (!v.is_zero()).then_some((*c, v))
                    })
                    .collect()
            })
            .collect();
        TensorOperator {
            n: self.n,
            arity: self.arity,
            rows,
            proto: proto.zero_like(),
        }
    }

    pub fn scale_poly(&self, c: &CentralPoly) -> Self {
        self.map_entries(|e| e.scale_poly(c))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_entries(|e| e.scale(r))
    }

    /// Multiplies every entry on the left by an algebra element.
    pub fn left_mul_element(&self, x: &E) -> Self {
        self.map_entries(|e| x.times(e))
    }

    pub fn right_mul_element(&self, x: &E) -> Self {
        self.map_entries(|e| e.times(x))
    }

    pub fn negated(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn substitute(&self, sym: Symbol, value: &CentralPoly) -> Self {
        self.map_entries(|e| e.substitute(sym, value))
    }

    pub fn rehome(&self, like: &E) -> Self {
        let mut out = self.map_entries(|e| e.rehome(like));
        out.proto = like.zero_like();
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator shapes differ");
        let rows = self
            .rows
            .par_iter()
            .zip(other.rows.par_iter())
            .map(|(a, b)| {
                let mut row = a.clone();
                for (c, e) in b {
                    let next = match row.remove(c) {
                        Some(old) => old.plus(e),
                        None => e.clone(),
                    };
                    if !next.is_zero() {
                        row.insert(*c, next);
                    }
                }
                row
            })
            .collect();
        TensorOperator {
            n: self.n,
            arity: self.arity,
            rows,
            proto: self.proto.clone(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    /// Matrix product; entry products keep left-to-right order.
    pub fn times(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator shapes differ");
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, E> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.rows[*k] {
                        let p = a.times(b);
                        if p.is_zero() {
                            continue;
                        }
                        let next = match acc.remove(c) {
                            Some(old) => old.plus(&p),
                            None => p,
                        };
                        if !next.is_zero() {
                            acc.insert(*c, next);
                        }
                    }
                }
                acc
            })
            .collect();
        TensorOperator {
            n: self.n,
            arity: self.arity,
            rows,
            proto: self.proto.clone(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.times(other).minus(&other.times(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.times(other).plus(&other.times(self))
    }

    /// Places a matrix of entries (`m[a][b]` at row `a`, column `b`) in one
    /// slot, identity elsewhere.
    pub fn one_sided(m: &[Vec<E>], slot: usize, arity: usize) -> Self {
        let n = m.len();
        let proto = m[0][0].zero_like();
        let mut out = Self::zeros(&proto, n, arity);
        for r in 0..out.dim() {
            let idx = unflatten(r, n, arity);
            for b in 0..n {
                let e = &m[idx[slot - 1]][b];
                if e.is_zero() {
                    continue;
                }
                let mut cidx = idx.clone();
                cidx[slot - 1] = b;
                out.rows[r].insert(flatten(&cidx, n), e.clone());
            }
        }
        out
    }

    /// Lifts a `k`-slot operator into `arity` slots; `slots[i]` (1-based)
    /// receives the `i`-th factor.
    pub fn embed(&self, slots: &[usize], arity: usize) -> Result<Self, TensorError> {
        if slots.len() != self.arity {
            return Err(TensorError::ArityMismatch {
                got: slots.len(),
                expected: self.arity,
            });
        }
        for (i, &s) in slots.iter().enumerate() {
            if s == 0 || s > arity {
                return Err(TensorError::SlotOutOfRange { slot: s, arity });
            }
            if slots[..i].contains(&s) {
                return Err(TensorError::SlotCollision(s));
            }
        }
        let n = self.n;
        let mut out = Self::zeros(&self.proto, n, arity);
        for r in 0..out.dim() {
            let idx = unflatten(r, n, arity);
            let inner: Vec<usize> = slots.iter().map(|s| idx[s - 1]).collect();
            for (c, e) in &self.rows[flatten(&inner, n)] {
                let cin = unflatten(*c, n, self.arity);
                let mut cidx = idx.clone();
                for (k, s) in slots.iter().enumerate() {
                    cidx[s - 1] = cin[k];
                }
                out.rows[r].insert(flatten(&cidx, n), e.clone());
            }
        }
        Ok(out)
    }
}

/// `(I, P, K)` on `V⊗V` with scalar entries in the context of `proto`.
pub fn make_ipk<E: Element>(
    metric: &Metric,
    proto: &E,
) -> (TensorOperator<E>, TensorOperator<E>, TensorOperator<E>) {
    let n = metric.n;
    let id = TensorOperator::identity(proto, n, 2);
    let mut p = TensorOperator::zeros(proto, n, 2);
    let mut k = TensorOperator::zeros(proto, n, 2);
    let one = proto.one_like();
    for a1 in 0..n {
        for a2 in 0..n {
            p.rows[flatten(&[a1, a2], n)].insert(flatten(&[a2, a1], n), one.clone());
            let up = &metric.upper[a1][a2];
            if up.is_zero() {
                continue;
            }
            for b1 in 0..n {
                for b2 in 0..n {
                    let lo = &metric.lower[b1][b2];
                    if !lo.is_zero() {
                        k.rows[flatten(&[a1, a2], n)]
                            .insert(flatten(&[b1, b2], n), proto.rational_like(&(up * lo)));
                    }
                }
            }
        }
    }
    (id, p, k)
}

/// `u(u+β)I + (u+β)P − εuK` with `β` supplied explicitly.
pub fn make_r_with_beta<E: Element>(
    metric: &Metric,
    proto: &E,
    beta: &Rational,
) -> TensorOperator<E> {
    let (i, p, k) = make_ipk(metric, proto);
    let u = CentralPoly::symbol(Symbol::u());
    let b = CentralPoly::constant(beta.clone());
    let u_plus_b = &u + &b;
    i.scale_poly(&(&u * &u_plus_b))
        .plus(&p.scale_poly(&u_plus_b))
        .minus(&k.scale_poly(&u.scale(&metric.eps)))
}

pub fn make_r<E: Element>(metric: &Metric, proto: &E) -> TensorOperator<E> {
    make_r_with_beta(metric, proto, &metric.beta)
}

/// `R(x)` for a spectral polynomial `x`.
pub fn make_r_at<E: Element>(metric: &Metric, proto: &E, x: &CentralPoly) -> TensorOperator<E> {
    make_r(metric, proto).substitute(Symbol::u(), x)
}

fn ybe_residual(metric: &Metric, beta: &Rational) -> TensorOperator<CentralPoly> {
    let proto = CentralPoly::zero();
    let r = make_r_with_beta(metric, &proto, beta);
    let u = CentralPoly::symbol(Symbol::u());
    let v = CentralPoly::symbol(Symbol::v());
    let at = |x: &CentralPoly| r.substitute(Symbol::u(), x);
    let r12 = at(&u).embed(&[1, 2], 3).expect("valid slots");
    let r13 = at(&(&u + &v)).embed(&[1, 3], 3).expect("valid slots");
    let r23 = at(&v).embed(&[2, 3], 3).expect("valid slots");
    let lhs = r12.times(&r13).times(&r23);
    let rhs = r23.times(&r13).times(&r12);
    lhs.minus(&rhs)
}

/// Yang–Baxter equation on `V⊗V⊗V`, identically in `u, v`.
pub fn verify_ybe(metric: &Metric) -> CheckResult {
    CheckResult::from_operator("YBE", &ybe_residual(metric, &metric.beta))
}

/// `PK = εK = KP`, `K² = nεK`, `P² = I`, each as a residual.
pub fn verify_structural(metric: &Metric) -> Vec<CheckResult> {
    let proto = CentralPoly::zero();
    let (i, p, k) = make_ipk(metric, &proto);
    let ek = k.scale(&metric.eps);
    let nek = ek.scale(&int(metric.n as i64));
    vec![
        CheckResult::from_operator("KP.PK", &p.times(&k).minus(&ek)),
        CheckResult::from_operator("KP.KP", &k.times(&p).minus(&ek)),
        CheckResult::from_operator("KP.K2", &k.times(&k).minus(&nek)),
        CheckResult::from_operator("KP.P2", &p.times(&p).minus(&i)),
    ]
}

/// The same check with a substituted constant in place of β.
pub fn verify_ybe_with_beta(metric: &Metric, beta: &Rational) -> CheckResult {
    CheckResult::from_operator("YBE", &ybe_residual(metric, beta))
}

/// `(½(C + PCP), ½(C − PCP))`.
pub fn sym_split<E: Element>(
    c: &TensorOperator<E>,
    metric: &Metric,
) -> Result<(TensorOperator<E>, TensorOperator<E>), TensorError> {
    if c.arity != 2 {
        return Err(TensorError::ArityMismatch {
            got: c.arity,
            expected: 2,
        });
    }
    let (_, p, _) = make_ipk(metric, c.proto());
    let pcp = p.times(c).times(&p);
    let half = Rational::new(1.into(), 2.into());
    Ok((c.plus(&pcp).scale(&half), c.minus(&pcp).scale(&half)))
}
