//! Independent one-step rewriting with a selectable redex strategy, used to
//! test that normal forms do not depend on the order of rule application.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{AlgebraSpec, Gen, Word};
use crate::coefficients::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Position of the redex to rewrite: `(k, true)` for the single letter at
/// `k`, `(k, false)` for the pair at `k, k+1`.
fn find_redex(spec: &AlgebraSpec, w: &[Gen], strategy: Strategy) -> Option<(usize, bool)> {
    let is_redex = |k: usize| -> Option<(usize, bool)> {
        if spec.rewrite_letter(w[k]).is_some() {
            return Some((k, true));
        }
        if k + 1 < w.len() && spec.rewrite_pair(w[k], w[k + 1]).is_some() {
            return Some((k, false));
        }
        None
    };
    match strategy {
        Strategy::Leftmost => (0..w.len()).find_map(is_redex),
        Strategy::Rightmost => (0..w.len()).rev().find_map(is_redex),
    }
}

/// Reduces an arbitrary word by repeated single-redex rewriting.
pub fn reduce_with(
    spec: &AlgebraSpec,
    word: &[Gen],
    strategy: Strategy,
) -> BTreeMap<Word, Rational> {
    let mut done: BTreeMap<Word, Rational> = BTreeMap::new();
    let mut pending: Vec<(Word, Rational)> =
        vec![(word.iter().copied().collect(), Rational::one())];
    while let Some((w, c)) = pending.pop() {
        match find_redex(spec, &w, strategy) {
            None => {
                let e = done.entry(w).or_insert_with(Rational::zero);
                *e += c;
            }
            Some((k, single)) => {
                let (rep, width) = if single {
                    (spec.rewrite_letter(w[k]).expect("redex"), 1)
                } else {
                    (spec.rewrite_pair(w[k], w[k + 1]).expect("redex"), 2)
                };
                for (r, d) in rep {
                    let mut next: Word = w[..k].iter().copied().collect();
                    next.extend_from_slice(&r);
                    next.extend_from_slice(&w[k + width..]);
                    pending.push((next, &c * &d));
                }
            }
        }
    }
    done.retain(|_, c| !c.is_zero());
    done
}
