use std::sync::Arc;

use super::{CheckResult, Ops};
use crate::coefficients::{CentralPoly, Symbol};
use crate::element::Element;
use crate::ncalgebra::{AlgebraError, AlgebraSpec, NCElement};
use crate::reps::GeneratorMatrix;
use crate::tensorspace::make_r_at;

fn u() -> CentralPoly {
    CentralPoly::symbol(Symbol::u())
}

/// `u²I + uG + H`.
pub fn quadratic_l<E: Element>(
    g: &GeneratorMatrix<E>,
    h: &GeneratorMatrix<E>,
) -> GeneratorMatrix<E> {
    let uu = u();
    g.identity_like()
        .map(|e| e.scale_poly(&(&uu * &uu)))
        .plus(&g.map(|e| e.scale_poly(&uu)))
        .plus(h)
        .with_label("L(u)")
}

/// `uI + G`.
pub fn linear_l<E: Element>(g: &GeneratorMatrix<E>) -> GeneratorMatrix<E> {
    g.identity_like()
        .map(|e| e.scale_poly(&u()))
        .plus(g)
        .with_label("L(u)")
}

/// `R₁₂(u−v) L₁(u) L₂(v) − L₂(v) L₁(u) R₁₂(u−v)`, identically in the
/// spectral symbols.
pub fn verify_rll<E: Element>(l: &GeneratorMatrix<E>) -> CheckResult {
    let ops = Ops::new(&l.metric, l.proto());
    let diff = &u() - &CentralPoly::symbol(Symbol::v());
    let r = make_r_at(&l.metric, &ops.proto, &diff);
    let l1 = l.one_sided(1, 2);
    let l2 = l
        .substitute(Symbol::u(), &CentralPoly::symbol(Symbol::v()))
        .one_sided(2, 2);
    let lhs = r.times(&l1).times(&l2);
    let rhs = l2.times(&l1).times(&r);
    CheckResult::from_operator("RLL", &lhs.minus(&rhs))
}

pub struct CenterFunction<E: Element> {
    /// `C_{ab}(u) = L_{ca}(u−β) L^c_b(u)` with both indices lowered.
    pub matrix: Vec<Vec<E>>,
    /// `(1/n) ε^{ba} C_{ab}`.
    pub c: E,
    /// `C_{ab} − c·ε_{ab}`.
    pub proportional: CheckResult,
    /// `[c(u), L_{ab}(v)]` for all entries.
    pub central: CheckResult,
}

pub fn center_function<E: Element>(l: &GeneratorMatrix<E>) -> CenterFunction<E> {
    let metric = &l.metric;
    let n = metric.n;
    let shifted = l.substitute(
        Symbol::u(),
        &(&u() - &CentralPoly::constant(metric.beta.clone())),
    );
    let low_shift = shifted.lowered();
    let zero = l.proto().zero_like();
    let matrix: Vec<Vec<E>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = zero.clone();
                    for c in 0..n {
                        let (x, y) = (&low_shift[c][a], &l.entries[c][b]);
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.plus(&x.times(y));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut c = zero.clone();
    for a in 0..n {
        for (b, f) in metric.upper_row(a) {
            // ε^{ab} C_{ba}
            c = c.plus(&matrix[b][a].scale(f));
        }
    }
    let c = c.scale(&crate::coefficients::rat(1, n as i64));
    let residual = GeneratorMatrix {
        metric: metric.clone(),
        entries: (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| matrix[a][b].minus(&c.scale(&metric.lower[a][b])))
                    .collect()
            })
            .collect(),
        label: "C - c eps".into(),
    };
    let proportional = CheckResult::from_matrix("CENTER.PROPORTIONAL", &residual);
    let lv = l.substitute(Symbol::u(), &CentralPoly::symbol(Symbol::v()));
    let comm = lv.map(|e| c.commutator(e));
    let central = CheckResult::from_matrix("CENTER.CENTRAL", &comm);
    CenterFunction {
        matrix,
        c,
        proportional,
        central,
    }
}

/// `L(u) = L⁽¹⁾(u) L⁽²⁾(u + δ)` with the two factors placed in commuting
/// copies of their algebras.
pub fn fuse(
    l1: &GeneratorMatrix<NCElement>,
    l2: &GeneratorMatrix<NCElement>,
    delta: Symbol,
) -> Result<GeneratorMatrix<NCElement>, AlgebraError> {
    let s1: &Arc<AlgebraSpec> = l1.proto().spec();
    let s2: &Arc<AlgebraSpec> = l2.proto().spec();
    let (spec, offsets) = AlgebraSpec::compose(&[s1, s2])?;
    let a = l1.map(|e| e.embed_into(&spec, offsets[0]));
    let shift = &u() + &CentralPoly::symbol(delta);
    let b = l2
        .map(|e| e.embed_into(&spec, offsets[1]))
        .substitute(Symbol::u(), &shift);
    Ok(a.times(&b).with_label("fused L(u)"))
}
