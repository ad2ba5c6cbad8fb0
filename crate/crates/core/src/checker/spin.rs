use rayon::prelude::*;

use super::quadratic::check_quadratic;
use super::spectral::{quadratic_l, verify_rll};
use super::{half, matrix_poly, r, CheckResult, CheckerError, ConstraintReport, Ops};
use crate::coefficients::{int, Rational};
use crate::element::Element;
use crate::metric::Metric;
use crate::reps::{casimir_m2, GeneratorMatrix};
use crate::tensorspace::TensorOperator;

type Array4<E> = Vec<Vec<Vec<Vec<E>>>>;

/// `−(Ḡ₂ + ε)((P − εK)Ḡ₂ − εḠ₁)`.
pub fn compute_w12<E: Element>(gbar: &GeneratorMatrix<E>) -> TensorOperator<E> {
    let ops = Ops::new(&gbar.metric, gbar.proto());
    let eps = ops.eps().clone();
    let g1 = ops.slot1(gbar);
    let g2 = ops.slot2(gbar);
    let left = g2.plus(&ops.scalar(&eps));
    let right = ops.x.times(&g2).minus(&g1.scale(&eps));
    left.times(&right).negated()
}

/// Permutations of `0..k` paired with `(−ε)^{inversions}`.
fn graded_perms(k: usize, eps: &Rational) -> Vec<(Vec<usize>, Rational)> {
    fn rec(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in 0..k {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), k, &mut perms);
    let step = -eps.clone();
    perms
        .into_iter()
        .map(|p| {
            let inv = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut w = int(1);
            for _ in 0..inv {
                w *= &step;
            }
            (p, w)
        })
        .collect()
}

fn array4<E: Element>(n: usize, f: impl Fn(usize, usize, usize, usize) -> E + Sync) -> Array4<E> {
    (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|c| (0..n).map(|d| f(a, b, c, d)).collect())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `(1/8) Σ_σ (−ε)^{inv σ} G_{σ(a₁b₁} G_{a₂b₂)}` indexed `[a₁][b₁][a₂][b₂]`.
pub fn w12_index_form<E: Element>(gbar: &GeneratorMatrix<E>) -> Array4<E> {
    let low = gbar.lowered();
    let perms = graded_perms(4, &gbar.metric.eps);
    let zero = gbar.proto().zero_like();
    array4(gbar.n(), |a1, b1, a2, b2| {
        let q = [a1, b1, a2, b2];
        let mut acc = zero.clone();
        for (p, w) in &perms {
            let t = low[q[p[0]]][q[p[1]]].times(&low[q[p[2]]][q[p[3]]]);
            acc = acc.plus(&t.scale(w));
        }
        acc.scale(&r(1, 8))
    })
}

/// Lowers both row indices of an operator on `V⊗V`, indexed
/// `[a₁][b₁][a₂][b₂]`.
fn lowered_pairs<E: Element>(op: &TensorOperator<E>, metric: &Metric) -> Array4<E> {
    let n = metric.n;
    let zero = op.proto().zero_like();
    array4(n, |a1, b1, a2, b2| {
        let mut acc = zero.clone();
        for (c1, f1) in metric.lower_row(a1) {
            for (c2, f2) in metric.lower_row(a2) {
                let e = op.entry(c1 * n + c2, b1 * n + b2);
                if !e.is_zero() {
                    acc = acc.plus(&e.scale(&(f1 * f2)));
                }
            }
        }
        acc
    })
}

/// `χ(Ḡ) = Ḡ³ + (2β+ε)Ḡ² + ε(2β − m₂/2)Ḡ − m₂/2`.
pub fn chi_eval<E: Element>(gbar: &GeneratorMatrix<E>, m2: &E) -> GeneratorMatrix<E> {
    let coeffs = char_poly(3, &gbar.metric, m2).expect("order 3 supported");
    let one = m2.one_like();
    // monic cubic: constant, linear, quadratic, cubic
    matrix_poly(
        gbar,
        &[coeffs[2].clone(), coeffs[1].clone(), coeffs[0].clone(), one],
    )
}

/// Non-leading coefficients, highest degree first: order 2 gives
/// `(β, −m₂)`, order 3 gives `(ε + 2β, ε(2β − m₂/2), −m₂/2)`.
pub fn char_poly<E: Element>(order: u32, metric: &Metric, m2: &E) -> Result<Vec<E>, CheckerError> {
    let eps = &metric.eps;
    let beta = &metric.beta;
    let one = m2.one_like();
    match order {
        2 => Ok(vec![one.scale(beta), m2.negated()]),
        3 => Ok(vec![
            one.scale(&(eps + int(2) * beta)),
            one.scale(&(eps * int(2) * beta))
                .minus(&m2.scale(&(eps / int(2)))),
            m2.scale(&r(-1, 2)),
        ]),
        p => Err(CheckerError::UnsupportedOrder(p)),
    }
}

/// Agreement of the two constructions of `W₁₂` plus the annihilation and
/// contraction identities. `trace_sq` is the unnormalized `tr Ḡ²`.
pub fn w12_consistency<E: Element>(gbar: &GeneratorMatrix<E>, trace_sq: &E) -> Vec<CheckResult> {
    let ops = Ops::new(&gbar.metric, gbar.proto());
    let eps = ops.eps().clone();
    let w = compute_w12(gbar);
    let index = w12_index_form(gbar);
    // after lowering, the closed form carries an extra factor ε
    let closed = lowered_pairs(&w.scale(&eps), &gbar.metric);
    let diff: Array4<E> = index
        .iter()
        .zip(&closed)
        .map(|(x, y)| {
            x.iter()
                .zip(y)
                .map(|(x, y)| {
                    x.iter()
                        .zip(y)
                        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a.minus(b)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut out = vec![CheckResult::from_array4("W12.FORMS", &diff)];
    out.push(CheckResult::from_operator("W12.WK", &w.times(&ops.k)));
    out.push(CheckResult::from_operator("W12.KW", &ops.k.times(&w)));
    out.push(CheckResult::from_operator(
        "W12.WP",
        &w.times(&ops.p).plus(&w.scale(&eps)),
    ));
    out.push(CheckResult::from_operator(
        "W12.PW",
        &ops.p.times(&w).plus(&w.scale(&eps)),
    ));
    let chi = chi_eval(gbar, trace_sq);
    let g2 = ops.slot2(gbar);
    let two_eps = int(2) * &eps;
    let kgw = ops
        .k
        .times(&g2)
        .times(&w)
        .plus(&ops.k.times(&ops.slot2(&chi)).scale(&two_eps));
    out.push(CheckResult::from_operator("W12.KGW", &kgw));
    let wgk = w
        .times(&g2)
        .times(&ops.k)
        .plus(&ops.slot2(&chi).times(&ops.k).scale(&two_eps));
    out.push(CheckResult::from_operator("W12.WGK", &wgk));
    out
}

/// Graded antisymmetrization of `{G_{a₁a₂}, G_{b₁b₂}}` over `(a₂, b₁, b₂)`,
/// indexed `[a₁][a₂][b₁][b₂]`.
fn spin_form1<E: Element>(low: &[Vec<E>], eps: &Rational, zero: &E) -> Array4<E> {
    let perms = graded_perms(3, eps);
    array4(low.len(), |a1, a2, b1, b2| {
        let q = [a2, b1, b2];
        let mut acc = zero.clone();
        for (p, w) in &perms {
            let t = low[a1][q[p[0]]].anticommutator(&low[q[p[1]]][q[p[2]]]);
            acc = acc.plus(&t.scale(w));
        }
        acc
    })
}

fn spin_form2<E: Element>(low: &[Vec<E>]) -> Array4<E> {
    array4(low.len(), |a1, a2, b1, b2| {
        low[a1][a2]
            .anticommutator(&low[b1][b2])
            .plus(&low[a1][b1].anticommutator(&low[b2][a2]))
            .plus(&low[a1][b2].anticommutator(&low[a2][b1]))
    })
}

/// `Ĝ² + βĜ − (ε m₂ n / 8)` with `Ĝ = ½ c^{[a}c^{b)} G_{ab}` in the algebra
/// extended by a commuting Clifford family.
fn spin_form4<E: Element>(gbar: &GeneratorMatrix<E>, m2: &E) -> Result<E, CheckerError> {
    let metric = &gbar.metric;
    let eps = &metric.eps;
    let ext = gbar.proto().clifford_extension(metric)?;
    let lift = &ext.lift;
    let gam = &ext.generators;
    let low = gbar.lowered();
    let n = metric.n;
    let mut ghat = lift(gbar.proto()).zero_like();
    for a in 0..n {
        for b in 0..n {
            if low[a][b].is_zero() {
                continue;
            }
            let pair = gam[a]
                .times(&gam[b])
                .minus(&gam[b].times(&gam[a]).scale(eps))
                .scale(&half());
            ghat = ghat.plus(&pair.times(&lift(&low[a][b])));
        }
    }
    let ghat = ghat.scale(&half());
    let c = lift(m2).scale(&(eps * int(n as i64) / int(8)));
    Ok(ghat.times(&ghat).plus(&ghat.scale(&metric.beta)).minus(&c))
}

/// The four equivalent forms of the spin condition, plus `P2.EQUIV`,
/// which is zero iff all computed forms share one verdict.
pub fn check_spin_conditions<E: Element>(
    gbar: &GeneratorMatrix<E>,
) -> Result<ConstraintReport<E>, CheckerError> {
    let lie = super::check_lie(gbar);
    if !lie.is_zero() {
        return Err(CheckerError::LieViolation(lie));
    }
    let eps = &gbar.metric.eps;
    let low = gbar.lowered();
    let zero = gbar.proto().zero_like();
    let m2 = casimir_m2(gbar);
    let mut report = ConstraintReport::new("spin conditions");
    report.push(CheckResult::from_array4(
        "SPIN.1",
        &spin_form1(&low, eps, &zero),
    ));
    report.push(CheckResult::from_array4("SPIN.2", &spin_form2(&low)));
    report.push(CheckResult::from_operator("SPIN.3", &compute_w12(gbar)));
    match spin_form4(gbar, &m2) {
        Ok(e) => report.push(CheckResult::from_element("SPIN.4", &e)),
        Err(CheckerError::Element(e)) => report.notes.push(format!("SPIN.4 not evaluated: {e}")),
        Err(e) => return Err(e),
    }
    let verdicts: Vec<(String, bool)> = report
        .results
        .iter()
        .map(|r| (r.id.clone(), r.is_zero()))
        .collect();
    let agree = verdicts.windows(2).all(|w| w[0].1 == w[1].1);
    report.push(if agree {
        CheckResult::zero("P2.EQUIV")
    } else {
        let text: Vec<String> = verdicts
            .iter()
            .map(|(id, z)| format!("{id}={}", if *z { "zero" } else { "nonzero" }))
            .collect();
        CheckResult::nonzero("P2.EQUIV", Vec::new(), text.join(","))
    });
    report.data.m2 = Some(m2);
    Ok(report)
}

/// Which relation fixes `g²` and `h` in terms of the Casimir.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gh7Form {
    /// `g² = −β² − m₂/8`, `4h = 2β² − 1 + 2βε − m₂/8` with `m₂ = tr(Ḡ²)/n`.
    AsStated,
    /// `g² = −β² − M/8`, `4h = g² − (β − ε)² − εM/2` with `M = tr Ḡ²`.
    /// Only `4h − g²` is constrained since `g` shifts the spectral parameter.
    Derived,
}

/// Ingredients of the resolution: `G = gI + Ḡ`, `H = hI + ½Ḡ² + (g + β)/2·Ḡ`
/// in the context extended by `g`.
pub struct ResolutionPair<E: Element> {
    pub g: GeneratorMatrix<E>,
    pub h: GeneratorMatrix<E>,
    pub gbar: GeneratorMatrix<E>,
    pub gc: E,
    pub hc: E,
    pub m2: E,
    /// The Casimir the central values are expressed in.
    pub casimir: E,
}

pub fn resolution_pair<E: Element>(
    gbar: &GeneratorMatrix<E>,
    form: Gh7Form,
) -> Result<ResolutionPair<E>, CheckerError> {
    let metric = &gbar.metric;
    let eps = metric.eps.clone();
    let beta = metric.beta.clone();
    let m2 = casimir_m2(gbar);
    let scope: Vec<E> = gbar
        .entries
        .iter()
        .flatten()
        .filter(|e| !e.is_zero())
        .cloned()
        .collect();
    if let Some(x) = scope.iter().find(|x| !m2.commutator(x).is_zero()) {
        return Err(CheckerError::NonCentralCasimir(x.render()));
    }
    let b2 = &beta * &beta;
    let casimir = match form {
        Gh7Form::AsStated => m2.clone(),
        Gh7Form::Derived => m2.scale(&int(metric.n as i64)),
    };
    let g_square = m2
        .one_like()
        .scale(&-b2.clone())
        .minus(&casimir.scale(&r(1, 8)));
    let gc = g_square.adjoin_square_root("g", Some(&scope))?;
    let gbar = gbar.rehome(&gc);
    let m2 = m2.rehome(&gc);
    let casimir = casimir.rehome(&gc);
    let one = gc.one_like();
    let hc = match form {
        Gh7Form::AsStated => one
            .scale(&((int(2) * &b2 - int(1) + int(2) * &beta * &eps) / int(4)))
            .minus(&casimir.scale(&r(1, 32))),
        Gh7Form::Derived => {
            let shift = &beta - &eps;
            gc.times(&gc)
                .minus(&one.scale(&(&shift * &shift)))
                .minus(&casimir.scale(&(&eps / int(2))))
                .scale(&r(1, 4))
        }
    };
    let a = gc.scale(&half());
    let g = gbar.scalar_like(&gc).plus(&gbar);
    let coeff = a.plus(&one.scale(&(&beta / int(2))));
    let h = gbar
        .scalar_like(&hc)
        .plus(&gbar.times(&gbar).scale(&half()))
        .plus(&gbar.left_mul(&coeff));
    Ok(ResolutionPair {
        g,
        h,
        gbar,
        gc,
        hc,
        m2,
        casimir,
    })
}

pub fn check_lie_resolution<E: Element>(
    gbar: &GeneratorMatrix<E>,
) -> Result<ConstraintReport<E>, CheckerError> {
    check_lie_resolution_with(gbar, Gh7Form::AsStated)
}

/// `W₁₂ = 0` and central `m₂` imply that `L(u) = u² + u(g + Ḡ) + h +
/// ½(Ḡ² + (β + g)Ḡ)` satisfies every quadratic constraint.
pub fn check_lie_resolution_with<E: Element>(
    gbar: &GeneratorMatrix<E>,
    form: Gh7Form,
) -> Result<ConstraintReport<E>, CheckerError> {
    let lie = super::check_lie(gbar);
    if !lie.is_zero() {
        return Err(CheckerError::LieViolation(lie));
    }
    let w = CheckResult::from_operator("W12", &compute_w12(gbar));
    if !w.is_zero() {
        return Err(CheckerError::W12Nonzero(w));
    }
    let metric = &gbar.metric;
    let eps = metric.eps.clone();
    let beta = metric.beta.clone();
    let mut report = ConstraintReport::new("Lie algebra resolution");
    report.push(lie);
    report.push(w);
    let m2_full = casimir_m2(gbar);
    if let Some(x) = m2_full.central_witness() {
        report.notes.push(format!(
            "m2 commutes with the Lie generators but not with {x}"
        ));
    }
    let pair = resolution_pair(gbar, form)?;
    let gb = &pair.gbar;
    let chi = chi_eval(gb, &pair.casimir);
    report.push(CheckResult::from_matrix("CHI", &chi));

    let quad = check_quadratic(&pair.g, &pair.h);
    let c26 = quad.data.c26.clone().expect("set by check_quadratic");
    let c28 = quad.data.c28.clone().expect("set by check_quadratic");
    let alpha = quad.data.alpha.clone().expect("set by check_quadratic");
    report.extend(quad);

    report.push(CheckResult::from_element("LR.C26", &c26));
    let c28_target = pair.casimir.scale(&((&eps - int(2) * &beta) / int(2)));
    report.push(CheckResult::from_element(
        "LR.C28",
        &c28.scale(&int(4)).minus(&c28_target),
    ));
    let gsq = pair.gc.times(&pair.gc);
    let alpha_prime = match form {
        Gh7Form::AsStated => alpha.plus(&gsq.scale(&int(3))),
        Gh7Form::Derived => alpha.minus(&gsq),
    };
    report.push(CheckResult::from_element("LR.ALPHA", &alpha_prime));

    let one = pair.gc.one_like();
    let four_h_minus_gsq = pair.hc.scale(&int(4)).minus(&gsq);
    let b2 = &beta * &beta;
    let quartic = matrix_poly(
        gb,
        &[
            c28.scale(&int(4)),
            one.scale(&(int(2) * &beta * &b2))
                .plus(&four_h_minus_gsq.scale(&(int(2) * &beta))),
            one.scale(&(int(5) * &b2)).plus(&four_h_minus_gsq),
            one.scale(&(int(4) * &beta)),
            one.clone(),
        ],
    );
    let shift = gb.plus(&gb.identity_like().scale(&(int(2) * &beta - &eps)));
    report.push(CheckResult::from_matrix(
        "LR.QUARTIC",
        &quartic.minus(&shift.times(&chi)),
    ));

    report.push(verify_rll(&quadratic_l(&pair.g, &pair.h)));

    report.data.g = Some(pair.gc.clone());
    report.data.h = Some(pair.hc.clone());
    report.data.a = Some(pair.gc.scale(&half()));
    report.data.m2 = Some(pair.m2.clone());
    report.data.alpha = Some(alpha);
    report.data.c26 = Some(c26);
    report.data.c28 = Some(c28);
    Ok(report)
}
