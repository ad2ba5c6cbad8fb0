use super::{CheckResult, ConstraintReport, Ops};
use crate::element::Element;
use crate::reps::{casimir_m2, graded_split, GeneratorMatrix};

/// `[Ḡ₁ + P − εK, Ḡ₂] = 0` entrywise on `V⊗V`.
pub fn check_lie<E: Element>(gbar: &GeneratorMatrix<E>) -> CheckResult {
    let ops = Ops::new(&gbar.metric, gbar.proto());
    let g1 = ops.slot1(gbar);
    let g2 = ops.slot2(gbar);
    CheckResult::from_operator("LIE", &g1.plus(&ops.x).commutator(&g2))
}

/// The three constraints of `L(u) = uI + G` and the structural facts they
/// imply: no graded-symmetric traceless part, central trace, and
/// `Ḡ² + βḠ = m₂ I`.
pub fn check_linear<E: Element>(g: &GeneratorMatrix<E>) -> ConstraintReport<E> {
    let ops = Ops::new(&g.metric, g.proto());
    let eps = ops.eps().clone();
    let beta = ops.beta().clone();
    let g1 = ops.slot1(g);
    let g2 = ops.slot2(g);
    let mut report = ConstraintReport::new("linear evaluation");

    let c11 = ops.k.commutator(&g1.plus(&g2)).scale(&eps);
    report.push(CheckResult::from_operator("C.1.1", &c11));

    let c12 = g1
        .commutator(&g2)
        .plus(&g1.minus(&g2).times(&ops.p))
        .minus(&ops.k.commutator(&g2).scale(&eps));
    report.push(CheckResult::from_operator("C.1.2", &c12));

    let shifted = g1.minus(&ops.scalar(&beta));
    let c13 = ops
        .k
        .times(&shifted)
        .times(&g2)
        .minus(&g2.times(&shifted).times(&ops.k))
        .scale(&eps);
    report.push(CheckResult::from_operator("C.1.3", &c13));

    let split = graded_split(g);
    report.push(CheckResult::from_matrix("P1.SYM", &split.sym_traceless));
    let trace_central = match split.trace_part.central_witness() {
        None => CheckResult::zero("P1.G_CENTRAL"),
        Some(w) => CheckResult::nonzero("P1.G_CENTRAL", Vec::new(), format!("[g, {w}] != 0")),
    };
    report.push(trace_central);

    let gbar = &split.antisym;
    let quad = gbar.times(gbar).plus(&gbar.scale(&beta));
    let m2 = casimir_m2(gbar);
    let c13_value = quad.normalized_trace();
    let residual = quad.minus(&quad.scalar_like(&m2));
    report.push(CheckResult::from_matrix("C163", &residual));

    report.data.g = Some(split.trace_part);
    report.data.m2 = Some(m2);
    report.data.c13 = Some(c13_value);
    report
}
