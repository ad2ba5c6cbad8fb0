use proptest::prelude::*;

use super::*;
use crate::coefficients::{int, rat, CentralPoly, Symbol};
use crate::element::Element;
use crate::metric::{make_metric, AlgebraKind, Metric};
use crate::ncalgebra::NCElement;
use crate::reps::{
    fock_backend, fundamental_rep, js_rep, r_as_quadratic, spinor_rep, GeneratorMatrix,
};
use crate::tensorspace::verify_ybe;

fn so(n: usize) -> Metric {
    make_metric(AlgebraKind::Orthogonal, n).unwrap()
}

fn sp(n: usize) -> Metric {
    make_metric(AlgebraKind::Symplectic, n).unwrap()
}

fn ids_nonzero<E: Element>(r: &ConstraintReport<E>) -> Vec<String> {
    r.results
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.id.clone())
        .collect()
}

fn trace_sq(g: &GeneratorMatrix<NCElement>) -> NCElement {
    crate::reps::casimir_m2(g).scale(&int(g.n() as i64))
}

#[test]
fn lie_relations_on_builders_and_perturbation() {
    assert!(check_lie(&spinor_rep(&so(4))).is_zero());
    assert!(check_lie(&js_rep(&sp(2))).is_zero());
    let mut g = spinor_rep(&so(4));
    g.entries[0][1] = g.entries[0][1].plus(&g.entries[0][1].one_like());
    let res = check_lie(&g);
    assert!(!res.is_zero());
    assert!(res.witness.is_some());
}

#[test]
fn linear_constraints() {
    let r = check_linear(&spinor_rep(&sp(2)));
    assert!(r.all_zero(), "{:?}", ids_nonzero(&r));
    assert_eq!(
        r.data.m2.unwrap().as_scalar(),
        Some(CentralPoly::constant(rat(-3, 4)))
    );

    let r = check_linear(&fundamental_rep(&so(3)));
    assert!(r.is_zero("C.1.1") && r.is_zero("C.1.2"));
    let c13 = r.get("C.1.3").unwrap();
    assert!(!c13.is_zero());
    assert!(c13.witness.is_some());

    let r = check_linear(&js_rep(&sp(4)));
    assert!(!r.is_zero("C.1.3"));
    // two singlets and a doublet: the quadratic identity holds with central m₂
    assert!(check_linear(&js_rep(&sp(2))).all_zero());
}

#[test]
fn fundamental_sp2_is_the_two_dimensional_spin_rep() {
    // sp(2) ≅ sl(2) and its defining rep behaves like a spinor: no witness
    let r = check_linear(&fundamental_rep(&sp(2)));
    assert!(r.all_zero(), "{:?}", ids_nonzero(&r));
}

#[test]
fn js_linear_verdict_matches_fock_matrices() {
    let g = js_rep(&sp(2));
    let backend = fock_backend(g.proto().spec()).unwrap();
    let symbolic = check_linear(&g);
    let matrix = check_linear(&backend.evaluate_matrix(&g));
    for (a, b) in symbolic.results.iter().zip(&matrix.results) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.is_zero(), b.is_zero(), "{}", a.id);
    }
}

#[test]
fn quadratic_constraints_on_r_matrix() {
    for m in [so(3), so(4), sp(2)] {
        let (g, h) = r_as_quadratic(&m);
        let r = check_quadratic(&g, &h);
        assert!(r.all_zero(), "{m}: {:?}", ids_nonzero(&r));
        assert_eq!(r.all_zero(), verify_ybe(&m).is_zero());
    }
}

#[test]
fn quadratic_constraints_spinor_pairs() {
    let g = spinor_rep(&so(4));
    // u·(u + Ḡ) is a scalar multiple of a solution
    let r = check_quadratic(&g, &g.zero_like());
    assert!(r.all_zero(), "{:?}", ids_nonzero(&r));
    assert!(verify_rll(&quadratic_l(&g, &g.zero_like())).is_zero());

    let r = check_quadratic(&g, &g);
    let bad = ids_nonzero(&r);
    assert!(bad.iter().any(|id| id.starts_with("C.2.")), "{bad:?}");
    assert!(r
        .results
        .iter()
        .filter(|c| !c.is_zero())
        .all(|c| c.witness.is_some()));
    assert!(!verify_rll(&quadratic_l(&g, &g)).is_zero());
}

#[test]
fn w12_examples() {
    assert!(compute_w12(&js_rep(&so(3))).is_zero());
    let w = compute_w12(&spinor_rep(&so(4)));
    assert!(!w.is_zero());
    let g = spinor_rep(&so(4));
    assert!(compute_w12(&g.zero_like()).is_zero());
}

#[test]
fn w12_forms_and_contractions_agree() {
    for m in [so(3), so(4), sp(2), sp(4)] {
        for g in [spinor_rep(&m), js_rep(&m)] {
            let bad: Vec<String> = w12_consistency(&g, &trace_sq(&g))
                .into_iter()
                .filter(|c| !c.is_zero())
                .map(|c| c.id)
                .collect();
            assert!(bad.is_empty(), "{} {m}: {bad:?}", g.label);
        }
    }
}

#[test]
fn spin_condition_forms_agree() {
    let r = check_spin_conditions(&js_rep(&sp(2))).unwrap();
    assert!(r.all_zero(), "{:?}", ids_nonzero(&r));
    let r = check_spin_conditions(&spinor_rep(&so(4))).unwrap();
    for id in ["SPIN.1", "SPIN.2", "SPIN.3", "SPIN.4"] {
        assert!(!r.is_zero(id), "{id}");
    }
    assert!(r.is_zero("P2.EQUIV"));
    let r = check_spin_conditions(&fundamental_rep(&so(4))).unwrap();
    assert!(r.is_zero("P2.EQUIV"), "{:?}", r.results);
}

#[test]
fn spin_conditions_reject_non_lie_input() {
    let mut g = spinor_rep(&so(4));
    g.entries[0][1] = g.entries[0][1].plus(&g.entries[0][1].one_like());
    assert!(matches!(
        check_spin_conditions(&g),
        Err(CheckerError::LieViolation(_))
    ));
}

#[test]
fn chi_vanishes_for_js() {
    for m in [sp(2), so(4)] {
        let g = js_rep(&m);
        assert!(chi_eval(&g, &trace_sq(&g)).is_zero(), "{m}");
    }
    let g = spinor_rep(&so(4)).zero_like();
    assert!(chi_eval(&g, g.proto()).is_zero());
}

#[test]
fn char_poly_coefficients() {
    let m2 = CentralPoly::var("m");
    let c = char_poly(3, &so(4), &m2).unwrap();
    assert_eq!(c[0], CentralPoly::constant(int(3)));
    assert_eq!(c[1], &CentralPoly::constant(int(2)) - &m2.scale(&rat(1, 2)));
    assert_eq!(c[2], m2.scale(&rat(-1, 2)));
    let c = char_poly(2, &sp(2), &m2).unwrap();
    assert_eq!(c, vec![CentralPoly::constant(int(2)), m2.scale(&int(-1))]);
    assert!(matches!(
        char_poly(4, &so(4), &m2),
        Err(CheckerError::UnsupportedOrder(4))
    ));
}

#[test]
fn lie_resolution_stated_and_derived() {
    let g = js_rep(&sp(2));
    let stated = check_lie_resolution(&g).unwrap();
    assert!(!stated.all_zero());
    assert!(!stated.is_zero("RLL"));
    let derived = check_lie_resolution_with(&g, Gh7Form::Derived).unwrap();
    assert!(derived.all_zero(), "{:?}", ids_nonzero(&derived));
    assert!(matches!(
        check_lie_resolution(&spinor_rep(&so(4))),
        Err(CheckerError::W12Nonzero(_))
    ));
}

#[test]
fn rll_examples() {
    let (g, h) = r_as_quadratic(&so(3));
    assert!(verify_rll(&quadratic_l(&g, &h)).is_zero());
    assert!(verify_rll(&linear_l(&spinor_rep(&so(4)))).is_zero());
    assert!(!verify_rll(&linear_l(&fundamental_rep(&so(3)))).is_zero());
}

#[test]
fn decomposition_of_free_pair() {
    let (g, h) = crate::reps::free_pair(&so(2));
    let d = decompose_rll(&g, &h);
    assert!(
        d.reconstruction_derived.is_zero(),
        "{}",
        d.reconstruction_derived
    );
    assert!(!d.reconstruction.is_zero());
    assert!(!d.reconstruction_sign_flipped.is_zero());
    let z = g.zero_like();
    let d = decompose_rll(&z, &z);
    assert!(d.raw.iter().all(|c| c.is_zero()));
}

#[test]
fn center_function_examples() {
    let l = linear_l(&spinor_rep(&so(4)));
    let cf = center_function(&l);
    assert!(cf.proportional.is_zero() && cf.central.is_zero());
    let u = CentralPoly::symbol(Symbol::u());
    let expected = &(&(&u * &u) - &u) - &CentralPoly::constant(rat(3, 4));
    assert_eq!(cf.c.as_scalar(), Some(expected));

    let g = spinor_rep(&so(4)).zero_like();
    let uu = &u * &u;
    let l = g.identity_like().map(|e| e.scale_poly(&uu));
    let cf = center_function(&l);
    let shifted = &u - &CentralPoly::constant(int(1));
    assert_eq!(cf.c.as_scalar(), Some(&uu * &(&shifted * &shifted)));
    assert!(cf.proportional.is_zero());
}

#[test]
fn fusion_with_trivial_factor_keeps_verdict() {
    let m = so(4);
    let l1 = linear_l(&spinor_rep(&m));
    let spec = crate::reps::clifford_algebra(&m, "b");
    let one = GeneratorMatrix::new(
        &m,
        (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| NCElement::from_rational(&spec, if a == b { int(1) } else { int(0) }))
                    .collect()
            })
            .collect(),
        "I",
    )
    .unwrap();
    let fused = fuse(&l1, &one, Symbol::delta()).unwrap();
    assert!(verify_rll(&fused).is_zero());
}

#[test]
fn k_contraction_identities() {
    for m in [so(3), so(4), sp(2), sp(4)] {
        for g in [spinor_rep(&m), js_rep(&m)] {
            let ops = Ops::new(&m, g.proto());
            let (g1, g2) = (ops.slot1(&g), ops.slot2(&g));
            assert!(
                ops.k.times(&g2).plus(&ops.k.times(&g1)).is_zero(),
                "{} {m}",
                g.label
            );
            assert!(
                g2.times(&ops.k).plus(&g1.times(&ops.k)).is_zero(),
                "{} {m}",
                g.label
            );
        }
    }
}

#[test]
fn eighth_constraint_standard_form_agrees() {
    for m in [so(3), sp(2)] {
        let (g, h) = r_as_quadratic(&m);
        let r = check_quadratic(&g, &h);
        assert_eq!(r.is_zero("C.2.8"), r.is_zero("P5.CK21.K"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaled_generators_break_lie_relations(p in -6i64..7, q in 1i64..5) {
        let lambda = rat(p, q);
        let g = fundamental_rep(&so(3)).scale(&lambda);
        let holds = lambda == rat(0, 1) || lambda == rat(1, 1);
        prop_assert_eq!(check_lie(&g).is_zero(), holds);
    }

    #[test]
    fn linear_verdict_is_shift_invariant(p in -6i64..7, q in 1i64..5) {
        // a scalar trace part is central, so the verdicts do not move
        let g = spinor_rep(&sp(2));
        let shifted = g.plus(&g.identity_like().scale(&rat(p, q)));
        let a = check_linear(&g);
        let b = check_linear(&shifted);
        for (x, y) in a.results.iter().zip(&b.results) {
            prop_assert_eq!(x.is_zero(), y.is_zero(), "{}", x.id.clone());
        }
    }
}
