use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::checker::{check_lie, compute_w12, quadratic_l};
use crate::coefficients::{rat, Symbol};
use crate::metric::{make_metric, AlgebraKind};
use crate::ncalgebra::parse;
use crate::tensorspace::make_r_at;

fn so(n: usize) -> Metric {
    make_metric(AlgebraKind::Orthogonal, n).unwrap()
}

fn sp(n: usize) -> Metric {
    make_metric(AlgebraKind::Symplectic, n).unwrap()
}

fn small_metrics() -> Vec<Metric> {
    vec![so(2), so(3), so(4), sp(2), sp(4)]
}

fn scalar_matrix(g: &GeneratorMatrix<NCElement>, r: Rational) -> GeneratorMatrix<NCElement> {
    g.identity_like().scale(&r)
}

fn quad(g: &GeneratorMatrix<NCElement>) -> GeneratorMatrix<NCElement> {
    g.times(g).plus(&g.scale(&g.metric.beta))
}

#[test]
fn builders_satisfy_lie_relations() {
    for m in small_metrics() {
        assert!(check_lie(&fundamental_rep(&m)).is_zero(), "fundamental {m}");
        assert!(check_lie(&js_rep(&m)).is_zero(), "js {m}");
        assert!(check_lie(&spinor_rep(&m)).is_zero(), "spinor {m}");
    }
}

#[test]
fn builders_are_graded_antisymmetric() {
    for m in small_metrics() {
        for g in [fundamental_rep(&m), spinor_rep(&m), js_rep(&m)] {
            assert!(is_graded_antisymmetric(&g), "{} {m}", g.label);
            let split = graded_split(&g);
            assert!(split.trace_part.is_zero(), "{} {m}", g.label);
            assert!(split.sym_traceless.is_zero(), "{} {m}", g.label);
            assert_eq!(split.antisym.entries, g.entries);
        }
    }
}

#[test]
fn fundamental_so2_has_one_generator() {
    let g = fundamental_rep(&so(2));
    let low = g.lowered();
    assert!(low[0][0].is_zero() && low[1][1].is_zero());
    assert_eq!(low[0][1], low[1][0].negated());
    assert_eq!(low[0][1].terms().len(), 2);
}

#[test]
fn fundamental_casimir_matches_matrix_trace() {
    let m = so(3);
    let g = fundamental_rep(&m);
    let backend = fock_backend(g.proto().spec()).unwrap();
    let mats: Vec<Vec<SparseMat>> = g
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| single_matrix(&backend.evaluate(e)))
                .collect()
        })
        .collect();
    let mut sum = SparseMat::zeros(3);
    for a in 0..3 {
        for b in 0..3 {
            sum = sum.plus(&mats[a][b].times(&mats[b][a]));
        }
    }
    let third = fock::Cx::new(rat(1, 3), Rational::zero());
    let expected = sum.scale(&third);
    let symbolic = single_matrix(&backend.evaluate(&casimir_m2(&g)));
    assert_eq!(symbolic, expected);
    // Σ_{a≠b} (e_aa + e_bb) = 2(n − 1)·I
    assert_eq!(
        expected.as_scalar(),
        Some(fock::Cx::new(rat(4, 3), Rational::zero()))
    );
}

fn single_matrix(p: &MatPoly) -> SparseMat {
    match p.terms().len() {
        0 => SparseMat::zeros(p.ctx().dim),
        1 => {
            let (m, a) = p.terms().iter().next().unwrap();
            assert!(m.is_empty(), "unexpected central monomial");
            a.clone()
        }
        _ => panic!("matrix polynomial has central dependence"),
    }
}

#[test]
fn spinor_quadratic_relation_values() {
    for (m, value) in [
        (so(4), rat(3, 4)),
        (sp(2), rat(-3, 4)),
        (so(6), rat(5, 4)),
        (sp(4), rat(-5, 4)),
    ] {
        let g = spinor_rep(&m);
        assert_eq!(
            quad(&g).entries,
            scalar_matrix(&g, value.clone()).entries,
            "{m}"
        );
        // (ε/4)(n − ε)
        let formula =
            &m.eps / crate::coefficients::int(4) * (crate::coefficients::int(m.n as i64) - &m.eps);
        assert_eq!(formula, value);
    }
}

#[test]
fn spinor_so2_entry_matches_text() {
    let m = so(2);
    let g = spinor_rep(&m);
    let spec = g.proto().spec().clone();
    assert_eq!(g.entries[0][0], parse("1/2 - c^1*c_1", &spec).unwrap());
}

#[test]
fn js_sp2_diagonal_entry() {
    let m = sp(2);
    let g = js_rep(&m);
    let spec = g.proto().spec().clone();
    assert_eq!(g.lowered()[0][0], parse("2*x_1*d_1", &spec).unwrap());
}

#[test]
fn js_w12_vanishes_symbolically_and_on_fock_matrices() {
    assert!(compute_w12(&js_rep(&so(3))).is_zero());
    let g = js_rep(&sp(4));
    assert!(compute_w12(&g).is_zero());
    let backend = fock_backend(g.proto().spec()).unwrap();
    assert_eq!(backend.dim(), 16);
    let gm = backend.evaluate_matrix(&g);
    assert!(compute_w12(&gm).is_zero());
}

#[test]
fn r_as_quadratic_reassembles_r_matrix() {
    for m in [so(3), sp(2)] {
        let (g, h) = r_as_quadratic(&m);
        let l = quadratic_l(&g, &h);
        let spec = g.proto().spec().clone();
        let r = make_r_at(&m, &CentralPoly::zero(), &CentralPoly::symbol(Symbol::u()));
        let expected = operator_as_matrix(&m, &spec, &r, "R");
        assert_eq!(l.entries, expected.entries, "{m}");
    }
}

#[test]
fn r_as_quadratic_trace_by_brute_force() {
    let m = sp(2);
    let n = m.n;
    let (g, _) = r_as_quadratic(&m);
    let backend = fock_backend(g.proto().spec()).unwrap();
    // (1/n) Σ_a (β δ_cd + δ_ad δ_ca − ε ε^{ac} ε_{ad})  acting on e_c ↦ e_d
    let mut expected = SparseMat::zeros(n);
    for a in 0..n {
        for c in 0..n {
            for d in 0..n {
                let mut v = Rational::zero();
                if c == d {
                    v += &m.beta;
                }
                if a == d && c == a {
                    v += Rational::from_integer(1.into());
                }
                v -= &m.eps * &m.upper[a][c] * &m.lower[a][d];
                if !v.is_zero() {
                    expected.add_at(c, d, fock::Cx::new(v, Rational::zero()));
                }
            }
        }
    }
    let expected = expected.scale(&fock::Cx::new(rat(1, n as i64), Rational::zero()));
    let trace = graded_split(&g).trace_part;
    assert_eq!(single_matrix(&backend.evaluate(&trace)), expected);
    assert!(expected.as_scalar().is_some());
}

#[test]
fn graded_split_examples() {
    let m = so(2);
    let spec = clifford_algebra(&m, "c");
    let one = NCElement::from_rational(&spec, rat(1, 1));
    let zero = NCElement::zero(&spec);
    let id = GeneratorMatrix::new(
        &m,
        vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ],
        "I",
    )
    .unwrap();
    let split = graded_split(&id);
    assert_eq!(split.trace_part, one);
    assert!(split.antisym.is_zero() && split.sym_traceless.is_zero());

    let e12 = GeneratorMatrix::new(
        &m,
        vec![
            vec![zero.clone(), one.clone()],
            vec![zero.clone(), zero.clone()],
        ],
        "e12",
    )
    .unwrap();
    let split = graded_split(&e12);
    assert!(split.trace_part.is_zero());
    let half = one.scale(&rat(1, 2));
    assert_eq!(
        split.antisym.entries,
        vec![
            vec![zero.clone(), half.clone()],
            vec![half.negated(), zero.clone()]
        ]
    );
    assert_eq!(
        split.sym_traceless.entries,
        vec![vec![zero.clone(), half.clone()], vec![half, zero]]
    );
}

fn arb_entries(n: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    proptest::collection::vec(proptest::collection::vec((-5i64..6, 1i64..4), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_split_reassembles(entries in arb_entries(4), symplectic in any::<bool>()) {
        let m = if symplectic { sp(4) } else { so(4) };
        let spec = clifford_algebra(&m, "c");
        let c = |i: usize| NCElement::generator(&spec, Gen::new(0, 0, i, 0));
        let rows: Vec<Vec<NCElement>> = entries
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .map(|(b, &(p, q))| c((a + b) % 4).scale(&rat(p, q)).plus(&NCElement::from_rational(&spec, rat(q, p.abs() + 1))))
                    .collect()
            })
            .collect();
        let g = GeneratorMatrix::new(&m, rows, "random").unwrap();
        let split = graded_split(&g);
        prop_assert_eq!(split.reassemble().entries, g.entries.clone());
        prop_assert!(is_graded_antisymmetric(&split.antisym));
        let sym = split.sym_traceless.lowered();
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(sym[a][b].clone(), sym[b][a].scale(&m.eps));
            }
        }
        prop_assert!(split.sym_traceless.trace().is_zero());
    }
}

#[test]
fn casimir_values() {
    assert_eq!(
        casimir_m2(&spinor_rep(&so(4))).as_scalar(),
        Some(CentralPoly::constant(rat(3, 4)))
    );
    assert_eq!(
        casimir_m2(&spinor_rep(&sp(2))).as_scalar(),
        Some(CentralPoly::constant(rat(-3, 4)))
    );
    let g = spinor_rep(&so(4));
    assert!(casimir_m2(&g.zero_like()).is_zero());
}

#[test]
fn js_casimir_agrees_with_fock_trace() {
    let g = js_rep(&sp(2));
    let backend = fock_backend(g.proto().spec()).unwrap();
    let gm = backend.evaluate_matrix(&g);
    assert_eq!(backend.evaluate(&casimir_m2(&g)), casimir_m2(&gm));
    assert!(
        casimir_m2(&g).central_witness().is_some(),
        "commutes with generator entries only"
    );
}

#[test]
fn rep_file_round_trips() {
    for g in [spinor_rep(&so(2)), js_rep(&sp(2))] {
        let text = write_rep(&g, None);
        let back = load_rep_str(&text).unwrap();
        assert_eq!(back.g.entries, g.entries, "{text}");
        assert!(back.h.is_none());
    }
    let (g, h) = r_as_quadratic(&so(3));
    let back = load_rep_str(&write_rep(&g, Some(&h))).unwrap();
    assert_eq!(back.h.unwrap().entries, h.entries);
}

#[test]
fn rep_file_errors() {
    let text = "algebra: so\nn: 2\nfamilies: clifford c\nG[1][1] = 0\nG[1][2] = 0\nG[1][3] = 0\nG[2][1] = 0\nG[2][2] = 0\nG[2][3] = 0\n";
    assert!(matches!(
        load_rep_str(text),
        Err(RepError::DimensionMismatch(_))
    ));
    let text = "algebra: so\nn: 2\nfamilies: clifford c\nG[1][1] = 0\n";
    assert!(matches!(
        load_rep_str(text),
        Err(RepError::DimensionMismatch(_))
    ));
    let text = "algebra: so\nn: 2\nfamilies: clifford c\nG[1][1] = c^1*(\n";
    assert!(matches!(load_rep_str(text), Err(RepError::Syntax(_))));
    let text = "algebra: gl\nn: 2\nfamilies: clifford c\n";
    assert!(matches!(
        load_rep_str(text),
        Err(RepError::UnknownAlgebraSpec(_))
    ));
    let text = "algebra: so\nn: 2\nfamilies: weyl c\n";
    assert!(matches!(
        load_rep_str(text),
        Err(RepError::UnknownAlgebraSpec(_))
    ));
}

#[test]
fn clifford_fock_matrices_satisfy_relations() {
    for n in [2, 4, 6] {
        let m = so(n);
        let spec = clifford_algebra(&m, "c");
        let backend = fock_backend(&spec).unwrap();
        assert_eq!(backend.dim(), 1 << (n / 2));
        let c: Vec<&SparseMat> = (0..n)
            .map(|a| backend.generator(Gen::new(0, 0, a, 0)))
            .collect();
        for a in 0..n {
            for b in 0..n {
                let anti = c[a].times(c[b]).plus(&c[b].times(c[a]));
                let expected = if a == b {
                    SparseMat::identity(backend.dim())
                } else {
                    SparseMat::zeros(backend.dim())
                };
                assert_eq!(anti, expected, "so({n}) c^{} c^{}", a + 1, b + 1);
            }
        }
    }
}

#[test]
fn fermionic_number_operator() {
    let m = sp(2);
    let spec = heisenberg_algebra(&m);
    let backend = fock_backend(&spec).unwrap();
    assert_eq!(backend.dim(), 4);
    // ∂_2 pairs with x_1 under the symplectic metric
    let number = single_matrix(&backend.evaluate(&parse("-x_1*d_2", &spec).unwrap()));
    let mut diag = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert!(number.get(i, j).is_zero());
            }
        }
        diag.push(number.get(i, i));
    }
    let zero = fock::Cx::new(Rational::zero(), Rational::zero());
    let one = fock::Cx::new(rat(1, 1), Rational::zero());
    assert_eq!(diag.iter().filter(|z| **z == one).count(), 2);
    assert_eq!(diag.iter().filter(|z| **z == zero).count(), 2);
}

#[test]
fn unsupported_families() {
    assert!(matches!(
        fock_backend(&heisenberg_algebra(&so(3))),
        Err(RepError::UnsupportedFamily(_))
    ));
    assert!(matches!(
        fock_backend(&clifford_algebra(&so(3), "c")),
        Err(RepError::UnsupportedFamily(_))
    ));
    assert!(matches!(
        fock_backend(&clifford_algebra(&sp(2), "c")),
        Err(RepError::UnsupportedFamily(_))
    ));
}

fn faithfulness_case(spec: &Arc<AlgebraSpec>, words: &[(Vec<usize>, i64)]) {
    let backend = fock_backend(spec).unwrap();
    let gens = spec.generators();
    let mut symbolic = NCElement::zero(spec);
    let mut raw = backend.evaluate(&symbolic);
    for (w, c) in words {
        let word: crate::ncalgebra::Word = w.iter().map(|i| gens[i % gens.len()]).collect();
        let coef = CentralPoly::constant(rat(*c, 1));
        symbolic = symbolic.add(&NCElement::from_terms(spec, [(word.clone(), coef.clone())]));
        raw = raw.plus(&backend.evaluate_word(&word, &coef));
    }
    assert_eq!(backend.evaluate(&symbolic), raw);
    assert_eq!(symbolic.is_zero(), raw.is_zero());
}

/// `u (c^a c^b + c^b c^a − δ^{ab}) v` as raw words, zero in both pictures.
fn clifford_relation_case(prefix: &[usize], suffix: &[usize], a: usize, b: usize) {
    let spec = clifford_algebra(&so(4), "c");
    let gens = spec.generators();
    let word = |mid: &[usize]| -> crate::ncalgebra::Word {
        prefix
            .iter()
            .chain(mid)
            .chain(suffix)
            .map(|i| gens[i % 4])
            .collect()
    };
    let mut raw_terms = vec![
        (word(&[a, b]), CentralPoly::one()),
        (word(&[b, a]), CentralPoly::one()),
    ];
    if a % 4 == b % 4 {
        raw_terms.push((word(&[]), CentralPoly::constant(rat(-1, 1))));
    }
    let backend = fock_backend(&spec).unwrap();
    let mut raw = backend.evaluate(&NCElement::zero(&spec));
    for (w, c) in &raw_terms {
        raw = raw.plus(&backend.evaluate_word(w, c));
    }
    let symbolic = NCElement::from_terms(&spec, raw_terms);
    assert!(symbolic.is_zero());
    assert!(raw.is_zero());
}

fn arb_words() -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    proptest::collection::vec(
        (proptest::collection::vec(0usize..16, 0..=6), -3i64..4),
        1..5,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fock_faithful_clifford(words in arb_words()) {
        faithfulness_case(&clifford_algebra(&so(4), "c"), &words);
    }

    #[test]
    fn fock_faithful_fermionic(words in arb_words()) {
        faithfulness_case(&heisenberg_algebra(&sp(4)), &words);
    }

    #[test]
    fn fock_faithful_on_relation_instances(
        prefix in proptest::collection::vec(0usize..4, 0..3),
        suffix in proptest::collection::vec(0usize..4, 0..3),
        a in 0usize..4,
        b in 0usize..4,
    ) {
        clifford_relation_case(&prefix, &suffix, a, b);
    }
}
