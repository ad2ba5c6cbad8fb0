//! Runs every acceptance criterion, prints one line per criterion, and
//! fails if the set of failing criteria differs from the documented one.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use yangian_core::checker::{
    center_function, char_poly, check_lie_resolution_with, check_linear, check_quadratic,
    check_spin_conditions, chi_eval, compute_w12, decompose_rll, fuse, linear_l, prop5_values,
    quadratic_l, resolution_pair, verify_rll, CheckResult, CheckerError, Gh7Form,
};
use yangian_core::coefficients::{int, rat, Symbol};
use yangian_core::element::Element;
use yangian_core::metric::{make_metric, AlgebraKind, Metric};
use yangian_core::reps::{
    casimir_m2, fock_backend, free_pair, fundamental_rep, js_rep, r_as_quadratic, spinor_rep,
    GeneratorMatrix,
};
use yangian_core::tensorspace::{verify_structural, verify_ybe};
use yangian_core::{CentralPoly, NCElement};

/// Criteria whose stated form does not hold; each is explained in its
/// detail line.
const KNOWN_FAILURES: [u32; 3] = [5, 6, 10];

fn so(n: usize) -> Metric {
    make_metric(AlgebraKind::Orthogonal, n).unwrap()
}

fn sp(n: usize) -> Metric {
    make_metric(AlgebraKind::Symplectic, n).unwrap()
}

fn ybe_metrics() -> Vec<Metric> {
    let mut v: Vec<Metric> = (2..=6).map(so).collect();
    v.extend([2, 4, 6].map(sp));
    v
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Per-id zero verdicts, with checker refusals recorded as their own id.
fn verdicts<E: Element>(g: &GeneratorMatrix<E>) -> Vec<(String, bool)> {
    fn push_report<E: Element>(
        out: &mut Vec<(String, bool)>,
        tag: &str,
        r: Result<yangian_core::checker::ConstraintReport<E>, CheckerError>,
    ) {
        match r {
            Ok(r) => out.extend(
                r.results
                    .into_iter()
                    .map(|c| (format!("{tag}/{}", c.id), c.is_zero())),
            ),
            Err(e) => out.push((
                format!("{tag}/refused: {e}").chars().take(40).collect(),
                false,
            )),
        }
    }
    let mut out: Vec<(String, bool)> = check_linear(g)
        .results
        .into_iter()
        .map(|c| (c.id.clone(), c.is_zero()))
        .collect();
    out.push(("W12".into(), compute_w12(g).is_zero()));
    out.push(("RLL.LINEAR".into(), verify_rll(&linear_l(g)).is_zero()));
    let cf = center_function(&linear_l(g));
    out.push(("CENTER.PROPORTIONAL".into(), cf.proportional.is_zero()));
    out.push(("CENTER.CENTRAL".into(), cf.central.is_zero()));
    push_report(&mut out, "spin", check_spin_conditions(g));
    push_report(
        &mut out,
        "stated",
        check_lie_resolution_with(g, Gh7Form::AsStated),
    );
    push_report(
        &mut out,
        "derived",
        check_lie_resolution_with(g, Gh7Form::Derived),
    );
    out
}

struct Agreement {
    differ: Vec<String>,
    one_sided: Vec<String>,
}

/// Compares per-id verdicts of the symbolic and Fock-matrix backends.
/// Ids only one backend can evaluate are listed apart from contradictions.
fn backend_agreement(g: &GeneratorMatrix<NCElement>) -> Result<Agreement, String> {
    let fb = fock_backend(g.proto().spec()).map_err(|e| e.to_string())?;
    let a: BTreeMap<String, bool> = verdicts(g).into_iter().collect();
    let b: BTreeMap<String, bool> = verdicts(&fb.evaluate_matrix(g)).into_iter().collect();
    let ids: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let mut out = Agreement {
        differ: Vec::new(),
        one_sided: Vec::new(),
    };
    for id in ids {
        match (a.get(id), b.get(id)) {
            (Some(x), Some(y)) if x != y => out.differ.push(id.clone()),
            (Some(_), Some(_)) => {}
            _ => out.one_sided.push(id.clone()),
        }
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let bad: Vec<String> = ybe_metrics()
        .iter()
        .filter(|m| !verify_ybe(m).is_zero())
        .map(ToString::to_string)
        .collect();
    let secs = started.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && secs < 120.0,
        format!("9 metrics in {secs:.2} s, failing: {bad:?}"),
    )
}

fn criterion_2() -> Outcome {
    let bad: Vec<String> = ybe_metrics()
        .iter()
        .flat_map(|m| {
            verify_structural(m)
                .into_iter()
                .filter(|c| !c.is_zero())
                .map(move |c| format!("{m} {}", c.id))
        })
        .collect();
    Outcome::new(
        bad.is_empty(),
        format!("PK, KP, K², P² on 9 metrics, failing: {bad:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for m in [so(3), so(4), sp(2)] {
        let (g, h) = r_as_quadratic(&m);
        let r = check_quadratic(&g, &h);
        let eight = (1..=8).all(|k| r.is_zero(&format!("C.2.{k}")));
        if !eight || r.all_zero() != verify_ybe(&m).is_zero() {
            bad.push(m.to_string());
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("so(3), so(4), sp(2), failing: {bad:?}"),
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for m in [so(4), so(6), sp(2), sp(4)] {
        let g = spinor_rep(&m);
        let r = check_linear(&g);
        let constraints = ["C.1.1", "C.1.2", "C.1.3"].iter().all(|id| r.is_zero(id));
        let value = (&m.eps / int(4)) * (rat(m.n as i64, 1) - &m.eps);
        let quad = g.times(&g).plus(&g.scale(&m.beta));
        let scalar = quad.minus(&g.identity_like().scale(&value)).is_zero();
        let rll = verify_rll(&linear_l(&g)).is_zero();
        if !(constraints && scalar && rll) {
            bad.push(format!(
                "{m} (constraints {constraints}, scalar {scalar}, rll {rll})"
            ));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("spinor so(4), so(6), sp(2), sp(4), failing: {bad:?}"),
    )
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for m in [so(3), sp(2)] {
        let r = check_linear(&fundamental_rep(&m));
        let c13 = r.get("C.1.3").unwrap();
        let ok = !c13.is_zero() && c13.witness.is_some();
        pass &= ok;
        parts.push(format!("{m}: {}", if ok { "witness" } else { "zero" }));
    }
    let mut detail = parts.join(", ");
    if !pass {
        detail.push_str(
            "; sp(2) ≅ sl(2) and its defining rep is the spin-½ rep, so Ḡ² + βḠ is scalar",
        );
    }
    Outcome::new(pass, detail)
}

fn c6_failures(gbar: &GeneratorMatrix<NCElement>, form: Gh7Form) -> Vec<String> {
    match check_lie_resolution_with(gbar, form) {
        Ok(r) => {
            let mut bad: Vec<String> = r
                .results
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| c.id.clone())
                .collect();
            let trace_sq = casimir_m2(gbar).scale(&int(gbar.n() as i64));
            if !chi_eval(gbar, &trace_sq).is_zero() {
                bad.push("χ(Ḡ)".into());
            }
            bad
        }
        Err(e) => vec![e.to_string()],
    }
}

fn criterion_6() -> Outcome {
    let mut stated = Vec::new();
    let mut derived = Vec::new();
    for m in [sp(2), sp(4), so(3), so(4)] {
        let g = js_rep(&m);
        let s = c6_failures(&g, Gh7Form::AsStated);
        if !s.is_empty() {
            stated.push(format!("{m}: {}", s.join(" ")));
        }
        let d = c6_failures(&g, Gh7Form::Derived);
        if !d.is_empty() {
            derived.push(format!("{m}: {}", d.join(" ")));
        }
        if !m.is_orthogonal() {
            match backend_agreement(&g) {
                Ok(v) if v.differ.is_empty() => {}
                Ok(v) => stated.push(format!("{m}: backends disagree on {:?}", v.differ)),
                Err(e) => stated.push(format!("{m}: {e}")),
            }
        }
    }
    let pass = stated.is_empty();
    let detail = format!(
        "stated g², h: failing [{}]; derived 4h − g² = −(β−ε)² − εM/2: failing [{}]",
        stated.join("; "),
        derived.join("; ")
    );
    Outcome::new(pass, detail)
}

fn criterion_7() -> Outcome {
    let forms = ["SPIN.1", "SPIN.2", "SPIN.3", "SPIN.4"];
    let mut bad = Vec::new();
    let cases: Vec<(GeneratorMatrix<NCElement>, bool)> = [sp(2), sp(4), so(3), so(4)]
        .into_iter()
        .map(|m| (js_rep(&m), true))
        .chain(
            [so(4), so(6), sp(4)]
                .into_iter()
                .map(|m| (spinor_rep(&m), false)),
        )
        .collect();
    for (g, expect_zero) in &cases {
        match check_spin_conditions(g) {
            Ok(r) => {
                let v: Vec<bool> = forms.iter().map(|id| r.is_zero(id)).collect();
                if v.iter().any(|z| z != expect_zero) || !r.is_zero("P2.EQUIV") {
                    bad.push(format!("{} {}: {v:?}", g.label, g.metric));
                }
            }
            Err(e) => bad.push(format!("{} {}: {e}", g.label, g.metric)),
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{} reps, four forms each, failing: {bad:?}", cases.len()),
    )
}

fn criterion_8() -> Outcome {
    let u = CentralPoly::symbol(Symbol::u());
    let mut bad = Vec::new();
    for m in [so(4), so(6), sp(2), sp(4)] {
        let g = spinor_rep(&m);
        let cf = center_function(&linear_l(&g));
        let c13 = check_linear(&g).data.c13.unwrap().as_scalar().unwrap();
        let beta = CentralPoly::constant(m.beta.clone());
        let expected = (&(&u * &(&u - &beta)) - &c13).scale(&m.eps);
        if cf.c.as_scalar() != Some(expected) {
            bad.push(format!("linear {m}"));
        }
    }
    let mut notes = Vec::new();
    for m in [sp(2), sp(4), so(3), so(4)] {
        let pair = resolution_pair(&js_rep(&m), Gh7Form::AsStated).unwrap();
        let cf = center_function(&quadratic_l(&pair.g, &pair.h));
        let v = prop5_values(&pair.g, &pair.h);
        let one = pair.gc.one_like();
        let uu = one.scale_poly(&u);
        let shifted = uu.minus(&one.scale(&m.beta));
        let left = uu.times(&uu).plus(&uu.times(&pair.gc)).plus(&pair.hc);
        let right = pair
            .hc
            .plus(&shifted.times(&shifted))
            .plus(&shifted.times(&pair.gc));
        let closed = left
            .times(&right)
            .minus(&shifted.times(&v.c26))
            .minus(&v.c28)
            .scale(&m.eps);
        if !cf.c.minus(&closed).is_zero() {
            bad.push(format!("quadratic {m}"));
        }
        if !cf.proportional.is_zero() {
            notes.push(m.to_string());
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "spinor so(4), so(6), sp(2), sp(4) and JS sp(2), sp(4), so(3), so(4), failing: {bad:?}; \
             C(u) not proportional to ε_ab for the stated pair on {notes:?}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let l = linear_l(&spinor_rep(&so(4)));
    match fuse(&l, &l, Symbol::delta()) {
        Ok(f) => {
            let r = verify_rll(&f);
            Outcome::new(r.is_zero(), format!("spinor so(4) ⊗ spinor so(4): {r}"))
        }
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn criterion_10() -> Outcome {
    let mut stated = Vec::new();
    let mut derived = Vec::new();
    for m in [so(2), sp(2), so(3)] {
        let (g, h) = free_pair(&m);
        let d = decompose_rll(&g, &h);
        if !d.reconstruction.is_zero() || !d.reconstruction_sign_flipped.is_zero() {
            stated.push(m.to_string());
        }
        if !d.reconstruction_derived.is_zero() {
            derived.push(m.to_string());
        }
    }
    Outcome::new(
        stated.is_empty(),
        format!(
            "original prefactors fail on {stated:?}; prefactors −uv²(u+v), (u+β)uv(u+v), −uv(u+v), \
             (u+β)u(u+v), (u+β)uv, −uv, u(u+β), −u fail on {derived:?}"
        ),
    )
}

fn criterion_11() -> Outcome {
    let m2 = CentralPoly::var("m2");
    let half_m2 = m2.scale(&rat(1, 2));
    let mut bad = Vec::new();
    for m in ybe_metrics() {
        let c = |r: &yangian_core::Rational| CentralPoly::constant(r.clone());
        let three = vec![
            c(&(&m.eps + int(2) * &m.beta)),
            (&c(&(int(2) * &m.beta)) - &half_m2).scale(&m.eps),
            half_m2.scale(&int(-1)),
        ];
        let two = vec![c(&m.beta), m2.scale(&int(-1))];
        if char_poly(3, &m, &m2).ok() != Some(three) || char_poly(2, &m, &m2).ok() != Some(two) {
            bad.push(m.to_string());
        }
    }
    let mut on_reps = Vec::new();
    for m in [so(4), sp(4)] {
        let g = spinor_rep(&m);
        let m2 = casimir_m2(&g);
        let chi2 = g
            .times(&g)
            .plus(&g.scale(&m.beta))
            .minus(&g.scalar_like(&m2));
        if !chi2.is_zero() {
            on_reps.push(format!("spinor {m}"));
        }
        let j = js_rep(&m);
        if !chi_eval(&j, &casimir_m2(&j).scale(&int(m.n as i64))).is_zero() {
            on_reps.push(format!("js {m}"));
        }
    }
    Outcome::new(
        bad.is_empty() && on_reps.is_empty(),
        format!(
            "coefficients on 9 metrics, failing: {bad:?}; evaluated on reps, failing: {on_reps:?}"
        ),
    )
}

fn criterion_12() -> Outcome {
    let reps: Vec<GeneratorMatrix<NCElement>> = [so(2), so(4), so(6)]
        .iter()
        .map(spinor_rep)
        .chain([sp(2), sp(4)].iter().map(js_rep))
        .collect();
    let mut bad = Vec::new();
    let mut one_sided = BTreeSet::new();
    let mut compared = 0;
    for g in &reps {
        match backend_agreement(g) {
            Ok(v) => {
                compared += 1;
                one_sided.extend(v.one_sided);
                if !v.differ.is_empty() {
                    bad.push(format!("{} {}: {:?}", g.label, g.metric, v.differ));
                }
            }
            Err(e) => bad.push(format!("{} {}: {e}", g.label, g.metric)),
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{compared}/{} reps compared, disagreements: {bad:?}; evaluated by one backend only: {one_sided:?}",
            reps.len()
        ),
    )
}

/// Number, short name and runner.
type Criterion = (u32, &'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (1, "YBE", criterion_1),
        (2, "structural identities", criterion_2),
        (3, "R as quadratic L", criterion_3),
        (4, "linear spinor", criterion_4),
        (5, "fundamental witness", criterion_5),
        (6, "quadratic JS", criterion_6),
        (7, "spin-condition forms", criterion_7),
        (8, "center function", criterion_8),
        (9, "fusion", criterion_9),
        (10, "free reconstruction", criterion_10),
        (11, "characteristic polynomials", criterion_11),
        (12, "backend agreement", criterion_12),
    ];
    let mut failed = Vec::new();
    for (k, name, run) in criteria {
        let started = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        // Written to the handle directly so the lines survive output capture.
        let _ = writeln!(
            std::io::stdout().lock(),
            "criterion {k:>2} {verdict} {name} ({:.2} s): {}",
            started.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(k);
        }
    }
    assert_eq!(
        failed, KNOWN_FAILURES,
        "failing criteria differ from the documented set"
    );
}

#[test]
fn fundamental_so3_carries_a_c13_witness() {
    let r: CheckResult = check_linear(&fundamental_rep(&so(3)))
        .get("C.1.3")
        .unwrap()
        .clone();
    assert!(r.witness.is_some());
}
