use std::collections::BTreeMap;

use yangian_core::checker::{
    center_function, char_poly, check_lie_resolution_with, check_linear, check_quadratic,
    check_spin_conditions, chi_eval, decompose_rll, fuse, linear_l, quadratic_l, resolution_pair,
    verify_rll, CheckResult, CheckerError, ConstraintReport, Gh7Form, RowStatus,
};
use yangian_core::coefficients::{int, rat};
use yangian_core::element::Element;
use yangian_core::reps::{
    casimir_m2, fock_backend, free_pair, fundamental_rep, js_rep, r_as_quadratic, spinor_rep,
    GeneratorMatrix,
};
use yangian_core::tensorspace::{verify_structural, verify_ybe};
use yangian_core::{CentralPoly, NCElement, Symbol};

use crate::config::{Backend, Check, RepChoice, RunConfig};
use crate::CliError;

/// Keys of the `centrals` block.
const CENTRAL_KEYS: [&str; 6] = ["g", "h", "m2", "c26", "c28", "alpha"];

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub results: Vec<CheckResult>,
    pub centrals: BTreeMap<String, String>,
    pub values: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn from_report<E: Element>(r: ConstraintReport<E>) -> Self {
        let centrals = r
            .data
            .rendered()
            .into_iter()
            .filter(|(k, _)| CENTRAL_KEYS.contains(&k.as_str()))
            .collect();
        Outcome {
            results: r.results,
            centrals,
            values: BTreeMap::new(),
            notes: r.notes,
        }
    }

    fn single(r: CheckResult) -> Self {
        Outcome {
            results: vec![r],
            ..Outcome::default()
        }
    }
}

/// Symbolic outcome, plus ids whose verdicts differ between backends.
pub struct Evaluation {
    pub outcome: Outcome,
    pub disagreements: Option<Vec<String>>,
}

/// The representation as handed to the checks: the generator matrix, an
/// optional second-order part, and whether `G` should be resolved into a
/// quadratic pair when one is needed.
struct RepInput {
    g: GeneratorMatrix<NCElement>,
    h: Option<GeneratorMatrix<NCElement>>,
    resolve: bool,
}

fn build_rep(cfg: &RunConfig) -> Result<RepInput, CliError> {
    let m = &cfg.metric;
    let rep = cfg.rep.as_ref().expect("checked by RunConfig");
    let input = match rep {
        RepChoice::Fundamental => RepInput {
            g: fundamental_rep(m),
            h: None,
            resolve: false,
        },
        RepChoice::Spinor => RepInput {
            g: spinor_rep(m),
            h: None,
            resolve: false,
        },
        RepChoice::Js => RepInput {
            g: js_rep(m),
            h: None,
            resolve: true,
        },
        RepChoice::RQuadratic => {
            let (g, h) = r_as_quadratic(m);
            RepInput {
                g,
                h: Some(h),
                resolve: false,
            }
        }
        RepChoice::File(_) => {
            let f = cfg.file.as_ref().expect("loaded by RunConfig");
            RepInput {
                g: f.g.clone(),
                h: f.h.clone(),
                resolve: false,
            }
        }
    };
    if let Some(cap) = cfg.max_degree {
        for (which, mat) in [("G", Some(&input.g)), ("H", input.h.as_ref())] {
            let Some(mat) = mat else { continue };
            for (a, row) in mat.entries.iter().enumerate() {
                for (b, e) in row.iter().enumerate() {
                    if e.max_word_len() > cap {
                        return Err(CliError::Usage(format!(
                            "{which}[{}][{}] has words of length {} beyond --max-degree {cap}",
                            a + 1,
                            b + 1,
                            e.max_word_len()
                        )));
                    }
                }
            }
        }
    }
    Ok(input)
}

/// Central symbol standing in for the Casimir in the characteristic
/// polynomials.
fn casimir_symbol() -> CentralPoly {
    CentralPoly::var("m2")
}

/// `L(u)` for the representation: quadratic when `H` is known or `G` is
/// resolved, linear otherwise.
fn l_operator<E: Element>(
    g: &GeneratorMatrix<E>,
    h: Option<&GeneratorMatrix<E>>,
    resolve: bool,
    form: Gh7Form,
) -> Result<GeneratorMatrix<E>, CheckerError> {
    match h {
        Some(h) => Ok(quadratic_l(g, h)),
        None if resolve => {
            let pair = resolution_pair(g, form)?;
            Ok(quadratic_l(&pair.g, &pair.h))
        }
        None => Ok(linear_l(g)),
    }
}

/// Checker failures that are verdicts rather than errors.
fn verdict_or_error(e: CheckerError) -> Result<Outcome, CliError> {
    match e {
        CheckerError::LieViolation(r) | CheckerError::W12Nonzero(r) => Ok(Outcome::single(r)),
        CheckerError::NonCentralCasimir(x) => Ok(Outcome::single(CheckResult::nonzero(
            "M2.CENTRAL",
            Vec::new(),
            format!("fails to commute with {x}"),
        ))),
        other => Err(other.into()),
    }
}

/// Checks that only need the representation, generic over entry type.
fn run_generic<E: Element>(
    check: Check,
    g: &GeneratorMatrix<E>,
    h: Option<&GeneratorMatrix<E>>,
    resolve: bool,
    form: Gh7Form,
) -> Result<Outcome, CliError> {
    match check {
        Check::Linear => Ok(Outcome::from_report(check_linear(g))),
        Check::Quadratic => match h {
            Some(h) => Ok(Outcome::from_report(check_quadratic(g, h))),
            None if resolve => {
                let pair = match resolution_pair(g, form) {
                    Ok(p) => p,
                    Err(e) => return verdict_or_error(e),
                };
                let mut out = Outcome::from_report(check_quadratic(&pair.g, &pair.h));
                out.centrals.entry("g".into()).or_insert_with(|| pair.gc.render());
                out.centrals.entry("h".into()).or_insert_with(|| pair.hc.render());
                out.centrals.entry("m2".into()).or_insert_with(|| pair.m2.render());
                Ok(out)
            }
            None => Err(CliError::Usage(
                "--check quadratic needs a second-order part: use r-quadratic, js or a file with H entries".into(),
            )),
        },
        Check::LieResolution => match check_lie_resolution_with(g, form) {
            Ok(r) => Ok(Outcome::from_report(r)),
            Err(e) => verdict_or_error(e),
        },
        Check::SpinConditions => match check_spin_conditions(g) {
            Ok(r) => Ok(Outcome::from_report(r)),
            Err(e) => verdict_or_error(e),
        },
        Check::Rll => match l_operator(g, h, resolve, form) {
            Ok(l) => Ok(Outcome::single(verify_rll(&l))),
            Err(e) => verdict_or_error(e),
        },
        Check::Center => {
            let l = match l_operator(g, h, resolve, form) {
                Ok(l) => l,
                Err(e) => return verdict_or_error(e),
            };
            let cf = center_function(&l);
            let mut out = Outcome {
                results: vec![cf.proportional.renamed("CENTER.PROPORTIONAL"), cf.central.renamed("CENTER.CENTRAL")],
                ..Outcome::default()
            };
            out.values.insert("c(u)".into(), cf.c.render());
            Ok(out)
        }
        Check::Ybe | Check::Decompose | Check::Charpoly | Check::Fuse => unreachable!("dispatched separately"),
    }
}

fn run_ybe(cfg: &RunConfig) -> Outcome {
    let mut results = vec![verify_ybe(&cfg.metric)];
    results.extend(verify_structural(&cfg.metric));
    Outcome {
        results,
        ..Outcome::default()
    }
}

fn run_decompose(cfg: &RunConfig) -> Outcome {
    let (g, h) = free_pair(&cfg.metric);
    let d = decompose_rll(&g, &h);
    let mut out = Outcome::default();
    match Gh7Form::from(cfg.relation) {
        Gh7Form::AsStated => {
            out.results.push(d.reconstruction.clone());
            let flipped = if d.reconstruction_sign_flipped.is_zero() {
                "zero"
            } else {
                "nonzero"
            };
            out.notes.push(format!("RLL2.RECON.FLIPPED: {flipped}"));
        }
        Gh7Form::Derived => out.results.push(d.reconstruction_derived.clone()),
    }
    for row in &d.table {
        let status = match row.status {
            RowStatus::Holds => "holds",
            RowStatus::HoldsUpToSign => "holds up to sign",
            RowStatus::Fails => "fails",
        };
        let vanishes = if row.vanishes {
            ", left side vanishes"
        } else {
            ""
        };
        out.notes.push(format!("{}: {status}{vanishes}", row.id));
    }
    out
}

fn run_charpoly(
    cfg: &RunConfig,
    gbar: Option<&GeneratorMatrix<NCElement>>,
) -> Result<Outcome, CliError> {
    let m = &cfg.metric;
    let m2 = casimir_symbol();
    let (eps, beta) = (&m.eps, &m.beta);
    let c = |r: &yangian_core::Rational| CentralPoly::constant(r.clone());
    let half_m2 = m2.scale(&rat(1, 2));
    let expected3 = [
        c(&(eps + int(2) * beta)),
        (&c(&(int(2) * beta)) - &half_m2).scale(eps),
        half_m2.scale(&int(-1)),
    ];
    let expected2 = [c(beta), m2.scale(&int(-1))];
    let mut out = Outcome::default();
    for (order, expected, names) in [
        (3u32, &expected3[..], &["CHI3.D", "CHI3.E", "CHI3.F"][..]),
        (2, &expected2[..], &["CHI2.B", "CHI2.C"][..]),
    ] {
        let got = char_poly(order, m, &m2)?;
        for ((id, g), e) in names.iter().zip(&got).zip(expected) {
            out.results.push(CheckResult::from_element(id, &(g - e)));
            out.values.insert(id.to_string(), g.render());
        }
    }
    if let Some(gbar) = gbar {
        let trace_sq = casimir_m2(gbar).scale(&int(m.n as i64));
        out.results.push(CheckResult::from_matrix(
            "CHI.REP",
            &chi_eval(gbar, &trace_sq),
        ));
    }
    Ok(out)
}

fn run_fuse(cfg: &RunConfig, input: &RepInput, matrix: bool) -> Result<Outcome, CliError> {
    let form = Gh7Form::from(cfg.relation);
    let l = match l_operator(&input.g, input.h.as_ref(), input.resolve, form) {
        Ok(l) => l,
        Err(e) => return verdict_or_error(e),
    };
    let fused = fuse(&l, &l, Symbol::delta())?;
    let r = if matrix {
        let backend = fock_backend(fused.proto().spec())?;
        verify_rll(&backend.evaluate_matrix(&fused))
    } else {
        verify_rll(&fused)
    };
    Ok(Outcome::single(r.renamed("RLL.FUSED")))
}

fn run_backend(cfg: &RunConfig, input: &RepInput, matrix: bool) -> Result<Outcome, CliError> {
    let form = Gh7Form::from(cfg.relation);
    if cfg.check == Check::Fuse {
        return run_fuse(cfg, input, matrix);
    }
    if cfg.check == Check::Charpoly {
        return run_charpoly(cfg, Some(&input.g));
    }
    if !matrix {
        return run_generic(cfg.check, &input.g, input.h.as_ref(), input.resolve, form);
    }
    let backend = fock_backend(input.g.proto().spec())?;
    let g = backend.evaluate_matrix(&input.g);
    let h = match &input.h {
        Some(h) => Some(fock_backend(h.proto().spec())?.evaluate_matrix(h)),
        None => None,
    };
    run_generic(cfg.check, &g, h.as_ref(), input.resolve, form)
}

/// Ids where both backends reached a verdict and the verdicts differ,
/// followed by ids only one backend could evaluate.
fn compare(symbolic: &Outcome, matrix: &Outcome) -> (Vec<String>, Vec<String>) {
    let verdicts = |o: &Outcome| -> BTreeMap<String, bool> {
        o.results
            .iter()
            .map(|r| (r.id.clone(), r.is_zero()))
            .collect()
    };
    let (a, b) = (verdicts(symbolic), verdicts(matrix));
    let mut differ = Vec::new();
    let mut one_sided = Vec::new();
    for id in a.keys().chain(b.keys().filter(|id| !a.contains_key(*id))) {
        match (a.get(id), b.get(id)) {
            (Some(x), Some(y)) if x != y => differ.push(id.clone()),
            (Some(_), Some(_)) => {}
            (Some(_), None) => {
                one_sided.push(format!("{id} evaluated by the symbolic backend only"))
            }
            (None, _) => one_sided.push(format!("{id} evaluated by the matrix backend only")),
        }
    }
    (differ, one_sided)
}

pub fn evaluate(cfg: &RunConfig) -> Result<Evaluation, CliError> {
    match cfg.check {
        Check::Ybe => {
            return Ok(Evaluation {
                outcome: run_ybe(cfg),
                disagreements: None,
            })
        }
        Check::Decompose => {
            return Ok(Evaluation {
                outcome: run_decompose(cfg),
                disagreements: None,
            })
        }
        Check::Charpoly if cfg.rep.is_none() => {
            return Ok(Evaluation {
                outcome: run_charpoly(cfg, None)?,
                disagreements: None,
            })
        }
        _ => {}
    }
    let input = build_rep(cfg)?;
    match cfg.backend {
        Backend::Symbolic => Ok(Evaluation {
            outcome: run_backend(cfg, &input, false)?,
            disagreements: None,
        }),
        Backend::Matrix => Ok(Evaluation {
            outcome: run_backend(cfg, &input, true)?,
            disagreements: None,
        }),
        Backend::Both => {
            let mut symbolic = run_backend(cfg, &input, false)?;
            let matrix = run_backend(cfg, &input, true)?;
            let (disagreements, one_sided) = compare(&symbolic, &matrix);
            symbolic.notes.extend(one_sided);
            Ok(Evaluation {
                outcome: symbolic,
                disagreements: Some(disagreements),
            })
        }
    }
}
