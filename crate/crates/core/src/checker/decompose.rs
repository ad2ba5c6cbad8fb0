use serde::Serialize;

use super::{half, r, CheckResult, Ops};
use crate::coefficients::{int, CentralPoly, Symbol};
use crate::element::Element;
use crate::reps::GeneratorMatrix;
use crate::tensorspace::{sym_split, TensorOperator};

/// Outcome of one reduction identity `lhs = rhs` in the algebra at hand.
/// With `G, H` free, `Holds` means the identity needs no constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Holds,
    HoldsUpToSign,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub id: String,
    pub status: RowStatus,
    /// `lhs − rhs`.
    pub residual: CheckResult,
    /// Whether the left side itself vanishes.
    pub vanishes: bool,
}

pub struct Decomposition<E: Element> {
    /// The eight raw expressions, without their spectral prefactors.
    pub raw: Vec<TensorOperator<E>>,
    /// Signed sum minus `R(u)L₁(u+v)L₂(v) − L₂(v)L₁(u+v)R(u)`.
    pub reconstruction: CheckResult,
    /// Same, with the second product taken as `(v² − vG₂ + H₂)((u+v)² −
    /// (u+v)G₁ + H₁)R(u)`.
    pub reconstruction_sign_flipped: CheckResult,
    /// Signed sum with the prefactors `−uv²(u+v)`, `(u+β)uv(u+v)`,
    /// `−uv(u+v)`, `(u+β)u(u+v)`, `(u+β)uv`, `−uv`, `u(u+β)`, `−u`, minus
    /// the same commutator as `reconstruction`.
    pub reconstruction_derived: CheckResult,
    pub table: Vec<TableRow>,
}

fn poly_u() -> CentralPoly {
    CentralPoly::symbol(Symbol::u())
}

fn poly_v() -> CentralPoly {
    CentralPoly::symbol(Symbol::v())
}

fn row<E: Element>(id: &str, lhs: &TensorOperator<E>, rhs: &TensorOperator<E>) -> TableRow {
    let diff = lhs.minus(rhs);
    let status = if diff.is_zero() {
        RowStatus::Holds
    } else if lhs.plus(rhs).is_zero() {
        RowStatus::HoldsUpToSign
    } else {
        RowStatus::Fails
    };
    TableRow {
        id: id.to_string(),
        status,
        residual: CheckResult::from_operator(id, &diff),
        vanishes: lhs.is_zero(),
    }
}

/// Splits the quadratic RLL relation into its eight coefficient
/// expressions, checks that they rebuild it, and tests the symmetric and
/// antisymmetric reduction identities row by row.
pub fn decompose_rll<E: Element>(
    g: &GeneratorMatrix<E>,
    h: &GeneratorMatrix<E>,
) -> Decomposition<E> {
    let ops = Ops::new(&g.metric, g.proto());
    let eps = ops.eps().clone();
    let beta = ops.beta().clone();
    let n = g.n() as i64;
    let (g1, g2) = (ops.slot1(g), ops.slot2(g));
    let (h1, h2) = (ops.slot1(h), ops.slot2(h));
    let (k, p, x) = (&ops.k, &ops.p, &ops.x);
    let b = ops.scalar(&beta);
    let b2 = ops.scalar(&(&beta * &beta));

    let c1 = k.commutator(&g1.plus(&g2)).scale(&eps);
    let c2 = g1
        .commutator(&g2)
        .plus(&g1.minus(&g2).times(p))
        .minus(&k.commutator(&g2).scale(&eps));
    let hsum = h1.plus(&h2);
    let g1b = g1.minus(&b);
    let g2b = g2.plus(&b);
    let c3 = k
        .times(&hsum.plus(&g1b.times(&g2)))
        .minus(&hsum.plus(&g2.times(&g1b)).times(k))
        .scale(&eps);
    let c4 = g1
        .commutator(&h2)
        .plus(&h1.minus(&h2).times(p))
        .minus(&k.commutator(&h2).scale(&eps));
    let c5 = h1
        .commutator(&g2)
        .plus(&h1.minus(&h2).times(p))
        .plus(&k.commutator(&h1).scale(&eps));
    let c6 = k
        .times(&h1.times(&g2b).plus(&g1b.times(&h2)))
        .minus(&h2.times(&g1b).plus(&g2b.times(&h1)).times(k))
        .scale(&eps);
    let c7 = h1
        .commutator(&h2)
        .plus(&g2.times(&h1).minus(&h2.times(&g1)).times(p))
        .minus(&k.times(&g1b).times(&h2).scale(&eps))
        .plus(&h2.times(&g1b).times(k).scale(&eps));
    let mid = h1.minus(&g1.scale(&beta)).plus(&b2);
    let c8 = k
        .times(&mid)
        .times(&h2)
        .minus(&h2.times(&mid).times(k))
        .scale(&eps);
    let raw = vec![c1, c2, c3, c4, c5, c6, c7, c8];

    let (u, v) = (poly_u(), poly_v());
    let uv = &u + &v;
    let ub = &u + &CentralPoly::constant(beta.clone());
    let prefactors = [
        &(&(&u * &v) * &v) * &uv,
        &(&(&ub * &u) * &v) * &uv,
        -&(&(&u * &v) * &uv),
        -&(&(&ub * &u) * &uv),
        -&(&(&ub * &v) * &uv),
        &u * &v,
        -&(&u * &ub),
        -&u,
    ];
    let mut sum = TensorOperator::zeros(&ops.proto, g.n(), 2);
    for (c, f) in raw.iter().zip(&prefactors) {
        sum = sum.plus(&c.scale_poly(f));
    }

    let rmat = crate::tensorspace::make_r(&g.metric, &ops.proto);
    let lop = |gx: &TensorOperator<E>, hx: &TensorOperator<E>, s: &CentralPoly, sign: i64| {
        ops.i
            .scale_poly(&(s * s))
            .plus(&gx.scale_poly(&s.scale(&int(sign))))
            .plus(hx)
    };
    let vv = v.clone();
    let left = rmat
        .times(&lop(&g1, &h1, &uv, 1))
        .times(&lop(&g2, &h2, &vv, 1));
    let right = lop(&g2, &h2, &vv, 1)
        .times(&lop(&g1, &h1, &uv, 1))
        .times(&rmat);
    let right_flipped = lop(&g2, &h2, &vv, -1)
        .times(&lop(&g1, &h1, &uv, -1))
        .times(&rmat);
    let reconstruction = CheckResult::from_operator("RLL2.RECON", &sum.minus(&left.minus(&right)));
    let reconstruction_sign_flipped = CheckResult::from_operator(
        "RLL2.RECON.FLIPPED",
        &sum.minus(&left.minus(&right_flipped)),
    );
    let derived_prefactors = [
        -&(&(&(&u * &v) * &v) * &uv),
        &(&(&ub * &u) * &v) * &uv,
        -&(&(&u * &v) * &uv),
        &(&ub * &u) * &uv,
        &(&ub * &u) * &v,
        -&(&u * &v),
        &u * &ub,
        -&u,
    ];
    let mut derived_sum = TensorOperator::zeros(&ops.proto, g.n(), 2);
    for (c, f) in raw.iter().zip(&derived_prefactors) {
        derived_sum = derived_sum.plus(&c.scale_poly(f));
    }
    let reconstruction_derived = CheckResult::from_operator(
        "RLL2.RECON.DERIVED",
        &derived_sum.minus(&left.minus(&right)),
    );

    let split = |c: &TensorOperator<E>| sym_split(c, &g.metric).expect("arity 2");
    let (c1s, c1a) = split(&raw[0]);
    let (c2s, c2a) = split(&raw[1]);
    let (c3s, _) = split(&raw[2]);
    let (c4s, c4a) = split(&raw[3]);
    let (c6s, _) = split(&raw[5]);
    let (c7s, c7a) = split(&raw[6]);
    let (c8s, _) = split(&raw[7]);
    let zero = TensorOperator::zeros(&ops.proto, g.n(), 2);
    let gdiff = g1.minus(&g2);
    let gsum = g1.plus(&g2);
    let comm12 = g1.commutator(&g2);
    let c22a_formula = comm12.minus(&x.commutator(&gdiff).scale(&half()));
    let c24a_formula = g1
        .commutator(&h2)
        .minus(&g2.commutator(&h1))
        .minus(&x.commutator(&h1.minus(&h2)));
    let sq = |m: &TensorOperator<E>| m.times(m);
    let mut table = vec![
        row("c21a", &c1a, &zero),
        row("c21s", &c1s, &x.commutator(&gsum)),
        row("c22s", &c2s, &c1s),
        row("c22a", &c2a, &c22a_formula),
    ];
    let acr = ops.left_antiproj(&raw[2]);
    table.push(row(
        "acr23",
        &acr,
        &comm12.minus(&gdiff.scale(&beta)).times(k),
    ));
    table.push(row("acr23.b", &acr, &c22a_formula.times(k)));
    let acl = ops.right_antiproj(&raw[2]);
    table.push(row(
        "acl23",
        &acl,
        &k.times(&comm12.plus(&gdiff.scale(&beta))),
    ));
    table.push(row("acl23.b", &acl, &k.times(&c22a_formula)));
    let sc23 = x
        .commutator(&hsum.minus(&sq(&g1).plus(&sq(&g2)).scale(&half())))
        .plus(&raw[0].anticommutator(&gsum));
    table.push(row("sc23", &c3s, &sc23));
    let sc24 = g1
        .commutator(&h2.minus(&sq(&g2).scale(&half())))
        .plus(&g2.commutator(&h1.minus(&sq(&g1).scale(&half()))))
        .minus(&c3s)
        .minus(&gdiff.anticommutator(&c2s).scale(&half()));
    table.push(row("sc24", &c4s, &sc24));
    table.push(row("ac24", &c4a, &c24a_formula));
    table.push(row("ac26.L", &ops.right_antiproj(&raw[5]), &k.times(&c4a)));
    table.push(row("ac26.R", &ops.left_antiproj(&raw[5]), &c4a.times(k)));
    let sym_proj = ops.i.plus(&p.scale(&eps));
    let s6 = sym_proj.times(&raw[5]).times(&sym_proj).scale(&half());
    table.push(row(
        "sc26",
        &s6,
        &x.commutator(&h1.anticommutator(&g2).plus(&g1.anticommutator(&h2))),
    ));
    let half_eps = &eps * half();
    let sc27 = c4s
        .times(p)
        .minus(&k.anticommutator(&c4s).scale(&half_eps))
        .minus(&c6s.scale(&half_eps));
    table.push(row("sc27", &c7s, &sc27));
    let ac27 = h1
        .commutator(&h2)
        .plus(
            &x.commutator(&g1.anticommutator(&h2).minus(&g2.anticommutator(&h1)))
                .scale(&r(1, 4)),
        )
        .minus(&k.anticommutator(&c4a).scale(&(&eps * r(1, 4))));
    table.push(row("ac27", &c7a, &ac27));
    let ac28 = k
        .times(&c7a.plus(&c4a.scale(&((&eps - int(n)) / int(4)))))
        .scale(&eps);
    table.push(row("ac28", &ops.right_antiproj(&raw[7]), &ac28));
    let sc28 = k
        .commutator(&h1.anticommutator(&h2).minus(&hsum.scale(&(&beta * &eps))))
        .minus(&k.anticommutator(&c4s).scale(&(&beta * half())))
        .plus(&c6s.scale(&(&beta * &eps * half())));
    table.push(row("sc28", &c8s, &sc28));

    Decomposition {
        raw,
        reconstruction,
        reconstruction_sign_flipped,
        reconstruction_derived,
        table,
    }
}
