use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use yangian_core::metric::{make_metric, AlgebraKind};
use yangian_core::reps::{spinor_rep, write_rep};

fn yangian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yangian"))
        .arg("verify")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn result<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == id)
        .unwrap_or_else(|| panic!("no result {id}"))
}

#[test]
fn ybe_example_exits_zero() {
    let out = yangian(&["--check", "ybe", "--algebra", "so", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "zero");
    for id in ["YBE", "KP.PK", "KP.KP", "KP.K2", "KP.P2"] {
        assert_eq!(result(&r, id)["status"], "zero");
    }
}

#[test]
fn fundamental_so3_reports_c13_witness() {
    let out = yangian(&[
        "--check",
        "linear",
        "--rep",
        "fundamental",
        "--algebra",
        "so",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let c13 = result(&r, "C.1.3");
    assert_eq!(c13["status"], "nonzero");
    assert!(!c13["witness"]["entry"].as_str().unwrap().is_empty());
    assert_eq!(c13["witness"]["indices"].as_array().unwrap().len(), 4);
    assert_eq!(r["verdict"], "nonzero");
}

#[test]
fn lie_resolution_js_sp2_by_relation() {
    let base = [
        "--check",
        "lie-resolution",
        "--rep",
        "js",
        "--algebra",
        "sp",
        "--n",
        "2",
    ];
    let derived = yangian(&[&base[..], &["--relation", "derived"]].concat());
    assert_eq!(derived.status.code(), Some(0));
    let stated = yangian(&base);
    assert_eq!(stated.status.code(), Some(1));
    assert_eq!(result(&json(&stated), "RLL")["status"], "nonzero");
}

#[test]
fn report_follows_schema() {
    let out = yangian(&[
        "--check",
        "quadratic",
        "--rep",
        "r-quadratic",
        "--algebra",
        "so",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for key in ["config", "results", "centrals", "verdict"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let mut centrals: Vec<&str> = r["centrals"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    centrals.sort_unstable();
    assert_eq!(centrals, ["alpha", "c26", "c28", "g", "h", "m2"]);
    let raw = String::from_utf8(out.stdout.clone()).unwrap();
    let order: Vec<usize> = [
        "\"g\"",
        "\"h\"",
        "\"m2\"",
        "\"c26\"",
        "\"c28\"",
        "\"alpha\"",
    ]
    .iter()
    .map(|k| raw.find(k).unwrap())
    .collect();
    assert!(
        order.windows(2).all(|w| w[0] < w[1]),
        "centrals out of order"
    );
    for res in r["results"].as_array().unwrap() {
        assert!(res["id"].is_string());
        assert!(res["status"] == "zero" || res["status"] == "nonzero");
        assert!(
            res["witness"].is_null()
                || (res["witness"]["indices"].is_array() && res["witness"]["entry"].is_string())
        );
    }
    assert_eq!(r["config"]["check"], "quadratic");
    assert_eq!(r["config"]["rep"], "r-quadratic");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--check",
        "lie-resolution",
        "--rep",
        "js",
        "--algebra",
        "sp",
        "--n",
        "4",
        "--relation",
        "derived",
    ];
    let mut bytes = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let out = yangian(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn text_report_names_every_json_id() {
    let args = [
        "--check",
        "spin-conditions",
        "--rep",
        "spinor",
        "--algebra",
        "so",
        "--n",
        "4",
    ];
    let j = json(&yangian(&args));
    let text =
        String::from_utf8(yangian(&[&args[..], &["--format", "text"]].concat()).stdout).unwrap();
    for res in j["results"].as_array().unwrap() {
        let id = res["id"].as_str().unwrap();
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{id}:"))),
            "{id} missing"
        );
    }
    assert!(text.contains("verdict: nonzero"));
}

#[test]
fn both_backends_agree_on_supported_reps() {
    for (algebra, n, rep, check) in [
        ("so", "4", "spinor", "linear"),
        ("so", "2", "spinor", "rll"),
        ("sp", "2", "js", "lie-resolution"),
        ("so", "3", "fundamental", "linear"),
    ] {
        let out = yangian(&[
            "--check",
            check,
            "--rep",
            rep,
            "--algebra",
            algebra,
            "--n",
            n,
            "--backend",
            "both",
            "--relation",
            "derived",
        ]);
        let r = json(&out);
        assert_eq!(
            r["disagreements"],
            Value::Array(vec![]),
            "{algebra}({n}) {rep} {check}"
        );
        assert_ne!(out.status.code(), Some(2));
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 5] = [
        &["--check", "linear", "--algebra", "so", "--n", "3"],
        &[
            "--check",
            "linear",
            "--rep",
            "js",
            "--algebra",
            "so",
            "--n",
            "3",
            "--backend",
            "matrix",
        ],
        &["--check", "ybe", "--algebra", "sp", "--n", "3"],
        &[
            "--check",
            "ybe",
            "--algebra",
            "so",
            "--n",
            "3",
            "--backend",
            "both",
        ],
        &[
            "--check",
            "quadratic",
            "--rep",
            "spinor",
            "--algebra",
            "so",
            "--n",
            "4",
        ],
    ];
    for args in cases {
        let out = yangian(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_yangian"))
        .args(["verify", "--check", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn spinor_file(dir: &Path) -> String {
    let m = make_metric(AlgebraKind::Orthogonal, 4).unwrap();
    let path = dir.join("spinor.rep");
    std::fs::write(&path, write_rep(&spinor_rep(&m), None)).unwrap();
    format!("file:{}", path.display())
}

#[test]
fn file_rep_matches_builder() {
    let dir = tempfile::tempdir().unwrap();
    let rep = spinor_file(dir.path());
    let from_file = json(&yangian(&["--check", "rll", "--rep", &rep]));
    assert_eq!(from_file["verdict"], "zero");
    assert_eq!(from_file["config"]["algebra"], "so");
    assert_eq!(from_file["config"]["n"], 4);

    let mismatch = yangian(&["--check", "rll", "--rep", &rep, "--n", "6"]);
    assert_eq!(mismatch.status.code(), Some(2));
    let capped = yangian(&["--check", "rll", "--rep", &rep, "--max-degree", "1"]);
    assert_eq!(capped.status.code(), Some(2));
    let roomy = yangian(&["--check", "rll", "--rep", &rep, "--max-degree", "2"]);
    assert_eq!(roomy.status.code(), Some(0));
}

#[test]
fn decompose_reports_both_readings() {
    let stated = yangian(&["--check", "decompose", "--algebra", "so", "--n", "2"]);
    assert_eq!(stated.status.code(), Some(1));
    let derived = yangian(&[
        "--check",
        "decompose",
        "--algebra",
        "so",
        "--n",
        "2",
        "--relation",
        "derived",
    ]);
    assert_eq!(derived.status.code(), Some(0));
    let r = json(&derived);
    assert_eq!(result(&r, "RLL2.RECON.DERIVED")["status"], "zero");
    assert!(r["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().starts_with("c21a:")));
}

#[test]
fn charpoly_values_are_reported() {
    let r = json(&yangian(&[
        "--check",
        "charpoly",
        "--algebra",
        "so",
        "--n",
        "4",
    ]));
    assert_eq!(r["verdict"], "zero");
    assert_eq!(r["values"]["CHI3.D"], "3");
    assert_eq!(r["values"]["CHI2.C"], "-m2");
}
