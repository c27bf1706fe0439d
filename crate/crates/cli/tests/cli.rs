use std::path::Path;
use std::process::{Command, Output};

use ctxgraph::boxes::pr_box;
use ctxgraph::kscolor::p33_vectors;
use ctxgraph::GraphFamilySpec;
use serde_json::Value;

fn ctxgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = ctxgraph(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_json(dir: &Path, name: &str, v: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn pentagon_bounds() {
    let v = json_ok(&["bounds", "--family", "cycle", "--n", "5"]);
    assert_eq!(v["alpha"], 2);
    assert!((f(&v["theta"]) - 5f64.sqrt()).abs() < 1e-6);
    assert!((f(&v["alpha_star"]) - 2.5).abs() < 1e-9);
}

#[test]
fn graph_file_matches_family() {
    let dir = tempfile::tempdir().unwrap();
    let g = GraphFamilySpec::Circulant {
        n: 10,
        offsets: vec![1, 4],
    }
    .build()
    .unwrap();
    let path = write_json(dir.path(), "chsh.json", &g.to_json());
    let a = json_ok(&["bounds", &path]);
    let b = json_ok(&[
        "bounds",
        "--family",
        "circulant",
        "--n",
        "10",
        "--offsets",
        "1,4",
    ]);
    assert_eq!(a, b);
    let c = json_ok(&["bounds", "--input", &path]);
    assert_eq!(a, c);
}

#[test]
fn malformed_json_is_an_input_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"n\": 3,\n \"edges\": [[0,1],]}").unwrap();
    let out = ctxgraph(&["bounds", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    std::fs::write(&path, "{\"n\": 3, \"edges\": [[0,5]]}").unwrap();
    let out = ctxgraph(&["bounds", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = ctxgraph(&["bounds", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_two() {
    for args in [
        &["bounds"][..],
        &["bounds", "--family", "cycle"],
        &["bounds", "--family", "circulant", "--n", "10"],
        &["frobnicate"],
        &[
            "membership",
            "--family",
            "cycle",
            "--n",
            "5",
            "--p",
            "0.1,0.2",
        ],
        &["box", "ic-vandam", "--family", "pr"],
        &["box", "ip-protocol", "--x", "01", "--y", "1", "--seed", "3"],
        &["bounds", "--family", "cycle", "--n", "5", "--tol", "-1"],
        &["suite", "acceptance", "--criterion", "99"],
    ] {
        assert_eq!(ctxgraph(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn ks_check_from_file_and_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "p33.json", &p33_vectors().to_json());
    let v = json_ok(&["ks", "check", &path]);
    assert_eq!(v["status"], "UNCOLORABLE");
    assert_eq!(v["vectors"], 33);
    let v = json_ok(&["ks", "check", "--family", "p33-table"]);
    assert_eq!(v["status"], "COLORABLE");
    let v = json_ok(&[
        "ks", "check", "--family", "ks8", "--pin", "A=1", "--pin", "H=1",
    ]);
    assert_eq!(v["status"], "UNCOLORABLE");
    let out = ctxgraph(&["ks", "check", "--family", "ks8", "--pin", "nosuch=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multiplicative_proofs() {
    for fam in ["peres-mermin", "mermin-star"] {
        let v = json_ok(&["ks", "multiplicative", "--family", fam]);
        assert_eq!(v["proof"], true, "{fam}");
    }
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "operators": ["XI", "IX", "XX", "IY", "YI", "YY", "XY", "YX", "ZZ"],
        "lines": [[0,1,2],[3,4,5],[6,7,8],[0,3,6],[1,4,7],[2,5,8]],
        "signs": [1,1,1,1,1,1]
    });
    let path = write_json(dir.path(), "pm.json", &doc);
    let v = json_ok(&["ks", "multiplicative", &path]);
    assert_eq!(v["proof"], false);
    assert_eq!(v["products_match"], false);
}

#[test]
fn pr_box_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "pr.json", &pr_box(2, 1.0).unwrap().to_json());
    let out = ctxgraph(&["box", "chsh", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"value\": 4.0"), "{text}");
    let v = json_ok(&["box", "check", &path]);
    assert_eq!(v["nosignaling"]["nosignaling"], true);
    assert_eq!(v["locality"]["local"], false);
}

#[test]
fn singlet_and_noisy_boxes() {
    let v = json_ok(&["box", "chsh", "--family", "singlet"]);
    assert!((f(&v["value"]) - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    let v = json_ok(&["box", "chsh", "--family", "pr", "--strength", "0.5"]);
    assert!((f(&v["value"]) - 2.0).abs() < 1e-12);
    let v = json_ok(&["box", "check", "--family", "pr", "--strength", "0.5"]);
    assert_eq!(v["locality"]["local"], true);
    let v = json_ok(&["box", "lo"]);
    assert!((f(&v["value"]) - 1.25).abs() < 1e-12);
    assert_eq!(v["pairwise_orthogonal"], true);
}

#[test]
fn protocols() {
    let v = json_ok(&["box", "ic-vandam", "--seed", "11", "--trials", "2000"]);
    assert_eq!(f(&v["success"]), 1.0);
    assert!((f(&v["mutual_information"]) - 2.0).abs() < 1e-12);
    let v = json_ok(&[
        "box",
        "ic-nested",
        "--d",
        "3",
        "--strength",
        "0.9",
        "--levels",
        "2",
    ]);
    let closed = (2.0 * 0.9f64.powi(2) + 1.0) / 3.0;
    assert!((f(&v["success"]) - closed).abs() < 1e-12);
    assert_eq!(v["simulated"], Value::Null);
    let v = json_ok(&[
        "box",
        "ic-nested",
        "--strength",
        "1",
        "--levels",
        "2",
        "--trials",
        "500",
        "--seed",
        "5",
    ]);
    assert_eq!(f(&v["simulated"]), 1.0);
    let v = json_ok(&[
        "box",
        "ip-protocol",
        "--x",
        "1011",
        "--y",
        "1101",
        "--seed",
        "9",
    ]);
    assert_eq!(v["direct"], 0);
    assert_eq!(v["agrees"], true);
    assert_eq!(v["bits_communicated"], 1);
}

#[test]
fn scenarios() {
    let v = json_ok(&["scenario", "check", "--family", "specker"]);
    assert_eq!(v["nondisturbing"], true);
    let v = json_ok(&["scenario", "global-section", "--family", "specker"]);
    assert_eq!(v["has_global_section"], false);
    let v = json_ok(&[
        "scenario",
        "evaluate",
        "--family",
        "kcbs",
        "--gamma",
        "1,1,1,1,-1",
    ]);
    assert_eq!(f(&v["value"]), 5.0);
    assert_eq!(v["violated"], true);
    let out = ctxgraph(&["scenario", "evaluate", "--family", "kcbs"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn membership_on_the_pentagon() {
    let c = 1.0 / 5f64.sqrt();
    let v = json_ok(&[
        "membership",
        "--family",
        "cycle",
        "--n",
        "5",
        "--constant",
        &c.to_string(),
    ]);
    assert_eq!(v["th"]["member"], true);
    assert_eq!(v["stab"]["member"], false);
    assert_eq!(v["qstab"]["member"], true);
    let v = json_ok(&[
        "membership",
        "--family",
        "cycle",
        "--n",
        "5",
        "--p",
        "0.5,0.5,0.5,0.5,0.5",
    ]);
    assert_eq!(v["th"]["member"], false);
    assert!((f(&v["th"]["theta_complement"]) - 5f64.sqrt() / 2.0).abs() < 1e-6);
}

#[test]
fn duality_report() {
    let v = json_ok(&["duality", "--family", "cycle", "--n", "5"]);
    assert_eq!(v["graph"], "C5");
    assert!((f(&v["product"]) - 5.0).abs() < 1e-5);
    assert_eq!(v["self_complementary"], true);
}

#[test]
fn plot_csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycles.csv");
    let out = ctxgraph(&[
        "plotdata",
        "theta-alpha",
        "--family",
        "cycle",
        "--n",
        "5,7",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "graph,n,alpha,theta,alpha_star,theta_over_alpha");
    assert_eq!(lines.len(), 3);
    assert!(
        lines[1].starts_with("C5,5,2,2.2360679775,2.5,"),
        "{}",
        lines[1]
    );
}

#[test]
fn seeded_outputs_are_byte_identical() {
    for args in [
        &[
            "box",
            "ic-vandam",
            "--family",
            "pr",
            "--strength",
            "0.8",
            "--seed",
            "3",
            "--trials",
            "3000",
        ][..],
        &["suite", "ops", "--seed", "7"],
        &["bounds", "--family", "johnson-gqs", "--q", "3", "--s", "1"],
    ] {
        let a = ctxgraph(args);
        let b = ctxgraph(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn suites() {
    let v = json_ok(&["suite", "circulant10"]);
    assert_eq!(v["pass"], true);
    let v = json_ok(&["suite", "acceptance", "--criterion", "1"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["criteria"][0]["id"], 1);
    let out = ctxgraph(&["suite", "acceptance", "--criterion", "11", "--table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("criterion 11: PASS"), "{text}");
}

#[test]
fn every_subcommand_documents_its_json() {
    let leaves: &[&[&str]] = &[
        &["bounds"],
        &["membership"],
        &["duality"],
        &["suite", "ops"],
        &["suite", "circulant10"],
        &["suite", "acceptance"],
        &["ks", "check"],
        &["ks", "multiplicative"],
        &["scenario", "check"],
        &["scenario", "global-section"],
        &["scenario", "evaluate"],
        &["box", "check"],
        &["box", "chsh"],
        &["box", "gyni"],
        &["box", "lo"],
        &["box", "ic-vandam"],
        &["box", "ic-nested"],
        &["box", "ip-protocol"],
        &["plotdata", "theta-alpha"],
    ];
    for leaf in leaves {
        let mut args = leaf.to_vec();
        args.push("--help");
        let out = ctxgraph(&args);
        assert_eq!(out.status.code(), Some(0), "{leaf:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("OUTPUT"), "{leaf:?} help lacks a schema");
    }
}
