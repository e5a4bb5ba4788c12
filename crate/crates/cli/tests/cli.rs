use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus_file(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(format!("{name}.json"));
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fundgpd")).args(args).env_remove("FUNDGPD_BUDGET").output().unwrap()
}

fn report(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("fundgpd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn cat_check_on_the_walking_idempotent() {
    let r = report(&["cat", "check", "--in", &corpus_file("category/walking_idempotent")], 0);
    assert_eq!(r["verdicts"]["valid"], true);
    assert_eq!(r["verdicts"]["groupoid"], false);
    assert_eq!(r["schema"], "report/v1");
}

#[test]
fn regular_z2_torsor_class() {
    let r = report(
        &[
            "torsors",
            "enumerate",
            "--groupoid",
            &corpus_file("category/bz2"),
            "--ring",
            &corpus_file("ring/finset"),
            "--bound",
            "4",
        ],
        0,
    );
    assert_eq!(r["certificates"]["classes"], 1);
    assert_eq!(r["certificates"]["automorphism_orders"], serde_json::json!([2]));
}

#[test]
fn bundled_and_file_inputs_agree() {
    let a = report(&["cat", "check", "--in", "corpus:category/bs3"], 0);
    let b = report(&["cat", "check", "--in", &corpus_file("category/bs3")], 0);
    assert_eq!(a, b);
}

#[test]
fn reports_are_deterministic_and_keyed() {
    let args = ["galois", "classify", "--group", "S3", "--q", "2"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    let orders: Vec<u64> = r["certificates"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["automorphism_order"].as_u64().unwrap())
        .collect();
    let mut sorted = orders.clone();
    sorted.sort();
    assert_eq!(sorted, [2, 3, 6]);
    // keys come out sorted
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    assert_eq!(keys, sorted_keys);
    // a different budget is a different run
    let c: Value =
        serde_json::from_slice(&run(&["--budget", "999999", "galois", "classify", "--group", "S3", "--q", "2"]).stdout)
            .unwrap();
    assert_ne!(c["digest"], r["digest"]);
}

#[test]
fn exit_codes() {
    // property failure
    report(&["topos", "good", "--in", "corpus:ring/lattice_chain2"], 1);
    report(&["galois", "separable", "--in", "corpus:algebra/f2_dual_numbers"], 1);
    // usage
    assert_eq!(run(&["cat", "check"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["galois", "classify", "--group", "Nope", "--q", "2"]).status.code(), Some(2));
    // schema
    let bad = scratch(
        "extra.json",
        &std::fs::read_to_string(corpus_file("category/bz2")).unwrap().replacen('{', "{\"colour\":1,", 1),
    );
    let out = run(&["cat", "check", "--in", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    let out = run(&["limit", "product", "--in", "corpus:diagram/equalizer_bz2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema error at kind"));
    // budget, from the environment
    let out = Command::new(env!("CARGO_BIN_EXE_fundgpd"))
        .args(["cat", "functors", "--dom", "corpus:category/bs3", "--cod", "corpus:category/bs3"])
        .env("FUNDGPD_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    // coset enumeration that cannot close
    assert_eq!(run(&["envgpd", "--in", "corpus:category/parallel_pair", "--bound", "500"]).status.code(), Some(4));
}

#[test]
fn axiom_violations_are_reported_not_rejected() {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(corpus_file("category/bz3")).unwrap()).unwrap();
    // a wrong composite breaks associativity
    for entry in doc["compose"].as_array_mut().unwrap() {
        if entry[0] == "1" && entry[1] == "1" {
            entry[2] = "0".into();
        }
    }
    let path = scratch("bz3_broken.json", &doc.to_string());
    let r = report(&["cat", "check", "--in", &path], 1);
    assert_eq!(r["verdicts"]["valid"], false);
    assert!(!r["certificates"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn limits_envelopes_and_descent() {
    let r = report(&["limit", "equalizer", "--in", "corpus:diagram/equalizer_bz2", "--check-universal"], 0);
    assert_eq!(r["certificates"]["apex_summary"]["objects"], 2);
    let r = report(&["envgpd", "--in", "corpus:category/interval"], 0);
    assert_eq!(r["certificates"]["envelope"]["schema"], "category/v1");
    assert_eq!(r["certificates"]["unit"]["schema"], "functor/v1");
    let r = report(
        &[
            "torsors",
            "descend",
            "--ring",
            "corpus:ring/finset",
            "--groupoid",
            "corpus:category/bz2",
            "--target",
            "corpus:category/bz2",
            "--phi",
            "corpus:functor/bz2_identity",
            "--psi",
            "corpus:functor/bz2_collapse",
        ],
        0,
    );
    assert!(r["certificates"]["descent_data"].as_u64().unwrap() > 0);
}

#[test]
fn pushforward_round_trips_through_torsor_check() {
    let r = report(
        &[
            "torsors",
            "push",
            "--in",
            "corpus:torsor/regular_bz2",
            "--target",
            "corpus:category/bz2",
            "--phi",
            "corpus:functor/bz2_collapse",
        ],
        0,
    );
    let pushed = scratch("pushed.json", &r["certificates"]["pushed"].to_string());
    let r = report(&["torsors", "check", "--in", &pushed], 0);
    assert_eq!(r["verdicts"]["tau_iso"], true);
}

#[test]
fn pro_homs() {
    let r = report(&["pro", "hom", "--pro", "zhat:8", "--target", "corpus:category/bs3"], 0);
    assert_eq!(r["certificates"]["hom"]["iso_classes"], 3);
    report(&["pro", "crosscheck", "--group", "Q8", "--q", "3"], 0);
    report(&["pro", "nonrep"], 0);
}

#[test]
fn suite_quick_is_reproducible_and_writes_reports() {
    let dir = std::env::temp_dir().join(format!("fundgpd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&a, &b] {
        let out = run(&["suite", "--quick", "--seed", "3", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let r: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(r["verdicts"].as_object().unwrap().len(), 12);
    assert!(r.get("timing_ms").is_none());

    let r = report(&["suite", "--quick", "--only", "5,9", "--timing"], 0);
    assert_eq!(r["verdicts"].as_object().unwrap().len(), 2);
    assert!(r["timing_ms"].is_u64());
    assert_eq!(run(&["suite", "--only", "13"]).status.code(), Some(2));
}
