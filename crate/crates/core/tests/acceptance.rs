//! Runs every acceptance criterion and prints one pass/fail line each.
//! `cargo test -p fundgpd --test acceptance -- --nocapture` shows the lines.

use fundgpd::acceptance::{run_all, Config};

#[test]
fn acceptance_criteria() {
    let cfg = Config { timing: true, ..Config::default() };
    let mut failed = Vec::new();
    for (id, outcome) in run_all(&cfg) {
        match outcome {
            Ok(o) => {
                let ok = o.passed && o.within_time();
                let time = match (o.elapsed_ms, o.time_limit_ms) {
                    (Some(t), Some(l)) => format!("{t} ms, limit {l} ms"),
                    (Some(t), None) => format!("{t} ms"),
                    _ => String::new(),
                };
                println!("criterion {id:>2} {}: {} ({time})", if ok { "PASS" } else { "FAIL" }, o.title);
                if !ok {
                    println!("    evidence: {}", o.evidence);
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL: error: {e}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn full_run_passes_and_is_reproducible() {
    let cfg = Config { quick: false, seed: 11, ..Config::default() };
    let render = || {
        let outcomes: Vec<_> = run_all(&cfg).into_iter().map(|(_, o)| o.expect("criterion runs")).collect();
        assert!(outcomes.iter().all(|o| o.passed), "{outcomes:?}");
        serde_json::to_string(&outcomes).unwrap()
    };
    assert_eq!(render(), render());
}
