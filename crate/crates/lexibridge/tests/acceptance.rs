//! One line per acceptance criterion: verdict, name, tolerance, time and
//! summary. Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use lexibridge_testkit::checks::{self, Outcome};

struct Criterion {
    name: &'static str,
    tolerance: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        name: "table-golden-sums",
        tolerance: "exact",
        budget: Duration::from_secs(1),
        check: checks::golden_sums,
    },
    Criterion {
        name: "parser-fixture",
        tolerance: "exact",
        budget: Duration::from_secs(1),
        check: common::parser_fixture,
    },
    Criterion {
        name: "workflow-exhaustion",
        tolerance: "all paths to length 12",
        budget: Duration::from_secs(5),
        check: || checks::workflow_exhaustion(12),
    },
    Criterion {
        name: "validation-oracles",
        tolerance: "exact, 200 projects of up to 15 synsets",
        budget: Duration::from_secs(10),
        check: || checks::oracle_equivalence(200),
    },
    Criterion {
        name: "accepted-soundness",
        tolerance: "zero errors",
        budget: Duration::from_secs(10),
        check: || checks::accepted_soundness(200),
    },
    Criterion {
        name: "diff-properties",
        tolerance: "exact, 100 pairs",
        budget: Duration::from_secs(5),
        check: || checks::diff_properties(100),
    },
    Criterion {
        name: "persistence-replay",
        tolerance: "exact, 100 sequences",
        budget: Duration::from_secs(10),
        check: || common::persistence_replay(100),
    },
    Criterion {
        name: "expert-redaction",
        tolerance: "exact",
        budget: Duration::from_secs(1),
        check: common::redaction,
    },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(s) if elapsed <= c.budget => (true, s),
            Ok(s) => (false, format!("{s}; over the {:?} budget", c.budget)),
            Err(e) => (false, e),
        };
        println!(
            "{} {} ({}, <{:?}, took {:.3}s) {}",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            c.tolerance,
            c.budget,
            elapsed.as_secs_f64(),
            detail
        );
        if !ok {
            failed.push(c.name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
