//! Generators, hand-built fixtures and brute-force oracles for the test
//! suites. The oracles deliberately share no code with the crates under
//! test beyond the data types.

pub mod checks;
pub mod gen;
pub mod oracle;
pub mod script;
pub mod tables;

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// A runner with a fixed seed so that reported counts are reproducible.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}
