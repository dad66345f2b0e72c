//! The invariant suites, as `condensed verify` runs them.

use condensed_discrete::verify::{run_verify, VerifyConfig};

fn main() {
    let cfg = VerifyConfig {
        random_cases: 20,
        ..VerifyConfig::default()
    };
    let rep = run_verify(&cfg);
    for r in &rep.results {
        println!("{:<5} {:<10} {} ({} cases)", if r.passed() { "ok" } else { "FAIL" }, r.suite, r.invariant, r.cases);
    }
    let broken = run_verify(&VerifyConfig {
        random_cases: 2,
        include_broken: true,
        ..VerifyConfig::default()
    });
    for r in broken.failures() {
        println!("with a broken presheaf: {} fails: {}", r.invariant, r.detail.as_deref().unwrap_or(""));
    }
}
