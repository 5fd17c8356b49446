//! All ten acceptance criteria at full bounds. Prints one line per criterion.

use tlblob::suite::{run_criterion, SuiteConfig, CRITERIA};

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for k in 1..=CRITERIA.len() {
        let r = run_criterion(k, &cfg).unwrap_or_else(|e| panic!("criterion {} errored: {}", k, e));
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("{} criterion {:>2} {} ({} checks, {} failed, {:.1}s)", tag, k, r.name, r.checks, r.failures, r.elapsed);
        if !r.pass {
            for c in r.report.failures().take(5) {
                println!("    {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
            }
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
