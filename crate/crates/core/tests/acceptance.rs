//! The ten acceptance criteria, one pass/fail line each.

use std::io::Write;

use hyperlat::reproduce::{check_criterion, Context, Options, CRITERIA};

// Written to the stdout handle directly so the lines show up even when the
// harness captures `println!`.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let ctx = Context::new(Options::default());
    let mut failed = Vec::new();
    for n in 1..=CRITERIA {
        let claims = check_criterion(&ctx, n);
        let ok = !claims.is_empty() && claims.iter().all(|c| c.passed);
        report(format!(
            "criterion {n:>2}: {} ({} claims)",
            if ok { "PASS" } else { "FAIL" },
            claims.len()
        ));
        for c in claims.iter().filter(|c| !c.passed) {
            report(format!("    {} {}: {}", c.id, c.statement, c.detail));
        }
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
