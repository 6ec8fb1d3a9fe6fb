//! Running a verification suite from code and writing its report.

use hypeval::verify::{list_suites, run_suite, SuiteConfig};

fn main() -> hypeval::error::Result<()> {
    for s in list_suites() {
        println!("{:<15} {}", s.id, s.summary);
    }
    let mut cfg = SuiteConfig::new("main");
    cfg.out = Some(std::env::temp_dir().join("hypeval-main.json"));
    let report = run_suite(&cfg)?;
    for c in &report.checks {
        println!("{} {:<14} {:.2e} ({:.0} ms)", if c.pass { "PASS" } else { "FAIL" }, c.id, c.residual.unwrap_or(f64::NAN), c.ms);
    }
    println!("{} passed, {} failed; report in {:?}", report.summary.pass, report.summary.fail, cfg.out.unwrap());
    Ok(())
}
