//! Drive the verification engine from code: run a reduced suite,
//! inspect individual checks, and confirm that identical configurations
//! yield byte-identical canonical reports.

use onticqft::verify::{run_suite, RunConfig};
use onticqft::Result;

fn main() -> Result<()> {
    let cfg = RunConfig {
        suites: vec!["cogwheel".into(), "counterexamples".into()],
        cogwheel_dims: vec![2, 4, 8],
        evolution_dims: vec![4],
        random_times: 10,
        ..RunConfig::default()
    };
    let report = run_suite(&cfg)?;

    println!("engine {} ran {} checks\n", report.engine_version, report.checks.len());
    for c in &report.checks {
        println!(
            "{} {:60} measured {:9.2e}  tol {:8.1e}{}",
            if c.satisfied() { "ok  " } else { "FAIL" },
            c.id,
            c.measured,
            c.tolerance,
            if c.expected_fail { "  (expected to exceed)" } else { "" }
        );
    }

    let again = run_suite(&cfg)?;
    println!(
        "\ncanonical reports identical across runs: {}",
        report.to_canonical_json() == again.to_canonical_json()
    );
    println!("all checks satisfied: {}", report.all_satisfied());
    Ok(())
}
