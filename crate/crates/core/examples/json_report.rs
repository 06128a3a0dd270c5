//! Runs a job through the library and round-trips its JSON report.

use cartan_hartogs::jobs::{cmd_a2solve, cmd_verify};
use cartan_hartogs::JobReport;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = cmd_a2solve("B(1)", "B(1)")?;
    let text = report.to_json();
    println!("{text}");
    let back = JobReport::from_json(&text)?;
    assert_eq!(back, report);

    let verify = cmd_verify("catalog-bounds", 0, None)?;
    print!("{}", verify.to_text());
    std::process::exit(verify.exit_code());
}
