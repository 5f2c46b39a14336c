//! Runs a configuration file through every task it lists and prints the
//! text report. Defaults to the bundled `m1.cfg`.

use std::path::PathBuf;

use ecs_lab::lab::{load_config, run_suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/m1.cfg"));
    let config = load_config(&path)?;
    let report = run_suite(&config);
    print!("{}", report.to_text());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
