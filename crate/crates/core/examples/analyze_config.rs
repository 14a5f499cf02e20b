//! Full pipeline from a TOML config to a `report.v1` document.
//!
//! `cargo run --example analyze_config -- configs/s2xn2_product.toml`

use std::path::PathBuf;

use yamabe_glue::config::RunConfig;
use yamabe_glue::report::analyze;
use yamabe_glue::verify::{run_suite, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/s1xs2_yamabe.toml"));
    let run = RunConfig::load(&path)?;
    let report = analyze(&run, Some(6), 0)?;
    println!("{report}");
    println!("exit code would be {}", report.exit_code());
    println!("{}", serde_json::to_string(&report.regime)?);

    let checks = run_suite(Suite::Energy)?;
    println!("energy suite: {}/{} pass", checks.iter().filter(|c| c.passed()).count(), checks.len());
    Ok(())
}
