//! Random-subset evaluation of both methods on a scenario file.
//!
//!     cargo run --release --example evaluate_protocol -- scenarios/twins.toml

use probe_derand::cli::{cmd_evaluate, cmd_ingest, RunConfig};
use probe_derand::synth::{generate_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/twins.toml").into());
    let scenario = Scenario::from_toml(&std::fs::read_to_string(&path)?)?;
    let dir = tempfile::tempdir()?;
    let config = RunConfig::default();
    generate_scenario(&scenario, &dir.path().join("data"), false)?;
    let ingest = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &config)?;
    let report = cmd_evaluate(&ingest.features_path, &dir.path().join("out"), &config)?;
    println!("{:<10} {:>3} {:>8} {:>8} {:>8} {:>8}", "method", "p", "mean_h", "mean_c", "mean_v", "rmse");
    for s in &report.summary {
        println!(
            "{:<10} {:>3} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            s.method.to_string(),
            s.p,
            s.mean_h,
            s.mean_c,
            s.mean_v,
            s.rmse
        );
    }
    Ok(())
}
