//! Sweeps eps and MinPts of the fingerprint stage and prints the table.
//!
//!     cargo run --release --example tune_dbscan -- scenarios/separated.toml

use probe_derand::cli::{cmd_ingest, RunConfig};
use probe_derand::metrics::{tune_dbscan, EvalConfig, LabeledDataset};
use probe_derand::synth::{generate_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/separated.toml").into());
    let scenario = Scenario::from_toml(&std::fs::read_to_string(&path)?)?;
    let dir = tempfile::tempdir()?;
    generate_scenario(&scenario, &dir.path().join("data"), false)?;
    let records = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &RunConfig::default())?.records;
    let dataset = LabeledDataset::from_records(records)?;

    let eps = [0.01, 0.03, 0.05, 0.1, 0.3, 0.6, 1.0];
    let min_pts = [2, 5, 10, 20, 40];
    let rows = tune_dbscan(&dataset, &eps, &min_pts, &EvalConfig::default())?;
    println!("{:>6} {:>7} {:>8} {:>14}", "eps", "min_pts", "mean_v", "mean |delta|");
    for r in &rows {
        println!("{:>6} {:>7} {:>8.4} {:>14.3}", r.eps, r.min_pts, r.mean_v, r.mean_abs_delta);
    }
    Ok(())
}
