//! Stage 1 alone: DBSCAN over normalized fingerprints of seven devices with
//! distinct templates.
//!
//!     cargo run --example dbscan_fingerprints

use std::collections::BTreeMap;

use probe_derand::cli::{cmd_ingest, RunConfig};
use probe_derand::cluster::{dbscan, DbscanConfig, Label};
use probe_derand::features::normalize_ie_matrix;
use probe_derand::synth::{generate_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/separated.toml"))?;
    let scenario = Scenario::from_toml(&text)?;
    let dir = tempfile::tempdir()?;
    generate_scenario(&scenario, &dir.path().join("data"), false)?;
    let records = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &RunConfig::default())?.records;

    let features: Vec<_> = records.iter().map(|r| r.ie_features).collect();
    let points = normalize_ie_matrix(&features);
    let labels = dbscan(&points, &DbscanConfig::default());

    let mut table: BTreeMap<String, BTreeMap<i64, usize>> = BTreeMap::new();
    for (r, l) in records.iter().zip(&labels) {
        let device = r.truth_device.clone().unwrap_or_default();
        *table.entry(device).or_default().entry(l.as_i64()).or_default() += 1;
    }
    println!("device -> {{cluster: bursts}}  (eps 0.05, MinPts 10, -1 = noise)");
    for (device, counts) in &table {
        println!("{device:>8} -> {counts:?}");
    }
    let clusters = labels.iter().filter_map(|l| l.cluster()).max().map_or(0, |c| c + 1);
    let noise = labels.iter().filter(|l| **l == Label::Noise).count();
    println!("{clusters} clusters, {noise} noise bursts");
    Ok(())
}
