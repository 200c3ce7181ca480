//! How channel jitter on single devices moves the two-stage device count.
//! Identical sweeps give exact counts; a few perturbed bursts make the
//! elbow split a device.
//!
//!     cargo run --release --example jitter_sensitivity

use probe_derand::cli::{cmd_evaluate, cmd_ingest, RunConfig};
use probe_derand::cluster::Method;
use probe_derand::synth::{generate_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/mixed.toml"))?;
    let config = RunConfig::default();
    println!("mean signed delta (clusters - devices) of two-stage, p = 1..10");
    for jitter in [0.0, 0.02, 0.05, 0.1] {
        let mut scenario = Scenario::from_toml(&text)?;
        for p in &mut scenario.profiles {
            p.channel_jitter = jitter;
        }
        let dir = tempfile::tempdir()?;
        generate_scenario(&scenario, &dir.path().join("data"), false)?;
        let ingest = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &config)?;
        let report = cmd_evaluate(&ingest.features_path, &dir.path().join("out"), &config)?;
        let means: Vec<String> = (1..=10)
            .map(|p| {
                let d: Vec<i64> = report
                    .rows
                    .iter()
                    .filter(|r| r.method == Method::TwoStage && r.p == p)
                    .map(|r| r.delta)
                    .collect();
                format!("{:5.1}", d.iter().sum::<i64>() as f64 / d.len() as f64)
            })
            .collect();
        println!("jitter {jitter:<4}: {}", means.join(" "));
    }
    Ok(())
}
