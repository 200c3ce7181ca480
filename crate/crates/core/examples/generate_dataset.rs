//! Writes a scenario file out as `<root>/<device>/<channel>.pcap`.
//!
//!     cargo run --example generate_dataset -- scenarios/mixed.toml /tmp/mixed

use std::path::PathBuf;

use probe_derand::synth::{generate_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/twins.toml").into());
    let root = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("probe-derand-dataset"));
    let scenario = Scenario::from_toml(&std::fs::read_to_string(&path)?)?;
    let g = generate_scenario(&scenario, &root, true)?;
    println!(
        "{} devices, {} capture files, {} of {} frames heard by the sniffers",
        scenario.profiles.len(),
        g.files.len(),
        g.frames_captured,
        g.frames_sent
    );
    println!("dataset at {}", g.root.display());
    Ok(())
}
