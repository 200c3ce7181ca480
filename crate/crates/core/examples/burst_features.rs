//! Groups a captured sweep into a burst and prints its features: the
//! fingerprint triple and the channel arrival-order vector.
//!
//!     cargo run --example burst_features

use probe_derand::cli::{cmd_ingest, RunConfig};
use probe_derand::synth::{generate_scenario, DeviceProfile, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // One burst of 16 frames, two per channel on most channels, heard by a
    // sniffer on every channel.
    let sweep = vec![1, 1, 2, 2, 5, 7, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13];
    let mut phone = DeviceProfile::new("phone", sweep, 16, 30.0);
    phone.ie_template.ht_capabilities = Some(vec![0xef, 0x01, 0x1b, 0xff, 0xff]);
    phone.ie_template.vendor_specific = vec![vec![0x00, 0x50, 0xf2, 0x08, 0x00, 0x10]];
    let mut scenario = Scenario::new(vec![phone], 30.0, 1);
    scenario.lossless = true;

    let dir = tempfile::tempdir()?;
    generate_scenario(&scenario, &dir.path().join("data"), false)?;
    let out = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &RunConfig::default())?;
    for r in &out.records {
        println!("burst {} from {} (device {:?})", r.burst_id, r.source_mac, r.truth_device);
        println!("  fingerprint [ht, ext, vendor] = {:?}", r.ie_features.0);
        println!("  channel vector (L = {}) = {:?}", r.channel_vector.len(), r.channel_vector);
    }
    Ok(())
}
