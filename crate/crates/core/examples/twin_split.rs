//! Two devices with identical fingerprints but opposite sweep orders:
//! stage 1 merges them, stage 2 separates them.
//!
//!     cargo run --example twin_split

use probe_derand::cli::{cmd_ingest, RunConfig};
use probe_derand::cluster::{cluster_bursts, DbscanConfig, KmeansConfig, Method};
use probe_derand::metrics::score_labeling;
use probe_derand::synth::{generate_scenario, DeviceProfile, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut a = DeviceProfile::new("twin-a", vec![1, 6, 11], 3, 15.0);
    a.ie_template.ht_capabilities = Some(vec![0x2d, 0x01, 0x1b, 0xff]);
    a.ie_template.extended_capabilities = Some(vec![0x04, 0x00, 0x08]);
    let mut b = a.clone();
    b.device_id = "twin-b".into();
    b.pnl_pattern = vec![11, 6, 1];
    let scenario = Scenario::new(vec![a, b], 300.0, 11);

    let dir = tempfile::tempdir()?;
    generate_scenario(&scenario, &dir.path().join("data"), false)?;
    let records = cmd_ingest(&dir.path().join("data"), &dir.path().join("out"), &RunConfig::default())?.records;
    println!("{} bursts from 2 devices", records.len());
    for method in [Method::IeOnly, Method::TwoStage] {
        let labeling = cluster_bursts(&records, method, &DbscanConfig::default(), &KmeansConfig::default())?;
        let m = score_labeling(&records, &labeling.fine)?;
        println!(
            "{method:>9}: {} clusters, homogeneity {:.3}, completeness {:.3}, V {:.3}",
            labeling.fine.n_clusters(),
            m.homogeneity,
            m.completeness,
            m.v_measure
        );
    }
    Ok(())
}
