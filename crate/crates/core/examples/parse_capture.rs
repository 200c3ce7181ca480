//! Reads a pcap and lists its Probe Requests.
//!
//!     cargo run --example parse_capture -- path/to/6.pcap
//!
//! Without an argument a small capture is synthesized in memory first.

use probe_derand::capture::{read_capture, ProbeRequestFrame};
use probe_derand::seed;
use probe_derand::synth::{generate_device, write_capture, DeviceProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (name, bytes) = match std::env::args().nth(1) {
        Some(path) => (path.clone(), std::fs::read(&path)?),
        None => {
            let profile = DeviceProfile::new("demo", vec![1, 6, 11], 3, 10.0);
            let frames: Vec<ProbeRequestFrame> = generate_device(&profile, 30.0, &mut seed::rng(1))
                .into_iter()
                .map(|f| f.frame)
                .collect();
            ("<synthetic>".to_string(), write_capture(Vec::new(), &frames, None)?)
        }
    };
    // A file named after its channel (e.g. 6.pcap) supplies the channel when
    // the Radiotap header lacks one.
    let declared = std::path::Path::new(&name)
        .file_stem()
        .and_then(|s| s.to_str()?.parse().ok());
    let cap = read_capture(&bytes, name.as_str(), declared)?;
    println!("{name}: {:?} link, {:?} timestamps", cap.meta.link_type, cap.resolution);
    for f in &cap.frames {
        let ids: Vec<u8> = f.ies.iter().map(|ie| ie.id).collect();
        println!(
            "{:>16} us  {}  seq {:>4}  radiotap ch {:?}  elements {:?}",
            f.timestamp_us, f.source_mac, f.sequence_number, f.radiotap_channel, ids
        );
    }
    println!("{:?}", cap.diagnostics);
    Ok(())
}
