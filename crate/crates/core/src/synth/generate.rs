//! Frame synthesis and the idealized sniffer model.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::profile::{DeviceProfile, Interval, Scenario};
use crate::capture::{
    InformationElement, MacAddr, ProbeRequestFrame, IE_DS_PARAMETER_SET, IE_EXTENDED_CAPABILITIES,
    IE_HT_CAPABILITIES, IE_SSID, IE_SUPPORTED_RATES, IE_VENDOR_SPECIFIC,
};
use crate::seed;

/// 1, 2, 5.5 and 11 Mb/s, all basic.
const SUPPORTED_RATES: [u8; 4] = [0x82, 0x84, 0x8b, 0x96];

/// A generated frame and the device that sent it. `frame.capture_channel`
/// holds the transmit channel until a sniffer claims the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledFrame {
    pub frame: ProbeRequestFrame,
    pub device_id: String,
}

fn random_mac(rng: &mut ChaCha8Rng) -> MacAddr {
    let mut b: [u8; 6] = rng.random();
    b[0] = (b[0] | 0x02) & !0x01;
    MacAddr(b)
}

fn fresh_mac(rng: &mut ChaCha8Rng, used: &mut HashSet<MacAddr>) -> MacAddr {
    loop {
        let m = random_mac(rng);
        if used.insert(m) {
            return m;
        }
    }
}

fn draw_interval(rng: &mut ChaCha8Rng, d: Interval) -> f64 {
    match d {
        Interval::Fixed(x) => x,
        Interval::Uniform([a, b]) if a < b => rng.random_range(a..b),
        Interval::Uniform([a, _]) => a,
    }
}

fn frame_ies(profile: &DeviceProfile, channel: u8) -> Vec<InformationElement> {
    let t = &profile.ie_template;
    let mut ies = vec![
        InformationElement::new(IE_SSID, Vec::new()),
        InformationElement::new(IE_SUPPORTED_RATES, SUPPORTED_RATES.to_vec()),
    ];
    if !profile.omit_ds_parameter_set {
        ies.push(InformationElement::new(IE_DS_PARAMETER_SET, vec![channel]));
    }
    if let Some(b) = &t.ht_capabilities {
        ies.push(InformationElement::new(IE_HT_CAPABILITIES, b.clone()));
    }
    if let Some(b) = &t.extended_capabilities {
        ies.push(InformationElement::new(IE_EXTENDED_CAPABILITIES, b.clone()));
    }
    for b in &t.vendor_specific {
        ies.push(InformationElement::new(IE_VENDOR_SPECIFIC, b.clone()));
    }
    ies
}

/// Channels of one burst: the pattern walked cyclically for `len` frames,
/// then with probability `jitter` one entry replaced by a different channel.
fn burst_channels(rng: &mut ChaCha8Rng, pattern: &[u8], len: usize, jitter: f64) -> Vec<u8> {
    let mut chans: Vec<u8> = pattern.iter().copied().cycle().take(len).collect();
    if jitter > 0.0 && rng.random_bool(jitter) {
        let pos = rng.random_range(0..len);
        let mut ch = rng.random_range(1..=12u8);
        if ch >= chans[pos] {
            ch += 1;
        }
        chans[pos] = ch;
    }
    chans
}

pub(crate) fn generate_device_into(
    profile: &DeviceProfile,
    duration: f64,
    start_time: f64,
    rng: &mut ChaCha8Rng,
    used_macs: &mut HashSet<MacAddr>,
) -> Vec<LabeledFrame> {
    let mut seq: u16 = rng.random_range(0..4096);
    let fixed_mac = match (profile.randomize_mac, profile.mac) {
        (true, _) => None,
        (false, Some(m)) => Some(m),
        (false, None) => Some(fresh_mac(rng, used_macs)),
    };
    let (lo, hi) = profile.burst_length.bounds();
    let mut out = Vec::new();
    let mut t = 0.0;
    while t < duration {
        let len = rng.random_range(lo..=hi);
        let chans = burst_channels(rng, &profile.pnl_pattern, len, profile.channel_jitter);
        let mac = fixed_mac.unwrap_or_else(|| fresh_mac(rng, used_macs));
        for (j, &ch) in chans.iter().enumerate() {
            let at = start_time + t + j as f64 * profile.intra_burst_gap;
            out.push(LabeledFrame {
                frame: ProbeRequestFrame {
                    timestamp_us: (at * 1e6).round() as u64,
                    source_mac: mac,
                    capture_channel: ch,
                    sequence_number: seq,
                    ies: frame_ies(profile, ch),
                },
                device_id: profile.device_id.clone(),
            });
            seq = (seq + 1) % 4096;
        }
        t += draw_interval(rng, profile.inter_burst_interval);
    }
    out
}

/// All frames one device sends in `[0, duration)` seconds, bursts starting
/// at 0 and spaced by sampled inter-burst intervals.
pub fn generate_device(profile: &DeviceProfile, duration: f64, rng: &mut ChaCha8Rng) -> Vec<LabeledFrame> {
    generate_device_into(profile, duration, 0.0, rng, &mut HashSet::new())
}

/// Frames of every device in profile order. Device `i` draws from
/// stream `i` of the scenario's generation seed; random MACs never repeat
/// across the scenario.
pub fn generate_frames(scenario: &Scenario) -> Vec<Vec<LabeledFrame>> {
    let base = seed::substream(scenario.seed, "generation");
    let mut used = HashSet::new();
    for p in &scenario.profiles {
        if let Some(m) = p.mac {
            used.insert(m);
        }
    }
    scenario
        .profiles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = seed::rng(seed::indexed(base, i as u64));
            generate_device_into(p, scenario.duration, scenario.start_time, &mut rng, &mut used)
        })
        .collect()
}

/// A frame is heard only by the sniffer parked on its transmit channel.
/// Every sniffer gets an entry, possibly empty.
pub fn assign_to_sniffers(frames: &[LabeledFrame], sniffer_channels: &[u8]) -> BTreeMap<u8, Vec<LabeledFrame>> {
    let mut map: BTreeMap<u8, Vec<LabeledFrame>> =
        sniffer_channels.iter().map(|&c| (c, Vec::new())).collect();
    for f in frames {
        if let Some(list) = map.get_mut(&f.frame.capture_channel) {
            list.push(f.clone());
        }
    }
    map
}
