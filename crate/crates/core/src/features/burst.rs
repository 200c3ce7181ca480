use std::collections::HashMap;
use std::time::Duration;

use super::encode::{build_ie_features, IeEncoding, IeFeatureVector};
use crate::capture::{MacAddr, ProbeRequestFrame};

pub const DEFAULT_GAP_SECONDS: f64 = 2.0;

/// Consecutive Probe Requests from one source MAC.
#[derive(Debug, Clone, PartialEq)]
pub struct Burst {
    pub burst_id: u64,
    pub source_mac: MacAddr,
    /// Arrival order; never empty.
    pub frames: Vec<ProbeRequestFrame>,
    /// Fingerprint of the first frame.
    pub ie_features: IeFeatureVector,
    /// DS channel per frame, `channel_vector.len() == frames.len()`.
    pub channel_vector: Vec<u8>,
    pub truth_device: Option<String>,
    /// Frames without a usable DS Parameter Set (their capture channel was used).
    pub ds_fallbacks: usize,
}

impl Burst {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Frames whose own fingerprint differs from the burst's.
    pub fn ie_mismatches(&self, encoding: &IeEncoding) -> usize {
        self.frames
            .iter()
            .filter(|f| build_ie_features(f, encoding) != self.ie_features)
            .count()
    }

    pub fn record(&self) -> BurstRecord {
        BurstRecord {
            burst_id: self.burst_id,
            source_mac: self.source_mac,
            truth_device: self.truth_device.clone(),
            ie_features: self.ie_features,
            channel_vector: self.channel_vector.clone(),
        }
    }
}

/// The clustering-level view of a burst: what the feature file stores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstRecord {
    pub burst_id: u64,
    pub source_mac: MacAddr,
    pub truth_device: Option<String>,
    pub ie_features: IeFeatureVector,
    pub channel_vector: Vec<u8>,
}

/// `f_i` per frame: the DS Parameter Set channel, or the capture channel
/// when the element is missing. Also returns how many frames fell back.
pub fn build_channel_vector(frames: &[ProbeRequestFrame]) -> (Vec<u8>, usize) {
    let mut fallbacks = 0;
    let v = frames
        .iter()
        .map(|f| {
            f.ds_channel().unwrap_or_else(|| {
                fallbacks += 1;
                f.capture_channel
            })
        })
        .collect();
    (v, fallbacks)
}

/// Splits a time-ordered stream into bursts. Frames go to the open burst of
/// their MAC unless more than `gap` has passed since that burst's last
/// frame. Bursts are numbered from 0 in order of their first frame.
pub fn group_bursts(
    frames: &[ProbeRequestFrame],
    gap: Duration,
    encoding: &IeEncoding,
) -> Vec<Burst> {
    let gap_us = gap.as_micros() as u64;
    let mut groups: Vec<Vec<ProbeRequestFrame>> = Vec::new();
    let mut open: HashMap<MacAddr, (usize, u64)> = HashMap::new();
    for frame in frames {
        match open.get_mut(&frame.source_mac) {
            Some((idx, last)) if frame.timestamp_us.saturating_sub(*last) <= gap_us => {
                groups[*idx].push(frame.clone());
                *last = frame.timestamp_us;
            }
            _ => {
                open.insert(frame.source_mac, (groups.len(), frame.timestamp_us));
                groups.push(vec![frame.clone()]);
            }
        }
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(i, frames)| {
            let (channel_vector, ds_fallbacks) = build_channel_vector(&frames);
            Burst {
                burst_id: i as u64,
                source_mac: frames[0].source_mac,
                ie_features: build_ie_features(&frames[0], encoding),
                channel_vector,
                truth_device: None,
                ds_fallbacks,
                frames,
            }
        })
        .collect()
}
