//! Device profiles and scenarios, loadable from TOML.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::capture::MacAddr;
use crate::seed::DEFAULT_SEED;
use crate::{Error, Result};

/// Frames per burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BurstLength {
    Fixed(usize),
    /// Inclusive bounds.
    Uniform([usize; 2]),
}

impl BurstLength {
    pub fn bounds(self) -> (usize, usize) {
        match self {
            BurstLength::Fixed(n) => (n, n),
            BurstLength::Uniform([a, b]) => (a, b),
        }
    }
}

/// A duration in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interval {
    Fixed(f64),
    /// Half-open `[a, b)`; degenerate when `a == b`.
    Uniform([f64; 2]),
}

impl Interval {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Interval::Fixed(x) => (x, x),
            Interval::Uniform([a, b]) => (a, b),
        }
    }
}

mod hex_bytes {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<u8>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(b) => s.serialize_str(&hex::encode(b)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<u8>>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| hex::decode(s).map_err(D::Error::custom))
            .transpose()
    }

    pub mod list {
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Vec<u8>], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(hex::encode))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<u8>>, D::Error> {
            Vec::<String>::deserialize(d)?
                .into_iter()
                .map(|s| hex::decode(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Element bodies copied verbatim into every frame, written as hex strings
/// in scenario files. Absent elements are not transmitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IeTemplate {
    #[serde(default, with = "hex_bytes", skip_serializing_if = "Option::is_none")]
    pub ht_capabilities: Option<Vec<u8>>,
    #[serde(default, with = "hex_bytes", skip_serializing_if = "Option::is_none")]
    pub extended_capabilities: Option<Vec<u8>>,
    #[serde(default, with = "hex_bytes::list")]
    pub vendor_specific: Vec<Vec<u8>>,
}

fn default_intra_gap() -> f64 {
    0.005
}

fn default_true() -> bool {
    true
}

fn mac_opt<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<MacAddr>, D::Error> {
    Option::<String>::deserialize(d)?
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

fn mac_ser<S: serde::Serializer>(m: &Option<MacAddr>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => s.serialize_str(&m.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceProfile {
    /// Ground-truth label; also the directory name of the device's captures.
    pub device_id: String,
    #[serde(default)]
    pub ie_template: IeTemplate,
    /// Channels swept cyclically within each burst.
    pub pnl_pattern: Vec<u8>,
    pub burst_length: BurstLength,
    /// Start-to-start spacing of bursts.
    pub inter_burst_interval: Interval,
    #[serde(default = "default_intra_gap")]
    pub intra_burst_gap: f64,
    #[serde(default = "default_true")]
    pub randomize_mac: bool,
    /// Address used when `randomize_mac` is off; drawn at random if absent.
    #[serde(
        default,
        deserialize_with = "mac_opt",
        serialize_with = "mac_ser",
        skip_serializing_if = "Option::is_none"
    )]
    pub mac: Option<MacAddr>,
    /// Per-burst probability of replacing one pattern entry.
    #[serde(default)]
    pub channel_jitter: f64,
    /// Leaves out the DS Parameter Set element so receivers must fall back
    /// to the capture channel.
    #[serde(default)]
    pub omit_ds_parameter_set: bool,
}

impl DeviceProfile {
    /// A profile with a fixed-length sweep, randomized MACs and no jitter.
    pub fn new(device_id: impl Into<String>, pnl_pattern: Vec<u8>, burst_length: usize, interval: f64) -> Self {
        DeviceProfile {
            device_id: device_id.into(),
            ie_template: IeTemplate::default(),
            pnl_pattern,
            burst_length: BurstLength::Fixed(burst_length),
            inter_burst_interval: Interval::Fixed(interval),
            intra_burst_gap: default_intra_gap(),
            randomize_mac: true,
            mac: None,
            channel_jitter: 0.0,
            omit_ds_parameter_set: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Scenario(format!("device {:?}: {msg}", self.device_id)));
        let id = self.device_id.as_str();
        if id.is_empty() || id == "." || id == ".." || id.contains(['/', '\\']) {
            return bad("device_id must be a plain directory name".into());
        }
        if self.pnl_pattern.is_empty() {
            return bad("pnl_pattern is empty".into());
        }
        if let Some(ch) = self.pnl_pattern.iter().find(|c| !(1..=13).contains(*c)) {
            return bad(format!("pnl_pattern channel {ch} outside 1..=13"));
        }
        let (lo, hi) = self.burst_length.bounds();
        if lo == 0 || lo > hi {
            return bad(format!("burst_length bounds [{lo}, {hi}] invalid"));
        }
        let (ilo, ihi) = self.inter_burst_interval.bounds();
        if !(ilo.is_finite() && ihi.is_finite() && ilo > 0.0 && ilo <= ihi) {
            return bad(format!("inter_burst_interval bounds [{ilo}, {ihi}] invalid"));
        }
        if !(self.intra_burst_gap >= 1e-6 && self.intra_burst_gap.is_finite()) {
            return bad(format!("intra_burst_gap {} must be at least 1 us", self.intra_burst_gap));
        }
        if (hi - 1) as f64 * self.intra_burst_gap >= ilo {
            return bad("longest burst outlasts the shortest inter-burst interval".into());
        }
        if !(0.0..=1.0).contains(&self.channel_jitter) {
            return bad(format!("channel_jitter {} outside [0, 1]", self.channel_jitter));
        }
        if let Some(m) = self.mac {
            if m.is_multicast() {
                return bad(format!("mac {m} is a group address"));
            }
            if self.randomize_mac {
                return bad("mac is set but randomize_mac is on".into());
            }
        }
        for (name, body) in [
            ("ht_capabilities", &self.ie_template.ht_capabilities),
            ("extended_capabilities", &self.ie_template.extended_capabilities),
        ] {
            if body.as_ref().is_some_and(|b| b.len() > 255) {
                return bad(format!("{name} longer than 255 bytes"));
            }
        }
        if self.ie_template.vendor_specific.iter().any(|b| b.len() > 255) {
            return bad("vendor_specific body longer than 255 bytes".into());
        }
        Ok(())
    }
}

fn default_sniffers() -> Vec<u8> {
    vec![1, 6, 11]
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Seconds of traffic per device.
    pub duration: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_sniffers")]
    pub sniffer_channels: Vec<u8>,
    /// Capture on all 13 channels instead of `sniffer_channels`.
    #[serde(default)]
    pub lossless: bool,
    /// Unix time in seconds of the first burst.
    #[serde(default)]
    pub start_time: f64,
    pub profiles: Vec<DeviceProfile>,
}

impl Scenario {
    pub fn new(profiles: Vec<DeviceProfile>, duration: f64, seed: u64) -> Self {
        Scenario {
            duration,
            seed,
            sniffer_channels: default_sniffers(),
            lossless: false,
            start_time: 0.0,
            profiles,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Scenario(e.to_string()))
    }

    /// Channels that actually capture.
    pub fn capture_channels(&self) -> Vec<u8> {
        if self.lossless {
            (1..=13).collect()
        } else {
            self.sniffer_channels.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Scenario(format!("duration {} must be positive", self.duration)));
        }
        if !(self.start_time >= 0.0 && self.start_time.is_finite()) {
            return Err(Error::Scenario("start_time must be non-negative".into()));
        }
        if self.sniffer_channels.is_empty() {
            return Err(Error::Scenario("sniffer_channels is empty".into()));
        }
        let mut seen = HashSet::new();
        for &ch in &self.sniffer_channels {
            if !(1..=13).contains(&ch) || !seen.insert(ch) {
                return Err(Error::Scenario(format!("sniffer channel {ch} invalid or repeated")));
            }
        }
        let mut ids = HashSet::new();
        for p in &self.profiles {
            p.validate()?;
            if !ids.insert(p.device_id.as_str()) {
                return Err(Error::Scenario(format!("duplicate device_id {:?}", p.device_id)));
            }
        }
        Ok(())
    }
}
