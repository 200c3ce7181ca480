//! Pcap ingestion: Radiotap and 802.11 parsing, Probe Request filtering and
//! the merge of per-channel sniffer captures into one time-ordered stream.

mod dot11;
mod merge;
mod pcap;
mod radiotap;

use std::fmt;
use std::str::FromStr;

pub use dot11::{
    ds_channel, find_ie, parse_ies, parse_probe_request, Dot11Error, ProbeBody, IE_DS_PARAMETER_SET,
    IE_EXTENDED_CAPABILITIES, IE_HT_CAPABILITIES, IE_SSID, IE_SUPPORTED_RATES, IE_VENDOR_SPECIFIC,
};
pub use merge::merge_captures;
pub use pcap::{read_capture, Capture, PcapWriter, TimeResolution};
pub use radiotap::{channel_to_freq, freq_to_channel, parse_radiotap, Radiotap};

use crate::{Error, Result};

/// 48-bit IEEE 802 hardware address.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MacAddr(pub [u8; 6]);

impl MacAddr {
    /// Bit 1 of the first octet: the address was not assigned by a vendor.
    pub fn is_locally_administered(&self) -> bool {
        self.0[0] & 0x02 != 0
    }

    pub fn is_multicast(&self) -> bool {
        self.0[0] & 0x01 != 0
    }
}

impl fmt::Display for MacAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.0;
        write!(
            f,
            "{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}",
            b[0], b[1], b[2], b[3], b[4], b[5]
        )
    }
}

impl fmt::Debug for MacAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MacAddr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 6];
        let mut parts = s.split(':');
        for slot in out.iter_mut() {
            let part = parts.next().ok_or_else(|| format!("bad MAC address {s:?}"))?;
            if part.len() != 2 {
                return Err(format!("bad MAC address {s:?}"));
            }
            *slot = u8::from_str_radix(part, 16).map_err(|_| format!("bad MAC address {s:?}"))?;
        }
        if parts.next().is_some() {
            return Err(format!("bad MAC address {s:?}"));
        }
        Ok(MacAddr(out))
    }
}

/// One tagged parameter of a management frame body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InformationElement {
    pub id: u8,
    pub body: Vec<u8>,
}

impl InformationElement {
    /// Panics if `body` is longer than 255 bytes.
    pub fn new(id: u8, body: impl Into<Vec<u8>>) -> Self {
        let body = body.into();
        assert!(body.len() <= 255, "IE body of {} bytes", body.len());
        InformationElement { id, body }
    }

    pub fn len(&self) -> u8 {
        self.body.len() as u8
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// Appends the on-wire TLV encoding.
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.push(self.id);
        out.push(self.len());
        out.extend_from_slice(&self.body);
    }
}

/// A Probe Request as it comes out of one capture file. The capture channel
/// is only known when the Radiotap header carried it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapturedFrame {
    /// Microseconds since the Unix epoch.
    pub timestamp_us: u64,
    pub source_mac: MacAddr,
    pub radiotap_channel: Option<u8>,
    pub sequence_number: u16,
    pub ies: Vec<InformationElement>,
}

impl CapturedFrame {
    pub fn with_channel(self, capture_channel: u8) -> ProbeRequestFrame {
        ProbeRequestFrame {
            timestamp_us: self.timestamp_us,
            source_mac: self.source_mac,
            capture_channel,
            sequence_number: self.sequence_number,
            ies: self.ies,
        }
    }
}

/// A Probe Request with its capture channel resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRequestFrame {
    /// Microseconds since the Unix epoch.
    pub timestamp_us: u64,
    /// 802.11 Address 2.
    pub source_mac: MacAddr,
    /// Channel of the sniffer that saw the frame, 1..=13.
    pub capture_channel: u8,
    /// Upper 12 bits of Sequence Control.
    pub sequence_number: u16,
    /// Tagged parameters in on-wire order.
    pub ies: Vec<InformationElement>,
}

impl ProbeRequestFrame {
    pub fn timestamp_secs(&self) -> f64 {
        self.timestamp_us as f64 / 1e6
    }

    /// Current Channel of the DS Parameter Set IE, when present and valid.
    pub fn ds_channel(&self) -> Option<u8> {
        ds_channel(&self.ies)
    }
}

/// Link-layer types accepted in the pcap global header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkType {
    /// DLT_IEEE802_11_RADIO
    Radiotap,
    /// DLT_IEEE802_11
    Ieee80211,
}

impl LinkType {
    pub fn code(self) -> u32 {
        match self {
            LinkType::Radiotap => 127,
            LinkType::Ieee80211 => 105,
        }
    }

    pub fn from_code(code: u32) -> Result<Self> {
        match code {
            127 => Ok(LinkType::Radiotap),
            105 => Ok(LinkType::Ieee80211),
            other => Err(Error::UnsupportedLinkType(other)),
        }
    }
}

/// Where a capture came from and what can be assumed about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureMeta {
    pub path: String,
    /// Sniffer channel, used for frames whose Radiotap header has none.
    pub declared_channel: Option<u8>,
    pub link_type: LinkType,
}

/// Counters for everything `read_capture` skipped or repaired.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub records: usize,
    pub probe_requests: usize,
    pub non_probe_skipped: usize,
    pub truncated_frames: usize,
    pub radiotap_errors: usize,
    pub bad_fcs_dropped: usize,
    pub ie_overruns: usize,
    /// A record header declared more bytes than remained in the file.
    pub truncated_record: bool,
}

impl ParseDiagnostics {
    pub fn absorb(&mut self, other: &ParseDiagnostics) {
        self.records += other.records;
        self.probe_requests += other.probe_requests;
        self.non_probe_skipped += other.non_probe_skipped;
        self.truncated_frames += other.truncated_frames;
        self.radiotap_errors += other.radiotap_errors;
        self.bad_fcs_dropped += other.bad_fcs_dropped;
        self.ie_overruns += other.ie_overruns;
        self.truncated_record |= other.truncated_record;
    }
}
