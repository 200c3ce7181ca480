//! Classic libpcap file format (not pcapng).

use std::io::{self, Write};

use super::dot11::{encode_probe_request, parse_probe_request};
use super::radiotap::{encode_channel_header, parse_radiotap};
use super::{CaptureMeta, CapturedFrame, LinkType, ParseDiagnostics, ProbeRequestFrame};
use crate::{Error, Result};

const MAGIC_MICROS: u32 = 0xA1B2_C3D4;
const MAGIC_NANOS: u32 = 0xA1B2_3C4D;
const GLOBAL_HEADER_LEN: usize = 24;
const RECORD_HEADER_LEN: usize = 16;
const SNAPLEN: u32 = 65_535;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeResolution {
    Micros,
    Nanos,
}

/// Frames read from one pcap file along with what was skipped.
#[derive(Debug, Clone)]
pub struct Capture {
    pub meta: CaptureMeta,
    pub resolution: TimeResolution,
    pub frames: Vec<CapturedFrame>,
    pub diagnostics: ParseDiagnostics,
}

struct Header {
    big_endian: bool,
    resolution: TimeResolution,
    link_type: LinkType,
}

fn read_u32(b: &[u8], big_endian: bool) -> u32 {
    let a = [b[0], b[1], b[2], b[3]];
    if big_endian {
        u32::from_be_bytes(a)
    } else {
        u32::from_le_bytes(a)
    }
}

fn parse_global_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < GLOBAL_HEADER_LEN {
        return Err(Error::PcapHeader(format!(
            "{} bytes, need {GLOBAL_HEADER_LEN}",
            bytes.len()
        )));
    }
    let magic = read_u32(bytes, false);
    let (big_endian, resolution) = match magic {
        MAGIC_MICROS => (false, TimeResolution::Micros),
        MAGIC_NANOS => (false, TimeResolution::Nanos),
        m if m.swap_bytes() == MAGIC_MICROS => (true, TimeResolution::Micros),
        m if m.swap_bytes() == MAGIC_NANOS => (true, TimeResolution::Nanos),
        m => return Err(Error::PcapHeader(format!("bad magic {m:#010x}"))),
    };
    let network = read_u32(&bytes[20..], big_endian);
    let link_type = LinkType::from_code(network & 0xFFFF)?;
    Ok(Header {
        big_endian,
        resolution,
        link_type,
    })
}

/// Parses a pcap byte buffer and keeps only Probe Requests.
///
/// A record whose length runs past the end of the buffer ends the read; the
/// frames before it are returned and `diagnostics.truncated_record` is set.
pub fn read_capture(
    bytes: &[u8],
    path: impl Into<String>,
    declared_channel: Option<u8>,
) -> Result<Capture> {
    let header = parse_global_header(bytes)?;
    let mut diag = ParseDiagnostics::default();
    let mut frames = Vec::new();
    let mut rest = &bytes[GLOBAL_HEADER_LEN..];

    while !rest.is_empty() {
        if rest.len() < RECORD_HEADER_LEN {
            diag.truncated_record = true;
            break;
        }
        let ts_sec = u64::from(read_u32(rest, header.big_endian));
        let ts_frac = u64::from(read_u32(&rest[4..], header.big_endian));
        let incl_len = read_u32(&rest[8..], header.big_endian) as usize;
        rest = &rest[RECORD_HEADER_LEN..];
        if incl_len > rest.len() {
            diag.truncated_record = true;
            break;
        }
        let (data, tail) = rest.split_at(incl_len);
        rest = tail;
        diag.records += 1;

        let frac_us = match header.resolution {
            TimeResolution::Micros => ts_frac,
            TimeResolution::Nanos => ts_frac / 1000,
        };
        let timestamp_us = ts_sec * 1_000_000 + frac_us;

        let (mut payload, radiotap) = match header.link_type {
            LinkType::Ieee80211 => (data, None),
            LinkType::Radiotap => match parse_radiotap(data) {
                Ok(rt) => (&data[rt.header_len..], Some(rt)),
                Err(_) => {
                    diag.radiotap_errors += 1;
                    continue;
                }
            },
        };
        if let Some(rt) = &radiotap {
            if rt.fcs_at_end() && payload.len() >= 4 {
                payload = &payload[..payload.len() - 4];
            }
        }
        let body = match parse_probe_request(payload) {
            Ok(Some(body)) => body,
            Ok(None) => {
                diag.non_probe_skipped += 1;
                continue;
            }
            Err(_) => {
                diag.truncated_frames += 1;
                continue;
            }
        };
        if radiotap.is_some_and(|rt| rt.bad_fcs()) {
            diag.bad_fcs_dropped += 1;
            continue;
        }
        if body.ie_overrun {
            diag.ie_overruns += 1;
        }
        diag.probe_requests += 1;
        frames.push(CapturedFrame {
            timestamp_us,
            source_mac: body.source_mac,
            radiotap_channel: radiotap.and_then(|rt| rt.channel),
            sequence_number: body.sequence_number,
            ies: body.ies,
        });
    }

    Ok(Capture {
        meta: CaptureMeta {
            path: path.into(),
            declared_channel,
            link_type: header.link_type,
        },
        resolution: header.resolution,
        frames,
        diagnostics: diag,
    })
}

/// Writes little-endian microsecond-resolution pcap files.
pub struct PcapWriter<W> {
    inner: W,
    link_type: LinkType,
}

impl<W: Write> PcapWriter<W> {
    pub fn new(mut inner: W, link_type: LinkType) -> io::Result<Self> {
        let mut h = Vec::with_capacity(GLOBAL_HEADER_LEN);
        h.extend_from_slice(&MAGIC_MICROS.to_le_bytes());
        h.extend_from_slice(&2u16.to_le_bytes());
        h.extend_from_slice(&4u16.to_le_bytes());
        h.extend_from_slice(&0i32.to_le_bytes());
        h.extend_from_slice(&0u32.to_le_bytes());
        h.extend_from_slice(&SNAPLEN.to_le_bytes());
        h.extend_from_slice(&link_type.code().to_le_bytes());
        inner.write_all(&h)?;
        Ok(PcapWriter { inner, link_type })
    }

    pub fn write_record(&mut self, timestamp_us: u64, data: &[u8]) -> io::Result<()> {
        let sec = (timestamp_us / 1_000_000) as u32;
        let usec = (timestamp_us % 1_000_000) as u32;
        let len = data.len() as u32;
        self.inner.write_all(&sec.to_le_bytes())?;
        self.inner.write_all(&usec.to_le_bytes())?;
        self.inner.write_all(&len.to_le_bytes())?;
        self.inner.write_all(&len.to_le_bytes())?;
        self.inner.write_all(data)
    }

    /// Writes one Probe Request. With a Radiotap link the header carries
    /// the frame's capture channel unless `omit_channel` is set.
    pub fn write_probe(&mut self, frame: &ProbeRequestFrame, omit_channel: bool) -> io::Result<()> {
        let mut data = match self.link_type {
            LinkType::Radiotap => {
                encode_channel_header((!omit_channel).then_some(frame.capture_channel))
            }
            LinkType::Ieee80211 => Vec::new(),
        };
        data.extend(encode_probe_request(
            frame.source_mac,
            frame.sequence_number,
            &frame.ies,
        ));
        self.write_record(frame.timestamp_us, &data)
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::{InformationElement, MacAddr};

    fn frame(ts: u64, ch: u8) -> ProbeRequestFrame {
        ProbeRequestFrame {
            timestamp_us: ts,
            source_mac: MacAddr([0x02, 0, 0, 0, 0, 9]),
            capture_channel: ch,
            sequence_number: 17,
            ies: vec![
                InformationElement::new(0, vec![]),
                InformationElement::new(3, vec![ch]),
            ],
        }
    }

    fn write(frames: &[ProbeRequestFrame], link: LinkType) -> Vec<u8> {
        let mut w = PcapWriter::new(Vec::new(), link).unwrap();
        for f in frames {
            w.write_probe(f, false).unwrap();
        }
        w.into_inner()
    }

    #[test]
    fn empty_capture() {
        let bytes = write(&[], LinkType::Radiotap);
        assert_eq!(bytes.len(), GLOBAL_HEADER_LEN);
        let cap = read_capture(&bytes, "x.pcap", None).unwrap();
        assert!(cap.frames.is_empty());
        assert_eq!(cap.diagnostics, ParseDiagnostics::default());
    }

    #[test]
    fn bad_global_header() {
        assert!(matches!(
            read_capture(&[0xA1, 0xB2], "x", None),
            Err(Error::PcapHeader(_))
        ));
        let mut bytes = write(&[], LinkType::Radiotap);
        bytes[0] = 0;
        assert!(matches!(read_capture(&bytes, "x", None), Err(Error::PcapHeader(_))));
        let mut bytes = write(&[], LinkType::Radiotap);
        bytes[20] = 1; // ethernet
        assert!(matches!(
            read_capture(&bytes, "x", None),
            Err(Error::UnsupportedLinkType(1))
        ));
    }

    #[test]
    fn reads_probe_and_channel() {
        let f = frame(1_700_000_000_123_456, 6);
        let cap = read_capture(&write(std::slice::from_ref(&f), LinkType::Radiotap), "x", None).unwrap();
        assert_eq!(cap.frames.len(), 1);
        let got = &cap.frames[0];
        assert_eq!(got.timestamp_us, f.timestamp_us);
        assert_eq!(got.radiotap_channel, Some(6));
        assert_eq!(got.ies, f.ies);
        assert_eq!(got.sequence_number, 17);
    }

    #[test]
    fn bare_80211_has_no_channel() {
        let cap = read_capture(&write(&[frame(5, 11)], LinkType::Ieee80211), "x", Some(11)).unwrap();
        assert_eq!(cap.meta.link_type, LinkType::Ieee80211);
        assert_eq!(cap.frames[0].radiotap_channel, None);
        assert_eq!(cap.meta.declared_channel, Some(11));
    }

    #[test]
    fn skips_beacons() {
        let mut w = PcapWriter::new(Vec::new(), LinkType::Radiotap).unwrap();
        w.write_probe(&frame(1, 1), false).unwrap();
        let mut beacon = encode_channel_header(Some(1));
        let dot11_start = beacon.len();
        beacon.extend(encode_probe_request(MacAddr::default(), 0, &[]));
        beacon[dot11_start] = 0x80;
        w.write_record(2, &beacon).unwrap();
        let cap = read_capture(&w.into_inner(), "x", None).unwrap();
        assert_eq!(cap.frames.len(), 1);
        assert_eq!(cap.diagnostics.non_probe_skipped, 1);
        assert_eq!(cap.diagnostics.records, 2);
    }

    #[test]
    fn partial_record_keeps_prefix() {
        let mut bytes = write(&[frame(1, 1), frame(2, 1)], LinkType::Radiotap);
        bytes.truncate(bytes.len() - 3);
        let cap = read_capture(&bytes, "x", None).unwrap();
        assert_eq!(cap.frames.len(), 1);
        assert!(cap.diagnostics.truncated_record);
    }

    #[test]
    fn truncated_80211_header_counted() {
        let mut w = PcapWriter::new(Vec::new(), LinkType::Radiotap).unwrap();
        let mut data = encode_channel_header(Some(1));
        data.extend_from_slice(&[0x40, 0x00, 0x00]);
        w.write_record(1, &data).unwrap();
        let cap = read_capture(&w.into_inner(), "x", None).unwrap();
        assert!(cap.frames.is_empty());
        assert_eq!(cap.diagnostics.truncated_frames, 1);
    }

    #[test]
    fn bad_fcs_dropped_and_fcs_trimmed() {
        let mut w = PcapWriter::new(Vec::new(), LinkType::Radiotap).unwrap();
        for flags in [0x40u8, 0x10] {
            let mut data = vec![0u8, 0, 9, 0];
            data.extend_from_slice(&0x2u32.to_le_bytes());
            data.push(flags);
            data.extend(encode_probe_request(MacAddr([2, 0, 0, 0, 0, 1]), 1, &[
                InformationElement::new(3, vec![6]),
            ]));
            data.extend_from_slice(&[0xDE, 0xAD, 0xBE, 0xEF]);
            w.write_record(1, &data).unwrap();
        }
        let cap = read_capture(&w.into_inner(), "x", Some(6)).unwrap();
        assert_eq!(cap.diagnostics.bad_fcs_dropped, 1);
        assert_eq!(cap.frames.len(), 1);
        assert_eq!(cap.frames[0].ies, vec![InformationElement::new(3, vec![6])]);
        assert_eq!(cap.diagnostics.ie_overruns, 0);
    }

    #[test]
    fn swapped_and_nanosecond_magic() {
        // Hand-build a big-endian nanosecond file with one record.
        let mut probe = encode_channel_header(Some(11));
        probe.extend(encode_probe_request(MacAddr([2, 1, 1, 1, 1, 1]), 3, &[]));
        let mut b = Vec::new();
        b.extend_from_slice(&MAGIC_NANOS.to_be_bytes());
        b.extend_from_slice(&2u16.to_be_bytes());
        b.extend_from_slice(&4u16.to_be_bytes());
        b.extend_from_slice(&[0; 8]);
        b.extend_from_slice(&SNAPLEN.to_be_bytes());
        b.extend_from_slice(&127u32.to_be_bytes());
        b.extend_from_slice(&10u32.to_be_bytes());
        b.extend_from_slice(&123_456_789u32.to_be_bytes());
        b.extend_from_slice(&(probe.len() as u32).to_be_bytes());
        b.extend_from_slice(&(probe.len() as u32).to_be_bytes());
        b.extend_from_slice(&probe);
        let cap = read_capture(&b, "x", None).unwrap();
        assert_eq!(cap.resolution, TimeResolution::Nanos);
        assert_eq!(cap.frames[0].timestamp_us, 10_123_456);
        assert_eq!(cap.frames[0].radiotap_channel, Some(11));
    }
}
