//! 802.11 management header and tagged-parameter (IE) walk.

use super::{InformationElement, MacAddr};

pub const IE_SSID: u8 = 0;
pub const IE_SUPPORTED_RATES: u8 = 1;
pub const IE_DS_PARAMETER_SET: u8 = 3;
pub const IE_HT_CAPABILITIES: u8 = 45;
pub const IE_EXTENDED_CAPABILITIES: u8 = 127;
pub const IE_VENDOR_SPECIFIC: u8 = 221;

/// Frame Control byte 0 of a Probe Request: version 0, type 00, subtype 0100.
const FC0_PROBE_REQUEST: u8 = 0x40;
/// Frame Control byte 1, Order bit: an HT Control field follows Sequence Control.
const FC1_ORDER: u8 = 0x80;
const MGMT_HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dot11Error {
    Truncated { needed: usize, available: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeBody {
    pub source_mac: MacAddr,
    pub sequence_number: u16,
    pub ies: Vec<InformationElement>,
    /// The last tagged parameter overran the buffer and was dropped.
    pub ie_overrun: bool,
}

/// Walks a tagged-parameter region. Returns the complete elements and
/// whether a trailing element was cut short (it is dropped, the walk stops).
pub fn parse_ies(bytes: &[u8]) -> (Vec<InformationElement>, bool) {
    let mut out = Vec::new();
    let mut rest = bytes;
    while !rest.is_empty() {
        let [id, len, tail @ ..] = rest else {
            return (out, true);
        };
        let len = usize::from(*len);
        if tail.len() < len {
            return (out, true);
        }
        out.push(InformationElement {
            id: *id,
            body: tail[..len].to_vec(),
        });
        rest = &tail[len..];
    }
    (out, false)
}

pub fn find_ie(ies: &[InformationElement], id: u8) -> Option<&InformationElement> {
    ies.iter().find(|ie| ie.id == id)
}

/// Current Channel of the first DS Parameter Set, if it names channel 1..=13.
pub fn ds_channel(ies: &[InformationElement]) -> Option<u8> {
    find_ie(ies, IE_DS_PARAMETER_SET)
        .and_then(|ie| ie.body.first().copied())
        .filter(|ch| (1..=13).contains(ch))
}

/// Parses an 802.11 frame. `Ok(None)` for anything that is not a Probe Request.
pub fn parse_probe_request(frame: &[u8]) -> Result<Option<ProbeBody>, Dot11Error> {
    if frame.len() < 2 {
        return Err(Dot11Error::Truncated {
            needed: 2,
            available: frame.len(),
        });
    }
    if frame[0] != FC0_PROBE_REQUEST {
        return Ok(None);
    }
    let header_len = if frame[1] & FC1_ORDER != 0 {
        MGMT_HEADER_LEN + 4
    } else {
        MGMT_HEADER_LEN
    };
    if frame.len() < header_len {
        return Err(Dot11Error::Truncated {
            needed: header_len,
            available: frame.len(),
        });
    }
    let mut mac = [0u8; 6];
    mac.copy_from_slice(&frame[10..16]);
    let seq_ctl = u16::from_le_bytes([frame[22], frame[23]]);
    let (ies, ie_overrun) = parse_ies(&frame[header_len..]);
    Ok(Some(ProbeBody {
        source_mac: MacAddr(mac),
        sequence_number: seq_ctl >> 4,
        ies,
        ie_overrun,
    }))
}

/// Builds a broadcast Probe Request frame (no FCS).
pub(crate) fn encode_probe_request(
    source: MacAddr,
    sequence_number: u16,
    ies: &[InformationElement],
) -> Vec<u8> {
    let mut f = Vec::with_capacity(MGMT_HEADER_LEN + 64);
    f.extend_from_slice(&[FC0_PROBE_REQUEST, 0x00, 0x00, 0x00]);
    f.extend_from_slice(&[0xFF; 6]);
    f.extend_from_slice(&source.0);
    f.extend_from_slice(&[0xFF; 6]);
    f.extend_from_slice(&((sequence_number & 0x0FFF) << 4).to_le_bytes());
    for ie in ies {
        ie.encode_into(&mut f);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ds_parameter_set_element() {
        let (ies, overrun) = parse_ies(&[0x03, 0x01, 0x0B]);
        assert!(!overrun);
        assert_eq!(ies, vec![InformationElement::new(3, vec![0x0B])]);
        assert_eq!(ds_channel(&ies), Some(11));
    }

    #[test]
    fn wildcard_ssid() {
        let (ies, overrun) = parse_ies(&[0x00, 0x00]);
        assert!(!overrun);
        assert_eq!(ies, vec![InformationElement::new(0, vec![])]);
    }

    #[test]
    fn overrunning_element_is_dropped() {
        let (ies, overrun) = parse_ies(&[0x2D, 0x01, 0xFF, 0x7F, 0x05, 0x01]);
        assert!(overrun);
        assert_eq!(ies, vec![InformationElement::new(45, vec![0xFF])]);
        // Lone id byte with no length.
        let (ies, overrun) = parse_ies(&[0x00, 0x00, 0x03]);
        assert!(overrun);
        assert_eq!(ies.len(), 1);
        assert_eq!(parse_ies(&[]), (vec![], false));
    }

    #[test]
    fn ds_channel_rejects_out_of_band_values() {
        assert_eq!(ds_channel(&[InformationElement::new(3, vec![14])]), None);
        assert_eq!(ds_channel(&[InformationElement::new(3, vec![])]), None);
        assert_eq!(ds_channel(&[]), None);
    }

    #[test]
    fn frame_control_filter() {
        let mac = MacAddr([2, 1, 2, 3, 4, 5]);
        let mut frame = encode_probe_request(mac, 4095, &[InformationElement::new(3, vec![6])]);
        assert_eq!(frame[0], 0x40);
        let body = parse_probe_request(&frame).unwrap().unwrap();
        assert_eq!(body.source_mac, mac);
        assert_eq!(body.sequence_number, 4095);
        assert_eq!(ds_channel(&body.ies), Some(6));

        frame[0] = 0x80; // beacon
        assert_eq!(parse_probe_request(&frame).unwrap(), None);
        frame[0] = 0x50; // probe response
        assert_eq!(parse_probe_request(&frame).unwrap(), None);
        assert!(parse_probe_request(&[0x40, 0, 0]).is_err());
    }

    #[test]
    fn order_bit_skips_ht_control() {
        let mac = MacAddr([2, 0, 0, 0, 0, 1]);
        let mut frame = encode_probe_request(mac, 7, &[]);
        frame[1] |= FC1_ORDER;
        frame.extend_from_slice(&[0xAA; 4]); // HT Control
        frame.extend_from_slice(&[3, 1, 1]);
        let body = parse_probe_request(&frame).unwrap().unwrap();
        assert_eq!(body.ies, vec![InformationElement::new(3, vec![1])]);
    }
}
