//! Minimal Radiotap reader: header length, Flags and Channel.

use crate::{Error, Result};

const PRESENT_TSFT: u32 = 1 << 0;
const PRESENT_FLAGS: u32 = 1 << 1;
const PRESENT_RATE: u32 = 1 << 2;
const PRESENT_CHANNEL: u32 = 1 << 3;
const PRESENT_EXT: u32 = 1 << 31;

/// Flags byte: frame carries a trailing 4-byte FCS.
pub const FLAG_FCS_AT_END: u8 = 0x10;
/// Flags byte: FCS check failed.
pub const FLAG_BAD_FCS: u8 = 0x40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Radiotap {
    pub header_len: usize,
    /// 2.4 GHz channel 1..=13 derived from the Channel field frequency.
    pub channel: Option<u8>,
    pub frequency_mhz: Option<u16>,
    pub flags: Option<u8>,
}

impl Radiotap {
    pub fn bad_fcs(&self) -> bool {
        self.flags.is_some_and(|f| f & FLAG_BAD_FCS != 0)
    }

    pub fn fcs_at_end(&self) -> bool {
        self.flags.is_some_and(|f| f & FLAG_FCS_AT_END != 0)
    }
}

/// Channel number for a 2.4 GHz centre frequency, channels 1..=13 only.
pub fn freq_to_channel(freq_mhz: u16) -> Option<u8> {
    if (2412..=2472).contains(&freq_mhz) && (freq_mhz - 2407).is_multiple_of(5) {
        Some(((freq_mhz - 2407) / 5) as u8)
    } else {
        None
    }
}

pub fn channel_to_freq(channel: u8) -> Option<u16> {
    (1..=13)
        .contains(&channel)
        .then(|| 2407 + 5 * u16::from(channel))
}

fn align_up(offset: usize, align: usize) -> usize {
    (offset + align - 1) & !(align - 1)
}

fn le_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

pub fn parse_radiotap(bytes: &[u8]) -> Result<Radiotap> {
    if bytes.len() < 8 {
        return Err(Error::RadiotapTruncated {
            declared: 8,
            available: bytes.len(),
        });
    }
    if bytes[0] != 0 {
        return Err(Error::Radiotap(format!("unsupported version {}", bytes[0])));
    }
    let header_len = usize::from(u16::from_le_bytes([bytes[2], bytes[3]]));
    if header_len > bytes.len() {
        return Err(Error::RadiotapTruncated {
            declared: header_len,
            available: bytes.len(),
        });
    }
    if header_len < 8 {
        return Err(Error::Radiotap(format!("header length {header_len} below 8")));
    }
    let hdr = &bytes[..header_len];

    // Only the first presence word matters for the fields read here, but
    // every extension word shifts where the field data begins.
    let present = le_u32(hdr, 4);
    let mut word = present;
    let mut offset = 8;
    while word & PRESENT_EXT != 0 {
        if offset + 4 > header_len {
            return Err(Error::Radiotap("presence bitmap runs past header".into()));
        }
        word = le_u32(hdr, offset);
        offset += 4;
    }

    let mut out = Radiotap {
        header_len,
        channel: None,
        frequency_mhz: None,
        flags: None,
    };
    // (bit, size, alignment) for the fields up to Channel.
    for (bit, size, align) in [
        (PRESENT_TSFT, 8, 8),
        (PRESENT_FLAGS, 1, 1),
        (PRESENT_RATE, 1, 1),
        (PRESENT_CHANNEL, 4, 2),
    ] {
        if present & bit == 0 {
            continue;
        }
        offset = align_up(offset, align);
        if offset + size > header_len {
            return Err(Error::Radiotap("field runs past header".into()));
        }
        match bit {
            PRESENT_FLAGS => out.flags = Some(hdr[offset]),
            PRESENT_CHANNEL => {
                let freq = u16::from_le_bytes([hdr[offset], hdr[offset + 1]]);
                out.frequency_mhz = Some(freq);
                out.channel = freq_to_channel(freq);
            }
            _ => {}
        }
        offset += size;
    }
    Ok(out)
}

/// Encodes the header `PcapWriter` emits: version 0, Channel field only.
pub(crate) fn encode_channel_header(channel: Option<u8>) -> Vec<u8> {
    match channel.and_then(channel_to_freq) {
        Some(freq) => {
            let mut h = vec![0u8, 0, 12, 0];
            h.extend_from_slice(&PRESENT_CHANNEL.to_le_bytes());
            h.extend_from_slice(&freq.to_le_bytes());
            // CCK | 2 GHz spectrum
            h.extend_from_slice(&0x00A0u16.to_le_bytes());
            h
        }
        None => vec![0, 0, 8, 0, 0, 0, 0, 0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_header() {
        let r = parse_radiotap(&[0, 0, 8, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(r.header_len, 8);
        assert_eq!(r.channel, None);
        assert_eq!(r.flags, None);
    }

    #[test]
    fn frequency_mapping() {
        assert_eq!(freq_to_channel(2437), Some(6));
        assert_eq!(freq_to_channel(2412), Some(1));
        assert_eq!(freq_to_channel(2472), Some(13));
        assert_eq!(freq_to_channel(2484), None);
        assert_eq!(freq_to_channel(5180), None);
        assert_eq!(freq_to_channel(2413), None);
        for ch in 1..=13 {
            assert_eq!(freq_to_channel(channel_to_freq(ch).unwrap()), Some(ch));
        }
        assert_eq!(channel_to_freq(14), None);
    }

    #[test]
    fn channel_field_after_tsft_and_flags() {
        // present: TSFT | Flags | Rate | Channel
        let mut h = vec![0u8, 0, 0, 0];
        h.extend_from_slice(&0x0000_000Fu32.to_le_bytes());
        h.extend_from_slice(&[0u8; 8]); // TSFT at 8
        h.push(FLAG_BAD_FCS); // Flags at 16
        h.push(2); // Rate at 17
        h.extend_from_slice(&2437u16.to_le_bytes()); // Channel at 18 (aligned)
        h.extend_from_slice(&0u16.to_le_bytes());
        let len = h.len() as u16;
        h[2..4].copy_from_slice(&len.to_le_bytes());
        let r = parse_radiotap(&h).unwrap();
        assert_eq!(r.header_len, 22);
        assert_eq!(r.channel, Some(6));
        assert!(r.bad_fcs());
    }

    #[test]
    fn channel_alignment_padding() {
        // Flags only then Channel: flags at 8, pad byte at 9, channel at 10.
        let mut h = vec![0u8, 0, 14, 0];
        h.extend_from_slice(&(PRESENT_FLAGS | PRESENT_CHANNEL).to_le_bytes());
        h.push(0);
        h.push(0xEE); // padding
        h.extend_from_slice(&2412u16.to_le_bytes());
        h.extend_from_slice(&0u16.to_le_bytes());
        let r = parse_radiotap(&h).unwrap();
        assert_eq!(r.channel, Some(1));
        assert!(!r.bad_fcs());
    }

    #[test]
    fn extended_presence_bitmap() {
        // Two presence words; Channel data starts at 12.
        let mut h = vec![0u8, 0, 16, 0];
        h.extend_from_slice(&(PRESENT_CHANNEL | PRESENT_EXT).to_le_bytes());
        h.extend_from_slice(&0u32.to_le_bytes());
        h.extend_from_slice(&2462u16.to_le_bytes());
        h.extend_from_slice(&0u16.to_le_bytes());
        assert_eq!(parse_radiotap(&h).unwrap().channel, Some(11));
    }

    #[test]
    fn truncated_header() {
        let err = parse_radiotap(&[0, 0, 32, 0, 0, 0, 0, 0]).unwrap_err();
        assert!(matches!(
            err,
            Error::RadiotapTruncated {
                declared: 32,
                available: 8
            }
        ));
        assert!(parse_radiotap(&[0, 0, 8]).is_err());
        assert!(parse_radiotap(&[1, 0, 8, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn encoded_header_round_trips() {
        for ch in 1..=13u8 {
            let h = encode_channel_header(Some(ch));
            let r = parse_radiotap(&h).unwrap();
            assert_eq!((r.header_len, r.channel), (12, Some(ch)));
        }
        let r = parse_radiotap(&encode_channel_header(None)).unwrap();
        assert_eq!((r.header_len, r.channel), (8, None));
        assert_eq!(
            parse_radiotap(&encode_channel_header(Some(6))).unwrap().frequency_mhz,
            Some(2437)
        );
    }
}
