//! Pcap writing and parsing: round trips and robustness on hostile input.

use probe_derand::capture::{
    merge_captures, parse_radiotap, read_capture, InformationElement, LinkType, MacAddr, PcapWriter,
    ProbeRequestFrame,
};
use probe_derand::synth::write_capture;
use proptest::prelude::*;

fn arb_ie() -> impl Strategy<Value = InformationElement> {
    (any::<u8>(), prop::collection::vec(any::<u8>(), 0..=255)).prop_map(|(id, body)| InformationElement::new(id, body))
}

fn arb_frame() -> impl Strategy<Value = ProbeRequestFrame> {
    (
        0u64..(u32::MAX as u64 * 1_000_000),
        any::<[u8; 6]>(),
        1u8..=13,
        0u16..4096,
        prop::collection::vec(arb_ie(), 0..8),
    )
        .prop_map(|(ts, mac, ch, seq, ies)| ProbeRequestFrame {
            timestamp_us: ts,
            source_mac: MacAddr(mac),
            capture_channel: ch,
            sequence_number: seq,
            ies,
        })
}

proptest! {
    #[test]
    fn radiotap_round_trip(frames in prop::collection::vec(arb_frame(), 0..20)) {
        let bytes = write_capture(Vec::new(), &frames, None).unwrap();
        let cap = read_capture(&bytes, "rt", None).unwrap();
        prop_assert_eq!(cap.frames.len(), frames.len());
        prop_assert_eq!(cap.diagnostics.probe_requests, frames.len());
        for (a, b) in frames.iter().zip(&cap.frames) {
            prop_assert_eq!(a.timestamp_us, b.timestamp_us);
            prop_assert_eq!(a.source_mac, b.source_mac);
            prop_assert_eq!(Some(a.capture_channel), b.radiotap_channel);
            prop_assert_eq!(a.sequence_number, b.sequence_number);
            prop_assert_eq!(&a.ies, &b.ies);
        }
    }

    #[test]
    fn bare_80211_uses_declared_channel(frames in prop::collection::vec(arb_frame(), 1..10), ch in 1u8..=13) {
        let mut w = PcapWriter::new(Vec::new(), LinkType::Ieee80211).unwrap();
        for f in &frames {
            w.write_probe(f, false).unwrap();
        }
        let cap = read_capture(&w.into_inner(), "bare", Some(ch)).unwrap();
        prop_assert!(cap.frames.iter().all(|f| f.radiotap_channel.is_none()));
        let merged = merge_captures(&[cap]).unwrap();
        prop_assert!(merged.iter().all(|f| f.capture_channel == ch));
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let _ = read_capture(&bytes, "fuzz", Some(6));
        let _ = parse_radiotap(&bytes);
    }

    #[test]
    fn corrupted_captures_never_panic(
        frames in prop::collection::vec(arb_frame(), 1..6),
        flips in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..16),
        cut in any::<prop::sample::Index>(),
    ) {
        let mut bytes = write_capture(Vec::new(), &frames, None).unwrap();
        // Leave the global header intact so the damage reaches the records.
        for (at, value) in flips {
            let i = 24 + at.index(bytes.len() - 24);
            bytes[i] = value;
        }
        let keep = 24 + cut.index(bytes.len() - 23);
        let cap = read_capture(&bytes[..keep], "mutated", None).unwrap();
        let d = &cap.diagnostics;
        prop_assert!(d.probe_requests + d.non_probe_skipped + d.truncated_frames + d.radiotap_errors + d.bad_fcs_dropped <= d.records);
    }
}

#[test]
fn header_only_capture_has_no_frames() {
    let bytes = write_capture(Vec::new(), &[], None).unwrap();
    let cap = read_capture(&bytes, "empty", None).unwrap();
    assert!(cap.frames.is_empty());
    assert_eq!(cap.diagnostics.records, 0);
}

#[test]
fn zero_byte_file_is_a_header_error() {
    assert!(read_capture(&[], "zero", None).is_err());
}

#[test]
fn merge_orders_three_sniffers_by_time() {
    let frame = |ts, ch| ProbeRequestFrame {
        timestamp_us: ts,
        source_mac: MacAddr([2, 0, 0, 0, 0, 1]),
        capture_channel: ch,
        sequence_number: 0,
        ies: vec![InformationElement::new(3, vec![ch])],
    };
    let caps: Vec<_> = [(1u8, vec![0u64, 30]), (6, vec![10, 40]), (11, vec![20, 50])]
        .into_iter()
        .map(|(ch, times)| {
            let frames: Vec<_> = times.into_iter().map(|t| frame(t, ch)).collect();
            read_capture(&write_capture(Vec::new(), &frames, None).unwrap(), format!("{ch}.pcap"), Some(ch)).unwrap()
        })
        .collect();
    let merged = merge_captures(&caps).unwrap();
    let order: Vec<(u64, u8)> = merged.iter().map(|f| (f.timestamp_us, f.capture_channel)).collect();
    assert_eq!(order, vec![(0, 1), (10, 6), (20, 11), (30, 1), (40, 6), (50, 11)]);
}
