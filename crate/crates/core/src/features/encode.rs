use serde::{Deserialize, Serialize};

use crate::capture::{
    InformationElement, ProbeRequestFrame, IE_EXTENDED_CAPABILITIES, IE_HT_CAPABILITIES,
    IE_VENDOR_SPECIFIC,
};

/// How an IE body is reduced to one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IeKind {
    /// Little-endian unsigned integer (bodies over 8 bytes fall back to the byte sum).
    Numeric,
    /// Sum of byte values.
    ByteArray,
    /// Sum of character code points of the (lossy UTF-8) body.
    Text,
}

/// Which rule applies to each fingerprint IE. All three default to the byte sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IeEncoding {
    pub ht_capabilities: IeKind,
    pub extended_capabilities: IeKind,
    pub vendor_specific: IeKind,
}

impl Default for IeEncoding {
    fn default() -> Self {
        IeEncoding {
            ht_capabilities: IeKind::ByteArray,
            extended_capabilities: IeKind::ByteArray,
            vendor_specific: IeKind::ByteArray,
        }
    }
}

/// `[ht_capabilities, extended_capabilities, vendor_specific]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IeFeatureVector(pub [u64; 3]);

impl IeFeatureVector {
    pub fn as_f64(&self) -> [f64; 3] {
        self.0.map(|v| v as f64)
    }
}

fn byte_sum(body: &[u8]) -> u64 {
    body.iter().map(|&b| u64::from(b)).sum()
}

/// Absent or empty elements encode to 0.
pub fn encode_ie(ie: Option<&InformationElement>, kind: IeKind) -> u64 {
    let Some(ie) = ie.filter(|ie| !ie.body.is_empty()) else {
        return 0;
    };
    match kind {
        IeKind::ByteArray => byte_sum(&ie.body),
        IeKind::Numeric if ie.body.len() <= 8 => {
            let mut le = [0u8; 8];
            le[..ie.body.len()].copy_from_slice(&ie.body);
            u64::from_le_bytes(le)
        }
        IeKind::Numeric => byte_sum(&ie.body),
        IeKind::Text => String::from_utf8_lossy(&ie.body)
            .chars()
            .map(|c| u64::from(u32::from(c)))
            .sum(),
    }
}

/// Fingerprint of one frame. Every Vendor Specific element is encoded and
/// the results summed.
pub fn build_ie_features(frame: &ProbeRequestFrame, encoding: &IeEncoding) -> IeFeatureVector {
    let first = |id| frame.ies.iter().find(|ie| ie.id == id);
    let vendor = frame
        .ies
        .iter()
        .filter(|ie| ie.id == IE_VENDOR_SPECIFIC)
        .map(|ie| encode_ie(Some(ie), encoding.vendor_specific))
        .sum();
    IeFeatureVector([
        encode_ie(first(IE_HT_CAPABILITIES), encoding.ht_capabilities),
        encode_ie(first(IE_EXTENDED_CAPABILITIES), encoding.extended_capabilities),
        vendor,
    ])
}

/// Per-dimension min-max scaling to `[0, 1]`; constant dimensions map to 0.
pub fn normalize_ie_matrix(vectors: &[IeFeatureVector]) -> Vec<[f64; 3]> {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in vectors {
        for (d, x) in v.as_f64().into_iter().enumerate() {
            lo[d] = lo[d].min(x);
            hi[d] = hi[d].max(x);
        }
    }
    vectors
        .iter()
        .map(|v| {
            let x = v.as_f64();
            std::array::from_fn(|d| {
                let range = hi[d] - lo[d];
                if range > 0.0 {
                    (x[d] - lo[d]) / range
                } else {
                    0.0
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::MacAddr;
    use proptest::prelude::*;

    fn frame(ies: Vec<InformationElement>) -> ProbeRequestFrame {
        ProbeRequestFrame {
            timestamp_us: 0,
            source_mac: MacAddr::default(),
            capture_channel: 1,
            sequence_number: 0,
            ies,
        }
    }

    #[test]
    fn encoding_rules() {
        assert_eq!(encode_ie(None, IeKind::ByteArray), 0);
        assert_eq!(encode_ie(Some(&InformationElement::new(45, vec![])), IeKind::Numeric), 0);
        let arr = InformationElement::new(45, vec![1, 2, 3]);
        assert_eq!(encode_ie(Some(&arr), IeKind::ByteArray), 6);
        let text = InformationElement::new(0, b"AB".to_vec());
        assert_eq!(encode_ie(Some(&text), IeKind::Text), 131);
        let num = InformationElement::new(1, vec![0x34, 0x12]);
        assert_eq!(encode_ie(Some(&num), IeKind::Numeric), 0x1234);
        let long = InformationElement::new(1, vec![1; 9]);
        assert_eq!(encode_ie(Some(&long), IeKind::Numeric), 9);
    }

    #[test]
    fn fingerprint_vectors() {
        let enc = IeEncoding::default();
        assert_eq!(
            build_ie_features(&frame(vec![InformationElement::new(0, vec![])]), &enc),
            IeFeatureVector([0, 0, 0])
        );
        assert_eq!(
            build_ie_features(&frame(vec![InformationElement::new(45, vec![0xAD, 0x01])]), &enc),
            IeFeatureVector([174, 0, 0])
        );
    }

    #[test]
    fn vendor_elements_are_summed() {
        // 1+2+3+4 = 10 and 4+6+12 = 22.
        let ies = vec![
            InformationElement::new(221, vec![1, 2, 3, 4]),
            InformationElement::new(3, vec![6]),
            InformationElement::new(221, vec![4, 6, 12]),
        ];
        assert_eq!(
            build_ie_features(&frame(ies), &IeEncoding::default()),
            IeFeatureVector([0, 0, 32])
        );
    }

    #[test]
    fn min_max_scaling() {
        let v = |x: u64| IeFeatureVector([x, 7, 0]);
        let m = normalize_ie_matrix(&[v(0), v(50), v(100)]);
        assert_eq!(m.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert!(m.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
        assert_eq!(normalize_ie_matrix(&[v(0), v(100)])[1][0], 1.0);
    }

    proptest! {
        #[test]
        fn byte_sum_is_permutation_invariant(mut body in proptest::collection::vec(any::<u8>(), 0..255), seed in any::<u64>()) {
            let before = encode_ie(Some(&InformationElement::new(45, body.clone())), IeKind::ByteArray);
            // Deterministic shuffle.
            let n = body.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                body.swap(i, (s >> 33) as usize % (i + 1));
            }
            let after = encode_ie(Some(&InformationElement::new(45, body)), IeKind::ByteArray);
            prop_assert_eq!(before, after);
        }

        #[test]
        fn normalized_values_in_unit_interval(xs in proptest::collection::vec(any::<[u32; 3]>(), 1..50)) {
            let vs: Vec<_> = xs.iter().map(|x| IeFeatureVector(x.map(u64::from))).collect();
            for row in normalize_ie_matrix(&vs) {
                prop_assert!(row.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
        }
    }
}
