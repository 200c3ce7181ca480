//! Burst feature file: one CSV row per burst, preceded by `#` comment lines.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::burst::BurstRecord;
use super::encode::IeFeatureVector;
use crate::{Error, Result};

const COLUMNS: [&str; 8] = [
    "burst_id",
    "source_mac",
    "truth_device",
    "L",
    "ht_capabilities",
    "extended_capabilities",
    "vendor_specific",
    "channel_vector",
];

/// Writes `records` after one `# {comment}` line.
pub fn write_features<W: Write>(mut out: W, comment: &str, records: &[BurstRecord]) -> Result<()> {
    writeln!(out, "# {comment}").map_err(|e| Error::io("<feature file>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        let channels = r
            .channel_vector
            .iter()
            .map(u8::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let [ht, ext, vendor] = r.ie_features.0;
        w.write_record([
            r.burst_id.to_string(),
            r.source_mac.to_string(),
            r.truth_device.clone().unwrap_or_default(),
            r.channel_vector.len().to_string(),
            ht.to_string(),
            ext.to_string(),
            vendor.to_string(),
            channels,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<feature file>", e))?;
    Ok(())
}

pub fn read_feature_file(path: &Path) -> Result<Vec<BurstRecord>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_features(f, &path.display().to_string())
}

/// Parses a feature file; `source` names it in error messages.
pub fn read_features<R: Read>(input: R, source: &str) -> Result<Vec<BurstRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let err = |line: u64, message: String| Error::FeatureFile {
        path: source.to_string(),
        line,
        message,
    };
    let headers = r.headers()?.clone();
    if headers.iter().ne(COLUMNS) {
        let line = headers.position().map_or(1, |p| p.line());
        return Err(err(line, format!("expected columns {}", COLUMNS.join(","))));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<u64> {
            rec[i]
                .trim()
                .parse::<u64>()
                .map_err(|_| err(line, format!("{}: not an integer: {:?}", COLUMNS[i], &rec[i])))
        };
        let burst_id = num(0)?;
        let source_mac = rec[1].parse().map_err(|e: String| err(line, e))?;
        let truth_device = Some(rec[2].to_string()).filter(|s| !s.is_empty());
        let declared_len = num(3)? as usize;
        let ie_features = IeFeatureVector([num(4)?, num(5)?, num(6)?]);
        let channel_vector = rec[7]
            .split(';')
            .map(|s| match s.trim().parse::<u8>() {
                Ok(ch) if ch <= 13 => Ok(ch),
                _ => Err(err(line, format!("bad channel {s:?} in channel_vector"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if channel_vector.len() != declared_len || declared_len == 0 {
            return Err(err(
                line,
                format!(
                    "L = {declared_len} but channel_vector has {} entries",
                    channel_vector.len()
                ),
            ));
        }
        out.push(BurstRecord {
            burst_id,
            source_mac,
            truth_device,
            ie_features,
            channel_vector,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::MacAddr;

    fn rec(id: u64, truth: Option<&str>) -> BurstRecord {
        BurstRecord {
            burst_id: id,
            source_mac: MacAddr([0x02, 0xaa, 0, 0, 0, id as u8]),
            truth_device: truth.map(String::from),
            ie_features: IeFeatureVector([174, 12, 300]),
            channel_vector: vec![1, 6, 11],
        }
    }

    #[test]
    fn layout_and_round_trip() {
        let records = vec![rec(0, Some("pixel-a")), rec(1, None)];
        let mut buf = Vec::new();
        write_features(&mut buf, "probe-derand test", &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# probe-derand test");
        assert_eq!(lines[1], COLUMNS.join(","));
        assert_eq!(lines[2], "0,02:aa:00:00:00:00,pixel-a,3,174,12,300,1;6;11");
        assert_eq!(lines[3], "1,02:aa:00:00:00:01,,3,174,12,300,1;6;11");
        assert_eq!(read_features(&buf[..], "t").unwrap(), records);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "# c\nburst_id,source_mac,truth_device,L,ht_capabilities,extended_capabilities,vendor_specific,channel_vector\n\
                    0,02:aa:00:00:00:00,a,3,1,2,3,1;6;11\n\
                    1,02:aa:00:00:00:01,a,2,1,2,3,1;6;11\n";
        match read_features(text.as_bytes(), "f.csv").unwrap_err() {
            Error::FeatureFile { path, line, .. } => assert_eq!((path.as_str(), line), ("f.csv", 4)),
            e => panic!("{e}"),
        }
        let bad_mac = text.replace("02:aa:00:00:00:01", "nope");
        assert!(matches!(
            read_features(bad_mac.as_bytes(), "f.csv"),
            Err(Error::FeatureFile { line: 4, .. })
        ));
        assert!(read_features("a,b\n1,2\n".as_bytes(), "f").is_err());
    }
}
