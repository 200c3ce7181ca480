//! Pcap files and dataset directories.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::generate::{assign_to_sniffers, generate_frames};
use super::profile::Scenario;
use crate::capture::{LinkType, PcapWriter, ProbeRequestFrame};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.toml";

/// Writes a Radiotap pcap stream. Each Radiotap header carries
/// `declared_channel` when given, otherwise the frame's capture channel.
pub fn write_capture<W: Write>(out: W, frames: &[ProbeRequestFrame], declared_channel: Option<u8>) -> io::Result<W> {
    let mut w = PcapWriter::new(out, LinkType::Radiotap)?;
    for f in frames {
        match declared_channel {
            Some(ch) if ch != f.capture_channel => {
                let mut f = f.clone();
                f.capture_channel = ch;
                w.write_probe(&f, false)?;
            }
            _ => w.write_probe(f, false)?,
        }
    }
    Ok(w.into_inner())
}

pub fn write_capture_file(path: &Path, frames: &[ProbeRequestFrame], declared_channel: Option<u8>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_capture(BufWriter::new(file), frames, declared_channel)
        .and_then(|mut w| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// What [`generate_scenario`] wrote.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedDataset {
    pub root: PathBuf,
    /// Capture files in device-then-channel order.
    pub files: Vec<PathBuf>,
    pub frames_sent: usize,
    pub frames_captured: usize,
}

fn is_non_empty_dir(path: &Path) -> Result<bool> {
    match fs::read_dir(path) {
        Ok(mut it) => Ok(it.next().is_some()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(Error::io(path, e)),
    }
}

/// Writes `<root>/<device_id>/<channel>.pcap` for every device and capture
/// channel plus `manifest.toml`, which is itself a loadable scenario file.
///
/// A non-empty `root` is refused. With `overwrite` a previous dataset
/// (recognized by its manifest) is deleted first; other directories are
/// still refused.
pub fn generate_scenario(scenario: &Scenario, root: &Path, overwrite: bool) -> Result<GeneratedDataset> {
    scenario.validate()?;
    if is_non_empty_dir(root)? {
        if !overwrite || !root.join(MANIFEST_FILE).is_file() {
            return Err(Error::OutputExists(root.to_path_buf()));
        }
        fs::remove_dir_all(root).map_err(|e| Error::io(root, e))?;
    }
    fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;

    let channels = scenario.capture_channels();
    let mut files = Vec::new();
    let (mut sent, mut captured) = (0, 0);
    for (profile, frames) in scenario.profiles.iter().zip(generate_frames(scenario)) {
        let dir = root.join(&profile.device_id);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        sent += frames.len();
        for (ch, heard) in assign_to_sniffers(&frames, &channels) {
            let path = dir.join(format!("{ch}.pcap"));
            let plain: Vec<ProbeRequestFrame> = heard.into_iter().map(|f| f.frame).collect();
            captured += plain.len();
            write_capture_file(&path, &plain, Some(ch))?;
            files.push(path);
        }
    }

    let manifest = format!(
        "# probe-derand {} synthetic dataset\n# frames sent {sent}, captured {captured}\n{}",
        env!("CARGO_PKG_VERSION"),
        scenario.to_toml()?
    );
    let mpath = root.join(MANIFEST_FILE);
    fs::write(&mpath, manifest).map_err(|e| Error::io(&mpath, e))?;
    Ok(GeneratedDataset {
        root: root.to_path_buf(),
        files,
        frames_sent: sent,
        frames_captured: captured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::{read_capture, MacAddr};
    use crate::synth::DeviceProfile;

    #[test]
    fn empty_capture_is_header_only() {
        let bytes = write_capture(Vec::new(), &[], None).unwrap();
        assert_eq!(bytes.len(), 24);
        let cap = read_capture(&bytes, "x", None).unwrap();
        assert!(cap.frames.is_empty());
    }

    #[test]
    fn channel_six_frequency() {
        let f = ProbeRequestFrame {
            timestamp_us: 1,
            source_mac: MacAddr([2, 0, 0, 0, 0, 1]),
            capture_channel: 6,
            sequence_number: 0,
            ies: vec![],
        };
        let bytes = write_capture(Vec::new(), &[f], None).unwrap();
        let radiotap = &bytes[24 + 16..];
        let freq = u16::from_le_bytes([radiotap[8], radiotap[9]]);
        assert_eq!(freq, 2437);
    }

    #[test]
    fn layout_manifest_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = DeviceProfile::new("beta", vec![11, 6, 1], 3, 10.0);
        b.ie_template.ht_capabilities = Some(vec![1, 2]);
        let s = Scenario::new(vec![DeviceProfile::new("alpha", vec![1, 6, 11], 3, 10.0), b], 60.0, 3);
        let first = dir.path().join("one");
        let second = dir.path().join("two");
        let g = generate_scenario(&s, &first, false).unwrap();
        generate_scenario(&s, &second, false).unwrap();
        assert_eq!(g.files.len(), 6);
        assert_eq!((g.frames_sent, g.frames_captured), (36, 36));
        for f in &g.files {
            let rel = f.strip_prefix(&first).unwrap();
            assert_eq!(fs::read(f).unwrap(), fs::read(second.join(rel)).unwrap());
        }
        let manifest = fs::read_to_string(first.join(MANIFEST_FILE)).unwrap();
        assert_eq!(Scenario::from_toml(&manifest).unwrap(), s);
        assert_eq!(manifest, fs::read_to_string(second.join(MANIFEST_FILE)).unwrap());

        assert!(matches!(generate_scenario(&s, &first, false), Err(Error::OutputExists(_))));
        generate_scenario(&s, &first, true).unwrap();
        let stray = dir.path().join("stray");
        fs::create_dir_all(&stray).unwrap();
        fs::write(stray.join("keep.txt"), "x").unwrap();
        assert!(generate_scenario(&s, &stray, true).is_err());
        assert!(stray.join("keep.txt").exists());
    }
}
