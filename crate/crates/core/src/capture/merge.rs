use super::{Capture, ProbeRequestFrame};
use crate::{Error, Result};

/// Resolves every frame's capture channel (Radiotap first, then the file's
/// declared channel) and merges all captures by timestamp. Ties go to the
/// lower channel, then to input order.
pub fn merge_captures(captures: &[Capture]) -> Result<Vec<ProbeRequestFrame>> {
    let mut all = Vec::with_capacity(captures.iter().map(|c| c.frames.len()).sum());
    for cap in captures {
        for (index, frame) in cap.frames.iter().enumerate() {
            let channel = frame
                .radiotap_channel
                .or(cap.meta.declared_channel)
                .filter(|ch| (1..=13).contains(ch))
                .ok_or_else(|| Error::UnresolvedChannel {
                    path: cap.meta.path.clone(),
                    index,
                })?;
            all.push(frame.clone().with_channel(channel));
        }
    }
    // Stable sort keeps input order among equal keys.
    all.sort_by_key(|f| (f.timestamp_us, f.capture_channel));
    Ok(all)
}
