use std::collections::HashMap;
use std::io::Write;

use super::TwoStageLabeling;
use crate::features::BurstRecord;
use crate::{Error, Result};

/// Labeling CSV: `burst_id,source_mac,truth_device,coarse_label,final_label`,
/// noise written as -1, rows in burst-id order.
pub fn write_labeling<W: Write>(
    mut out: W,
    comment: &str,
    bursts: &[BurstRecord],
    labeling: &TwoStageLabeling,
) -> Result<()> {
    writeln!(out, "# {comment}").map_err(|e| Error::io("<labeling file>", e))?;
    let by_id: HashMap<u64, &BurstRecord> = bursts.iter().map(|b| (b.burst_id, b)).collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["burst_id", "source_mac", "truth_device", "coarse_label", "final_label"])?;
    for ((id, coarse), fine) in labeling
        .coarse
        .burst_ids
        .iter()
        .zip(&labeling.coarse.labels)
        .zip(&labeling.fine.labels)
    {
        let b = by_id.get(id).ok_or(Error::MismatchedBursts)?;
        w.write_record([
            id.to_string(),
            b.source_mac.to_string(),
            b.truth_device.clone().unwrap_or_default(),
            coarse.to_string(),
            fine.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<labeling file>", e))?;
    Ok(())
}
