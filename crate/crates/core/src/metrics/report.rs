use std::io::Write;

use super::{ProtocolReport, SummaryRow, TuneRow};
use crate::{Error, Result};

fn comment_line<W: Write>(out: &mut W, comment: &str) -> Result<()> {
    writeln!(out, "# {comment}").map_err(|e| Error::io("<report>", e))
}

/// Per-subset rows: `method,p,subset,h,c,v,n_clusters,delta`.
pub fn write_report<W: Write>(mut out: W, comment: &str, report: &ProtocolReport) -> Result<()> {
    comment_line(&mut out, comment)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "p", "subset", "h", "c", "v", "n_clusters", "delta"])?;
    for r in &report.rows {
        w.write_record([
            r.method.to_string(),
            r.p.to_string(),
            r.subset_index.to_string(),
            r.homogeneity.to_string(),
            r.completeness.to_string(),
            r.v_measure.to_string(),
            r.n_clusters.to_string(),
            r.delta.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

/// Per-p rows: `method,p,mean_v,std_v,mean_h,std_h,mean_c,std_c,rmse`.
pub fn write_summary<W: Write>(mut out: W, comment: &str, summary: &[SummaryRow]) -> Result<()> {
    comment_line(&mut out, comment)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method", "p", "mean_v", "std_v", "mean_h", "std_h", "mean_c", "std_c", "rmse",
    ])?;
    for s in summary {
        w.write_record([
            s.method.to_string(),
            s.p.to_string(),
            s.mean_v.to_string(),
            s.std_v.to_string(),
            s.mean_h.to_string(),
            s.std_h.to_string(),
            s.mean_c.to_string(),
            s.std_c.to_string(),
            s.rmse.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

pub fn write_tuning<W: Write>(mut out: W, comment: &str, rows: &[TuneRow]) -> Result<()> {
    comment_line(&mut out, comment)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eps", "min_pts", "mean_v", "mean_abs_delta"])?;
    for r in rows {
        w.write_record([
            r.eps.to_string(),
            r.min_pts.to_string(),
            r.mean_v.to_string(),
            r.mean_abs_delta.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}
