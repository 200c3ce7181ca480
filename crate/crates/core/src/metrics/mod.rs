//! Scoring against ground truth and the random-subset evaluation protocol.

mod protocol;
mod report;
mod vmeasure;

pub use protocol::{
    draw_subsets, run_protocol, summarize, tune_dbscan, EvalConfig, LabeledDataset, MetricReport,
    ProtocolReport, Subset, SummaryRow, TuneRow,
};
pub use report::{write_report, write_summary, write_tuning};
pub use vmeasure::{delta_error, homogeneity_completeness_v, rmse, score_labeling, VMeasure};
