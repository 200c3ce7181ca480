//! Command-line front end: argument parsing, configuration layering and
//! one function per subcommand. The binary only calls [`main`].
//!
//! Configuration precedence is flags, then the `--config` TOML file, then
//! built-in defaults. Every output file starts with a `#` line naming the
//! tool version, the subcommand and the effective configuration as JSON.
//! Paths are left out so identical inputs give identical bytes wherever
//! they live.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::capture::{merge_captures, read_capture, Capture, ParseDiagnostics};
use crate::cluster::{
    cluster_bursts, write_labeling, DbscanConfig, DistortionKind, KmeansConfig, Method, TwoStageLabeling,
};
use crate::features::{group_bursts, read_feature_file, write_features, BurstRecord, IeEncoding, IeKind};
use crate::metrics::{
    run_protocol, summarize, tune_dbscan, write_report, write_summary, write_tuning, EvalConfig, LabeledDataset,
    ProtocolReport, TuneRow,
};
use crate::synth::{generate_scenario, GeneratedDataset, Scenario};
use crate::{seed, Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_EPS_GRID: [f64; 7] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5];
pub const DEFAULT_MIN_PTS_GRID: [usize; 6] = [2, 3, 5, 10, 15, 20];

#[derive(Debug, Parser)]
#[command(name = "probe-derand", version, about = "Cluster randomized-MAC Wi-Fi probe request bursts into devices")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Run seed; every random choice derives from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with configuration defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (outputs do not depend on this).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest silence, in seconds, inside one burst.
    #[arg(long, global = true)]
    pub gap_seconds: Option<f64>,
    /// DBSCAN radius in normalized fingerprint space.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// DBSCAN core-point count, the point itself included.
    #[arg(long, global = true)]
    pub min_pts: Option<usize>,
    /// Largest k tried when splitting one fingerprint cluster.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// two-stage or ie-only.
    #[arg(long, global = true)]
    pub method: Option<Method>,
    /// Repeat for more detail on stderr.
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProtocolArgs {
    /// Random subsets per population size.
    #[arg(long)]
    pub d: Option<usize>,
    /// Smallest population size evaluated.
    #[arg(long)]
    pub p_min: Option<usize>,
    /// Defaults to the number of devices minus one.
    #[arg(long)]
    pub p_max: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a dataset directory into a burst feature file.
    Ingest {
        /// Directory of `<device>/<channel>.pcap` files, or loose pcaps.
        dataset_root: PathBuf,
    },
    /// Cluster the bursts of a feature file.
    Cluster {
        /// bursts.csv written by ingest.
        features: PathBuf,
    },
    /// Score both methods on random device subsets.
    Evaluate {
        /// bursts.csv with a truth_device on every row.
        features: PathBuf,
        #[command(flatten)]
        protocol: ProtocolArgs,
    },
    /// Sweep DBSCAN parameters on the IE stage.
    Tune {
        /// bursts.csv with a truth_device on every row.
        features: PathBuf,
        /// Comma-separated eps values.
        #[arg(long, value_delimiter = ',')]
        eps_grid: Vec<f64>,
        /// Comma-separated MinPts values.
        #[arg(long, value_delimiter = ',')]
        min_pts_grid: Vec<usize>,
        #[command(flatten)]
        protocol: ProtocolArgs,
    },
    /// Write a synthetic labeled dataset from a scenario file.
    Generate {
        /// Scenario TOML.
        scenario: PathBuf,
        /// Replace a previously generated dataset at the output root.
        #[arg(long)]
        overwrite: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest { .. } => "ingest",
            Command::Cluster { .. } => "cluster",
            Command::Evaluate { .. } => "evaluate",
            Command::Tune { .. } => "tune",
            Command::Generate { .. } => "generate",
        }
    }

    pub fn input(&self) -> &Path {
        match self {
            Command::Ingest { dataset_root } => dataset_root,
            Command::Cluster { features }
            | Command::Evaluate { features, .. }
            | Command::Tune { features, .. } => features,
            Command::Generate { scenario, .. } => scenario,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DbscanSection {
    pub eps: Option<f64>,
    pub min_pts: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KmeansSection {
    pub k_max: Option<usize>,
    pub max_iterations: Option<usize>,
    pub restarts: Option<usize>,
    pub threshold_base: Option<f64>,
    pub threshold_span: Option<f64>,
    pub distortion: Option<DistortionKind>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub d: Option<usize>,
    pub p_min: Option<usize>,
    pub p_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TuneSection {
    pub eps_grid: Option<Vec<f64>>,
    pub min_pts_grid: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingSection {
    pub ht_capabilities: Option<IeKind>,
    pub extended_capabilities: Option<IeKind>,
    pub vendor_specific: Option<IeKind>,
}

/// Contents of a `--config` file. Every key is optional.
///
/// ```toml
/// seed = 7
/// gap_seconds = 2.0
/// method = "two-stage"
/// [dbscan]
/// eps = 0.05
/// min_pts = 10
/// [kmeans]
/// k_max = 5
/// [eval]
/// d = 10
/// [tune]
/// eps_grid = [0.02, 0.05]
/// [encoding]
/// vendor_specific = "byte-array"
/// ```
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub gap_seconds: Option<f64>,
    pub method: Option<Method>,
    pub dbscan: DbscanSection,
    pub kmeans: KmeansSection,
    pub eval: EvalSection,
    pub tune: TuneSection,
    pub encoding: EncodingSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneGrid {
    pub eps_grid: Vec<f64>,
    pub min_pts_grid: Vec<usize>,
}

/// Fully resolved settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub gap_seconds: f64,
    pub method: Method,
    pub dbscan: DbscanConfig,
    /// Its seed is the run seed's k-means sub-stream.
    pub kmeans: KmeansConfig,
    /// Its seed is the run seed; subset sampling derives its own stream.
    pub eval: EvalConfig,
    pub tune: TuneGrid,
    pub encoding: IeEncoding,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::with_seed(seed::DEFAULT_SEED)
    }
}

impl RunConfig {
    pub fn with_seed(run_seed: u64) -> Self {
        RunConfig {
            seed: run_seed,
            gap_seconds: crate::features::DEFAULT_GAP_SECONDS,
            method: Method::default(),
            dbscan: DbscanConfig::default(),
            kmeans: KmeansConfig {
                seed: seed::substream(run_seed, "kmeans-init"),
                ..KmeansConfig::default()
            },
            eval: EvalConfig {
                seed: run_seed,
                ..EvalConfig::default()
            },
            tune: TuneGrid {
                eps_grid: DEFAULT_EPS_GRID.to_vec(),
                min_pts_grid: DEFAULT_MIN_PTS_GRID.to_vec(),
            },
            encoding: IeEncoding::default(),
        }
    }

    /// Layers `file` and then `flags` over the defaults.
    pub fn resolve(file: &FileConfig, flags: &CommonArgs) -> Result<Self> {
        let run_seed = flags.seed.or(file.seed).unwrap_or(seed::DEFAULT_SEED);
        let mut c = RunConfig::with_seed(run_seed);
        if let Some(g) = flags.gap_seconds.or(file.gap_seconds) {
            c.gap_seconds = g;
        }
        if let Some(m) = flags.method.or(file.method) {
            c.method = m;
        }
        if let Some(e) = flags.eps.or(file.dbscan.eps) {
            c.dbscan.eps = e;
        }
        if let Some(m) = flags.min_pts.or(file.dbscan.min_pts) {
            c.dbscan.min_pts = m;
        }
        let k = &file.kmeans;
        if let Some(v) = flags.k_max.or(k.k_max) {
            c.kmeans.k_max = v;
        }
        if let Some(v) = k.max_iterations {
            c.kmeans.max_iterations = v;
        }
        if let Some(v) = k.restarts {
            c.kmeans.restarts = v;
        }
        if let Some(v) = k.threshold_base {
            c.kmeans.threshold_base = v;
        }
        if let Some(v) = k.threshold_span {
            c.kmeans.threshold_span = v;
        }
        if let Some(v) = k.distortion {
            c.kmeans.distortion = v;
        }
        c.apply_protocol(&ProtocolArgs {
            d: file.eval.d,
            p_min: file.eval.p_min,
            p_max: file.eval.p_max,
        });
        if let Some(g) = &file.tune.eps_grid {
            c.tune.eps_grid = g.clone();
        }
        if let Some(g) = &file.tune.min_pts_grid {
            c.tune.min_pts_grid = g.clone();
        }
        let e = &file.encoding;
        let enc = &mut c.encoding;
        enc.ht_capabilities = e.ht_capabilities.unwrap_or(enc.ht_capabilities);
        enc.extended_capabilities = e.extended_capabilities.unwrap_or(enc.extended_capabilities);
        enc.vendor_specific = e.vendor_specific.unwrap_or(enc.vendor_specific);
        c.validate()?;
        Ok(c)
    }

    fn apply_protocol(&mut self, p: &ProtocolArgs) {
        if let Some(d) = p.d {
            self.eval.d = d;
        }
        if let Some(v) = p.p_min {
            self.eval.p_min = v;
        }
        if p.p_max.is_some() {
            self.eval.p_max = p.p_max;
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap_seconds > 0.0 && self.gap_seconds.is_finite()) {
            return Err(Error::Config(format!("gap_seconds must be positive, got {}", self.gap_seconds)));
        }
        self.dbscan.validate()?;
        self.kmeans.validate()?;
        if self.eval.d == 0 || self.eval.p_min == 0 {
            return Err(Error::Config("d and p_min must be at least 1".into()));
        }
        Ok(())
    }

    pub fn gap(&self) -> Duration {
        Duration::from_secs_f64(self.gap_seconds)
    }

    /// The `#` comment written at the top of every output file.
    pub fn header(&self, command: &str) -> String {
        let json = serde_json::to_string(self).expect("configuration serializes");
        format!("probe-derand {VERSION} {command} config={json}")
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// How one capture file fared during ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    pub path: PathBuf,
    pub device: Option<String>,
    pub diagnostics: ParseDiagnostics,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct IngestOutcome {
    pub records: Vec<BurstRecord>,
    pub files: Vec<FileReport>,
    pub features_path: PathBuf,
}

fn pcaps_in(dir: &Path) -> Result<(Vec<PathBuf>, Vec<PathBuf>)> {
    let mut files = Vec::new();
    let mut dirs = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_dir() {
            dirs.push(path);
        } else if path.extension().is_some_and(|x| x == "pcap") {
            files.push(path);
        }
    }
    files.sort();
    dirs.sort();
    Ok((files, dirs))
}

/// `(truth label, capture files)`: one group per device directory, then
/// loose captures in the root as one unlabeled group.
fn dataset_groups(root: &Path) -> Result<Vec<(Option<String>, Vec<PathBuf>)>> {
    let (loose, dirs) = pcaps_in(root)?;
    let mut groups = Vec::new();
    for d in dirs {
        let (files, _) = pcaps_in(&d)?;
        if !files.is_empty() {
            let name = d.file_name().map(|n| n.to_string_lossy().into_owned());
            groups.push((name, files));
        }
    }
    if !loose.is_empty() {
        groups.push((None, loose));
    }
    if groups.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    Ok(groups)
}

fn declared_channel(path: &Path) -> Option<u8> {
    path.file_stem()?
        .to_str()?
        .parse::<u8>()
        .ok()
        .filter(|c| (1..=13).contains(c))
}

fn describe(d: &ParseDiagnostics) -> String {
    let mut parts = Vec::new();
    if d.probe_requests == 0 {
        parts.push("no probe requests".to_string());
    }
    for (n, what) in [
        (d.truncated_frames, "truncated frames"),
        (d.radiotap_errors, "bad radiotap headers"),
        (d.bad_fcs_dropped, "bad-FCS frames dropped"),
        (d.ie_overruns, "element overruns"),
    ] {
        if n > 0 {
            parts.push(format!("{n} {what}"));
        }
    }
    if d.truncated_record {
        parts.push("file ends inside a record".into());
    }
    parts.join("; ")
}

/// Parses `<root>/<device>/<channel>.pcap` (or loose `<root>/*.pcap`) into
/// `<out>/bursts.csv`, with a per-file account in `<out>/ingest_report.csv`.
/// Zero-byte captures are noted and skipped. Burst ids are global, devices
/// in name order.
pub fn cmd_ingest(root: &Path, out: &Path, config: &RunConfig) -> Result<IngestOutcome> {
    let groups = dataset_groups(root)?;
    let mut records = Vec::new();
    let mut reports = Vec::new();
    for (device, files) in groups {
        let mut captures: Vec<Capture> = Vec::new();
        for path in files {
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if bytes.is_empty() {
                reports.push(FileReport {
                    path,
                    device: device.clone(),
                    diagnostics: ParseDiagnostics::default(),
                    note: "empty file skipped".into(),
                });
                continue;
            }
            let cap = read_capture(&bytes, path.display().to_string(), declared_channel(&path))?;
            reports.push(FileReport {
                note: describe(&cap.diagnostics),
                diagnostics: cap.diagnostics.clone(),
                device: device.clone(),
                path,
            });
            captures.push(cap);
        }
        let frames = merge_captures(&captures)?;
        for burst in group_bursts(&frames, config.gap(), &config.encoding) {
            let mut r = burst.record();
            r.burst_id = records.len() as u64;
            r.truth_device = device.clone();
            records.push(r);
        }
    }

    ensure_dir(out)?;
    let header = config.header("ingest");
    let features_path = out.join("bursts.csv");
    let mut w = create(&features_path)?;
    write_features(&mut w, &header, &records)?;
    finish(w, &features_path)?;

    let report_path = out.join("ingest_report.csv");
    let mut w = create(&report_path)?;
    writeln!(w, "# {header}\n# frames heard by more than one sniffer are all kept")
        .map_err(|e| Error::io(&report_path, e))?;
    let mut csv = csv::Writer::from_writer(&mut w);
    csv.write_record([
        "file",
        "device",
        "records",
        "probe_requests",
        "non_probe_skipped",
        "truncated_frames",
        "radiotap_errors",
        "bad_fcs_dropped",
        "ie_overruns",
        "note",
    ])?;
    for r in &reports {
        let d = &r.diagnostics;
        let rel = r.path.strip_prefix(root).unwrap_or(&r.path);
        csv.write_record([
            rel.display().to_string(),
            r.device.clone().unwrap_or_default(),
            d.records.to_string(),
            d.probe_requests.to_string(),
            d.non_probe_skipped.to_string(),
            d.truncated_frames.to_string(),
            d.radiotap_errors.to_string(),
            d.bad_fcs_dropped.to_string(),
            d.ie_overruns.to_string(),
            r.note.clone(),
        ])?;
    }
    csv.flush().map_err(|e| Error::io(&report_path, e))?;
    drop(csv);
    finish(w, &report_path)?;

    Ok(IngestOutcome {
        records,
        files: reports,
        features_path,
    })
}

#[derive(Debug, Clone)]
pub struct ClusterOutcome {
    pub records: Vec<BurstRecord>,
    pub labeling: TwoStageLabeling,
}

impl ClusterOutcome {
    pub fn summary_line(&self) -> String {
        let fine = &self.labeling.fine;
        format!(
            "{} bursts, {} clusters, {} noise, sizes {:?}",
            fine.len(),
            fine.n_clusters(),
            fine.noise_count(),
            fine.cluster_sizes()
        )
    }
}

/// Writes `labels.csv`, `cluster_summary.csv` (one row per final cluster)
/// and `refinements.csv` (the elbow data of every coarse cluster).
pub fn cmd_cluster(features: &Path, out: &Path, config: &RunConfig) -> Result<ClusterOutcome> {
    let records = read_feature_file(features)?;
    let labeling = cluster_bursts(&records, config.method, &config.dbscan, &config.kmeans)?;
    ensure_dir(out)?;
    let header = config.header("cluster");

    let path = out.join("labels.csv");
    let mut w = create(&path)?;
    write_labeling(&mut w, &header, &records, &labeling)?;
    finish(w, &path)?;

    let mut sizes: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (c, f) in labeling.coarse.labels.iter().zip(&labeling.fine.labels) {
        if let (Some(c), Some(f)) = (c.cluster(), f.cluster()) {
            *sizes.entry((f, c)).or_default() += 1;
        }
    }
    let path = out.join("cluster_summary.csv");
    let mut w = create(&path)?;
    writeln!(w, "# {header}").map_err(|e| Error::io(&path, e))?;
    writeln!(
        w,
        "# n_clusters={} noise={}",
        labeling.fine.n_clusters(),
        labeling.fine.noise_count()
    )
    .map_err(|e| Error::io(&path, e))?;
    {
        let mut csv = csv::Writer::from_writer(&mut w);
        csv.write_record(["final_label", "coarse_label", "size"])?;
        for ((f, c), n) in &sizes {
            csv.write_record([f.to_string(), c.to_string(), n.to_string()])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))?;
    }
    finish(w, &path)?;

    let path = out.join("refinements.csv");
    let mut w = create(&path)?;
    writeln!(w, "# {header}").map_err(|e| Error::io(&path, e))?;
    {
        let mut csv = csv::Writer::from_writer(&mut w);
        csv.write_record(["coarse_label", "size", "avg_similarity", "threshold", "k", "distortions"])?;
        for (i, r) in labeling.refinements.iter().enumerate() {
            let d: Vec<String> = r.distortions.iter().map(f64::to_string).collect();
            csv.write_record([
                i.to_string(),
                r.labels.len().to_string(),
                r.avg_similarity.to_string(),
                r.threshold.to_string(),
                r.k.to_string(),
                d.join(";"),
            ])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))?;
    }
    finish(w, &path)?;

    Ok(ClusterOutcome { records, labeling })
}

/// Two-stage then ie-only, concatenated into `report.csv` and
/// `report_summary.csv`.
pub fn cmd_evaluate(features: &Path, out: &Path, config: &RunConfig) -> Result<ProtocolReport> {
    let dataset = LabeledDataset::from_records(read_feature_file(features)?)?;
    let mut rows = Vec::new();
    for method in [Method::TwoStage, Method::IeOnly] {
        rows.extend(run_protocol(&dataset, &config.eval, &config.dbscan, &config.kmeans, method)?.rows);
    }
    let summary = summarize(&rows)?;
    // Keep the method order of the rows rather than alphabetical.
    let summary = [Method::TwoStage, Method::IeOnly]
        .iter()
        .flat_map(|m| summary.iter().filter(move |s| s.method == *m).cloned())
        .collect();
    let report = ProtocolReport { rows, summary };

    ensure_dir(out)?;
    let header = config.header("evaluate");
    let path = out.join("report.csv");
    let mut w = create(&path)?;
    write_report(&mut w, &header, &report)?;
    finish(w, &path)?;
    let path = out.join("report_summary.csv");
    let mut w = create(&path)?;
    write_summary(&mut w, &header, &report.summary)?;
    finish(w, &path)?;
    Ok(report)
}

/// Writes `tuning.csv`, best row first.
pub fn cmd_tune(features: &Path, out: &Path, config: &RunConfig) -> Result<Vec<TuneRow>> {
    let dataset = LabeledDataset::from_records(read_feature_file(features)?)?;
    let rows = tune_dbscan(&dataset, &config.tune.eps_grid, &config.tune.min_pts_grid, &config.eval)?;
    ensure_dir(out)?;
    let path = out.join("tuning.csv");
    let mut w = create(&path)?;
    write_tuning(&mut w, &config.header("tune"), &rows)?;
    finish(w, &path)?;
    Ok(rows)
}

/// Loads a scenario file; `seed` replaces the file's seed when given.
pub fn cmd_generate(scenario_path: &Path, out: &Path, seed: Option<u64>, overwrite: bool) -> Result<GeneratedDataset> {
    let text = fs::read_to_string(scenario_path).map_err(|e| Error::io(scenario_path, e))?;
    let mut scenario = Scenario::from_toml(&text)?;
    if let Some(s) = seed {
        scenario.seed = s;
    }
    generate_scenario(&scenario, out, overwrite)
}

fn run(cli: &Cli, config: &RunConfig, out: &Path) -> Result<()> {
    let verbose = cli.common.verbose;
    match &cli.command {
        Command::Ingest { dataset_root } => {
            let o = cmd_ingest(dataset_root, out, config)?;
            for f in &o.files {
                if !f.note.is_empty() || verbose > 0 {
                    eprintln!("{}: {}", f.path.display(), if f.note.is_empty() { "ok" } else { &f.note });
                }
            }
            let labeled = o.records.iter().filter(|r| r.truth_device.is_some()).count();
            println!(
                "{} bursts ({labeled} labeled) from {} files -> {}",
                o.records.len(),
                o.files.len(),
                o.features_path.display()
            );
        }
        Command::Cluster { features } => {
            let o = cmd_cluster(features, out, config)?;
            if verbose > 0 {
                for (i, r) in o.labeling.refinements.iter().enumerate() {
                    eprintln!(
                        "coarse {i}: {} bursts, avg similarity {:.4}, threshold {:.4}, k {}",
                        r.labels.len(),
                        r.avg_similarity,
                        r.threshold,
                        r.k
                    );
                }
            }
            println!("{}", o.summary_line());
        }
        Command::Evaluate { features, .. } => {
            let report = cmd_evaluate(features, out, config)?;
            println!("method      p  mean_v  mean_h  mean_c  rmse");
            for s in &report.summary {
                println!(
                    "{:<10} {:>2}  {:.4}  {:.4}  {:.4}  {:.4}",
                    s.method.to_string(),
                    s.p,
                    s.mean_v,
                    s.mean_h,
                    s.mean_c,
                    s.rmse
                );
            }
        }
        Command::Tune { features, .. } => {
            let rows = cmd_tune(features, out, config)?;
            let best = &rows[0];
            println!(
                "recommended eps={} min_pts={} (mean_v {:.4}, mean |delta| {:.4})",
                best.eps, best.min_pts, best.mean_v, best.mean_abs_delta
            );
        }
        Command::Generate { scenario, overwrite } => {
            let g = cmd_generate(scenario, out, cli.common.seed, *overwrite)?;
            println!(
                "{} capture files, {} of {} frames captured -> {}",
                g.files.len(),
                g.frames_captured,
                g.frames_sent,
                g.root.display()
            );
        }
    }
    Ok(())
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
    ExitCode::from(2)
}

/// Resolves the configuration for a parsed command line, including the
/// subcommand's own protocol and grid flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut config = RunConfig::resolve(&file, &cli.common)?;
    match &cli.command {
        Command::Evaluate { protocol, .. } => config.apply_protocol(protocol),
        Command::Tune {
            eps_grid,
            min_pts_grid,
            protocol,
            ..
        } => {
            config.apply_protocol(protocol);
            if !eps_grid.is_empty() {
                config.tune.eps_grid = eps_grid.clone();
            }
            if !min_pts_grid.is_empty() {
                config.tune.min_pts_grid = min_pts_grid.clone();
            }
        }
        _ => {}
    }
    config.validate()?;
    Ok(config)
}

/// Exit status 0 on success, 1 when processing fails, 2 for usage errors
/// (bad flags, missing input paths, invalid configuration).
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let input = cli.command.input();
    if !input.exists() {
        return usage_error(&format!("{} does not exist", input.display()));
    }
    if let Some(cfg) = &cli.common.config {
        if !cfg.is_file() {
            return usage_error(&format!("config file {} does not exist", cfg.display()));
        }
    }
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return usage_error("--jobs must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    let out = cli.common.out.clone().unwrap_or_else(|| PathBuf::from("probe-derand-out"));
    match run(&cli, &config, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn main() -> ExitCode {
    main_with_args(std::env::args_os())
}
