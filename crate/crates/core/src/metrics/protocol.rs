//! Random device-subset evaluation and the DBSCAN hyperparameter sweep.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::vmeasure::{delta_error, rmse, score_labeling};
use crate::cluster::{cluster_bursts, ie_only_cluster, DbscanConfig, KmeansConfig, Method};
use crate::features::BurstRecord;
use crate::seed;
use crate::{Error, Result};

/// Bursts grouped by ground-truth device, devices in sorted order.
#[derive(Debug, Clone, Default)]
pub struct LabeledDataset {
    pub devices: BTreeMap<String, Vec<BurstRecord>>,
}

impl LabeledDataset {
    /// Fails on bursts without truth labels or with repeated ids.
    pub fn from_records(records: Vec<BurstRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut devices: BTreeMap<String, Vec<BurstRecord>> = BTreeMap::new();
        for r in records {
            if !seen.insert(r.burst_id) {
                return Err(Error::Config(format!("duplicate burst id {}", r.burst_id)));
            }
            let device = r.truth_device.clone().ok_or(Error::MissingTruth(r.burst_id))?;
            devices.entry(device).or_default().push(r);
        }
        Ok(LabeledDataset { devices })
    }

    pub fn n_devices(&self) -> usize {
        self.devices.len()
    }

    /// Bursts of the devices at the given positions (in device order).
    pub fn pool(&self, device_indices: &[usize]) -> Vec<BurstRecord> {
        let names: Vec<&Vec<BurstRecord>> = self.devices.values().collect();
        device_indices
            .iter()
            .flat_map(|&i| names[i].iter().cloned())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Subsets drawn per population size.
    pub d: usize,
    pub p_min: usize,
    /// Defaults to `P - 1`.
    pub p_max: Option<usize>,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            d: 10,
            p_min: 1,
            p_max: None,
            seed: seed::DEFAULT_SEED,
        }
    }
}

impl EvalConfig {
    /// Population sizes to test for a dataset of `devices` devices.
    pub fn populations(&self, devices: usize) -> Result<std::ops::RangeInclusive<usize>> {
        if self.d == 0 {
            return Err(Error::Config("d must be at least 1".into()));
        }
        let max = devices.saturating_sub(1);
        let p_max = self.p_max.unwrap_or(max);
        for p in [self.p_min, p_max] {
            if p == 0 || p > max {
                return Err(Error::PopulationOutOfRange { p, max });
            }
        }
        if self.p_min > p_max {
            return Err(Error::Config(format!("p_min {} > p_max {p_max}", self.p_min)));
        }
        Ok(self.p_min..=p_max)
    }
}

/// One random device subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    pub p: usize,
    pub index: usize,
    /// Sorted device positions.
    pub devices: Vec<usize>,
}

/// Draws `d` subsets per population size from the sampling stream of
/// `config.seed`. Each subset is without replacement; subsets may repeat.
pub fn draw_subsets(n_devices: usize, config: &EvalConfig) -> Result<Vec<Subset>> {
    let range = config.populations(n_devices)?;
    let mut rng = seed::rng(seed::substream(config.seed, "sampling"));
    let mut out = Vec::new();
    for p in range {
        for index in 0..config.d {
            let mut devices = sample(&mut rng, n_devices, p).into_vec();
            devices.sort_unstable();
            out.push(Subset { p, index, devices });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub method: Method,
    pub p: usize,
    pub subset_index: usize,
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
    /// Clusters excluding noise.
    pub n_clusters: usize,
    pub n_truth_devices: usize,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub p: usize,
    pub mean_v: f64,
    pub std_v: f64,
    pub mean_h: f64,
    pub std_h: f64,
    pub mean_c: f64,
    pub std_c: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub rows: Vec<MetricReport>,
    pub summary: Vec<SummaryRow>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Per-`(method, p)` means and population standard deviations.
pub fn summarize(rows: &[MetricReport]) -> Result<Vec<SummaryRow>> {
    let mut groups: BTreeMap<(String, usize), Vec<&MetricReport>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.method.to_string(), r.p)).or_default().push(r);
    }
    groups
        .into_values()
        .map(|g| {
            let col = |f: fn(&MetricReport) -> f64| g.iter().map(|r| f(r)).collect::<Vec<_>>();
            let (mean_v, std_v) = mean_std(&col(|r| r.v_measure));
            let (mean_h, std_h) = mean_std(&col(|r| r.homogeneity));
            let (mean_c, std_c) = mean_std(&col(|r| r.completeness));
            let counts: Vec<usize> = g.iter().map(|r| r.n_clusters).collect();
            let targets: Vec<usize> = g.iter().map(|r| r.n_truth_devices).collect();
            Ok(SummaryRow {
                method: g[0].method,
                p: g[0].p,
                mean_v,
                std_v,
                mean_h,
                std_h,
                mean_c,
                std_c,
                rmse: rmse(&counts, &targets)?,
            })
        })
        .collect()
}

/// Evaluates `method` on every drawn subset, in `(p, subset)` order.
pub fn run_protocol(
    dataset: &LabeledDataset,
    eval: &EvalConfig,
    dbscan: &DbscanConfig,
    kmeans: &KmeansConfig,
    method: Method,
) -> Result<ProtocolReport> {
    let subsets = draw_subsets(dataset.n_devices(), eval)?;
    let rows = subsets
        .par_iter()
        .map(|s| {
            let pool = dataset.pool(&s.devices);
            let labeling = cluster_bursts(&pool, method, dbscan, kmeans)?.fine;
            let m = score_labeling(&pool, &labeling)?;
            let n_clusters = labeling.n_clusters();
            Ok(MetricReport {
                method,
                p: s.p,
                subset_index: s.index,
                homogeneity: m.homogeneity,
                completeness: m.completeness,
                v_measure: m.v_measure,
                n_clusters,
                n_truth_devices: s.p,
                delta: delta_error(n_clusters, s.p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows)?;
    Ok(ProtocolReport { rows, summary })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneRow {
    pub eps: f64,
    pub min_pts: usize,
    pub mean_v: f64,
    pub mean_abs_delta: f64,
}

/// Stage-1 metrics averaged over all protocol subsets for every grid point,
/// best first (highest mean V, then lowest mean |Delta|, then grid order).
pub fn tune_dbscan(
    dataset: &LabeledDataset,
    eps_grid: &[f64],
    min_pts_grid: &[usize],
    eval: &EvalConfig,
) -> Result<Vec<TuneRow>> {
    if eps_grid.is_empty() || min_pts_grid.is_empty() {
        return Err(Error::Config("tuning grid is empty".into()));
    }
    let subsets = draw_subsets(dataset.n_devices(), eval)?;
    let pools: Vec<Vec<BurstRecord>> = subsets.iter().map(|s| dataset.pool(&s.devices)).collect();
    let grid: Vec<DbscanConfig> = eps_grid
        .iter()
        .flat_map(|&eps| min_pts_grid.iter().map(move |&min_pts| DbscanConfig { eps, min_pts }))
        .collect();
    let mut rows = grid
        .par_iter()
        .map(|cfg| {
            cfg.validate()?;
            let mut v_sum = 0.0;
            let mut delta_sum = 0.0;
            for (s, pool) in subsets.iter().zip(&pools) {
                let labeling = ie_only_cluster(pool, cfg)?;
                v_sum += score_labeling(pool, &labeling)?.v_measure;
                delta_sum += delta_error(labeling.n_clusters(), s.p).unsigned_abs() as f64;
            }
            let n = subsets.len() as f64;
            Ok(TuneRow {
                eps: cfg.eps,
                min_pts: cfg.min_pts,
                mean_v: v_sum / n,
                mean_abs_delta: delta_sum / n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        b.mean_v
            .total_cmp(&a.mean_v)
            .then(a.mean_abs_delta.total_cmp(&b.mean_abs_delta))
    });
    Ok(rows)
}
