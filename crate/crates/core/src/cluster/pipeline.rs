use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::elbow::{dynamic_threshold, elbow_select_k};
use super::kmeans::{average_pairwise_similarity, spherical_kmeans};
use super::{dbscan, ClusterLabeling, DbscanConfig, KmeansConfig, Label};
use crate::features::{normalize_ie_matrix, pad_matrix, BurstRecord};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// DBSCAN over IE fingerprints, then k-means over channel vectors.
    #[default]
    TwoStage,
    /// DBSCAN over IE fingerprints only.
    IeOnly,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Method::TwoStage => "two-stage",
            Method::IeOnly => "ie-only",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-stage" => Ok(Method::TwoStage),
            "ie-only" => Ok(Method::IeOnly),
            other => Err(Error::Config(format!(
                "unknown method {other:?} (expected two-stage or ie-only)"
            ))),
        }
    }
}

/// How one coarse cluster was split.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub k: usize,
    pub avg_similarity: f64,
    pub threshold: f64,
    /// Best distortion for `k = 1..=min(k_max, rows)`.
    pub distortions: Vec<f64>,
    /// Sub-cluster per row, numbered by first appearance.
    pub labels: Vec<usize>,
}

fn first_appearance(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map.len() <= l {
                map.resize(l + 1, None);
            }
            *map[l].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Splits the rows of one coarse cluster with cosine k-means, choosing `k`
/// by the elbow rule under a similarity-dependent threshold.
pub fn refine_cluster<R: AsRef<[f64]> + Sync>(rows: &[R], config: &KmeansConfig) -> Result<Refinement> {
    if rows.is_empty() {
        return Err(Error::NoBursts);
    }
    let avg_similarity = average_pairwise_similarity(rows)?;
    let threshold = dynamic_threshold(avg_similarity, config);
    let k_top = config.k_max.min(rows.len());
    let fits = (1..=k_top)
        .map(|k| spherical_kmeans(rows, k, config))
        .collect::<Result<Vec<_>>>()?;
    let distortions: Vec<f64> = fits.iter().map(|f| f.distortion).collect();
    let k = elbow_select_k(&distortions, threshold);
    let labels = if k == 1 {
        vec![0; rows.len()]
    } else {
        first_appearance(&fits[k - 1].labels)
    };
    Ok(Refinement {
        k,
        avg_similarity,
        threshold,
        distortions,
        labels,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageLabeling {
    /// Stage-1 labels.
    pub coarse: ClusterLabeling,
    /// Final labels; noise stays noise.
    pub fine: ClusterLabeling,
    /// One entry per coarse cluster, in label order.
    pub refinements: Vec<Refinement>,
}

/// Burst indices sorted by id; rejects empty input and duplicate ids.
fn scan_order(bursts: &[BurstRecord]) -> Result<Vec<usize>> {
    if bursts.is_empty() {
        return Err(Error::NoBursts);
    }
    let mut order: Vec<usize> = (0..bursts.len()).collect();
    order.sort_by_key(|&i| bursts[i].burst_id);
    if let Some(w) = order
        .windows(2)
        .find(|w| bursts[w[0]].burst_id == bursts[w[1]].burst_id)
    {
        return Err(Error::Config(format!(
            "duplicate burst id {}",
            bursts[w[0]].burst_id
        )));
    }
    Ok(order)
}

fn coarse_stage(bursts: &[BurstRecord], order: &[usize], config: &DbscanConfig) -> Result<ClusterLabeling> {
    config.validate()?;
    let features: Vec<_> = order.iter().map(|&i| bursts[i].ie_features).collect();
    let points = normalize_ie_matrix(&features);
    let labels = dbscan(&points, config);
    let ids = order.iter().map(|&i| bursts[i].burst_id).collect();
    Ok(ClusterLabeling::new(ids, labels))
}

/// Stage 1 alone: DBSCAN over min-max normalized IE fingerprints.
pub fn ie_only_cluster(bursts: &[BurstRecord], config: &DbscanConfig) -> Result<ClusterLabeling> {
    let order = scan_order(bursts)?;
    coarse_stage(bursts, &order, config)
}

pub fn two_stage_cluster(
    bursts: &[BurstRecord],
    dbscan_config: &DbscanConfig,
    kmeans_config: &KmeansConfig,
) -> Result<TwoStageLabeling> {
    kmeans_config.validate()?;
    let order = scan_order(bursts)?;
    let coarse = coarse_stage(bursts, &order, dbscan_config)?;
    let matrix = pad_matrix(
        &order
            .iter()
            .map(|&i| bursts[i].channel_vector.as_slice())
            .collect::<Vec<_>>(),
    )?;
    let rows = matrix.to_f64();

    let mut members = vec![Vec::new(); coarse.n_clusters()];
    for (pos, label) in coarse.labels.iter().enumerate() {
        if let Label::Cluster(c) = label {
            members[*c as usize].push(pos);
        }
    }
    let refinements = members
        .par_iter()
        .map(|idx| {
            let sub: Vec<&[f64]> = idx.iter().map(|&p| rows[p].as_slice()).collect();
            refine_cluster(&sub, kmeans_config)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut fine = vec![Label::Noise; coarse.len()];
    let mut offset = 0u32;
    for (idx, refinement) in members.iter().zip(&refinements) {
        for (&pos, &sub) in idx.iter().zip(&refinement.labels) {
            fine[pos] = Label::Cluster(offset + sub as u32);
        }
        offset += refinement.k as u32;
    }
    let fine = ClusterLabeling {
        burst_ids: coarse.burst_ids.clone(),
        labels: fine,
    };
    Ok(TwoStageLabeling {
        coarse,
        fine,
        refinements,
    })
}

/// Runs `method`. For [`Method::IeOnly`] the fine labeling equals the coarse one.
pub fn cluster_bursts(
    bursts: &[BurstRecord],
    method: Method,
    dbscan_config: &DbscanConfig,
    kmeans_config: &KmeansConfig,
) -> Result<TwoStageLabeling> {
    match method {
        Method::TwoStage => two_stage_cluster(bursts, dbscan_config, kmeans_config),
        Method::IeOnly => {
            let coarse = ie_only_cluster(bursts, dbscan_config)?;
            Ok(TwoStageLabeling {
                fine: coarse.clone(),
                coarse,
                refinements: Vec::new(),
            })
        }
    }
}
