use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::cluster::{ClusterLabeling, Label};
use crate::features::BurstRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Homogeneity, completeness and V-measure (natural-log entropies).
///
/// `h = 1 - H(truth | pred) / H(truth)`, `c = 1 - H(pred | truth) / H(pred)`,
/// each 1 when its denominator is 0; `v` is their harmonic mean.
pub fn homogeneity_completeness_v<A, B>(truth: &[A], pred: &[B]) -> Result<VMeasure>
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if truth.len() != pred.len() {
        return Err(Error::MismatchedBursts);
    }
    if truth.is_empty() {
        return Ok(VMeasure {
            homogeneity: 1.0,
            completeness: 1.0,
            v_measure: 1.0,
        });
    }
    let n = truth.len() as f64;
    let mut classes: HashMap<&A, usize> = HashMap::new();
    let mut clusters: HashMap<&B, usize> = HashMap::new();
    // Ordered so the floating-point sums below do not depend on hashing.
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, p) in truth.iter().zip(pred) {
        let next = classes.len();
        let ci = *classes.entry(t).or_insert(next);
        let next = clusters.len();
        let ki = *clusters.entry(p).or_insert(next);
        *joint.entry((ci, ki)).or_default() += 1;
    }
    let mut class_n = vec![0usize; classes.len()];
    let mut cluster_n = vec![0usize; clusters.len()];
    for (&(c, k), &m) in &joint {
        class_n[c] += m;
        cluster_n[k] += m;
    }
    let h_class = entropy(class_n.iter().copied(), n);
    let h_cluster = entropy(cluster_n.iter().copied(), n);
    let mut h_class_given_cluster = 0.0;
    let mut h_cluster_given_class = 0.0;
    for (&(c, k), &m) in &joint {
        let p = m as f64 / n;
        h_class_given_cluster -= p * (m as f64 / cluster_n[k] as f64).ln();
        h_cluster_given_class -= p * (m as f64 / class_n[c] as f64).ln();
    }
    let homogeneity = if h_class == 0.0 {
        1.0
    } else {
        (1.0 - h_class_given_cluster / h_class).clamp(0.0, 1.0)
    };
    let completeness = if h_cluster == 0.0 {
        1.0
    } else {
        (1.0 - h_cluster_given_class / h_cluster).clamp(0.0, 1.0)
    };
    let v_measure = if homogeneity + completeness == 0.0 {
        0.0
    } else {
        2.0 * homogeneity * completeness / (homogeneity + completeness)
    };
    Ok(VMeasure {
        homogeneity,
        completeness,
        v_measure,
    })
}

/// Scores a labeling against the bursts' truth labels. Noise counts as one
/// more predicted cluster.
pub fn score_labeling(bursts: &[BurstRecord], labeling: &ClusterLabeling) -> Result<VMeasure> {
    if bursts.len() != labeling.len() {
        return Err(Error::MismatchedBursts);
    }
    let by_id = labeling.as_map();
    let mut truth = Vec::with_capacity(bursts.len());
    let mut pred: Vec<Label> = Vec::with_capacity(bursts.len());
    for b in bursts {
        truth.push(
            b.truth_device
                .as_deref()
                .ok_or(Error::MissingTruth(b.burst_id))?,
        );
        pred.push(*by_id.get(&b.burst_id).ok_or(Error::MismatchedBursts)?);
    }
    homogeneity_completeness_v(&truth, &pred)
}

/// Signed error of a cluster count: positive means over-counting.
pub fn delta_error(n_clusters: usize, devices: usize) -> i64 {
    n_clusters as i64 - devices as i64
}

pub fn rmse(counts: &[usize], targets: &[usize]) -> Result<f64> {
    if counts.len() != targets.len() {
        return Err(Error::LengthMismatch(counts.len(), targets.len()));
    }
    if counts.is_empty() {
        return Err(Error::Config("rmse of an empty list".into()));
    }
    let sq: f64 = counts
        .iter()
        .zip(targets)
        .map(|(&c, &t)| {
            let d = delta_error(c, t) as f64;
            d * d
        })
        .sum();
    Ok((sq / counts.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn perfect_clustering_under_relabeling() {
        let m = homogeneity_completeness_v(&["a", "a", "b", "c"], &[7, 7, 2, 9]).unwrap();
        assert!(close(m.homogeneity, 1.0) && close(m.completeness, 1.0) && close(m.v_measure, 1.0));
    }

    #[test]
    fn single_cluster_is_complete() {
        let m = homogeneity_completeness_v(&["a", "a", "b", "b", "c"], &[0; 5]).unwrap();
        assert_eq!(m.completeness, 1.0);
        assert!(m.homogeneity < 1.0);
        assert_eq!(m.homogeneity, 0.0);
    }

    #[test]
    fn singletons_two_devices() {
        // H(pred|truth) = ln 2, H(pred) = ln 4.
        let m = homogeneity_completeness_v(&["a", "a", "b", "b"], &[0, 1, 2, 3]).unwrap();
        assert!(close(m.homogeneity, 1.0));
        assert!(close(m.completeness, 0.5));
        assert!(close(m.v_measure, 2.0 / 3.0));
    }

    #[test]
    fn mismatched_lengths() {
        assert!(homogeneity_completeness_v(&["a"], &[0, 1]).is_err());
    }

    #[test]
    fn delta_and_rmse() {
        assert_eq!(delta_error(5, 5), 0);
        assert_eq!(delta_error(3, 5), -2);
        assert_eq!(delta_error(7, 5), 2);
        assert_eq!(rmse(&[5, 5], &[5, 5]).unwrap(), 0.0);
        assert_eq!(rmse(&[4, 6], &[5, 5]).unwrap(), 1.0);
        assert_eq!(rmse(&[7, 7], &[5, 5]).unwrap(), 2.0);
        assert!(rmse(&[1], &[1, 2]).is_err());
    }
}
