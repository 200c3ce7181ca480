//! Reference implementations used as test oracles, plus scenario helpers.
//! Each oracle is written for clarity, not speed, and shares no code with
//! the library routine it checks.

#![allow(dead_code)]

use std::collections::HashMap;
use std::hash::Hash;
use std::path::{Path, PathBuf};

use probe_derand::cluster::Label;
use probe_derand::synth::Scenario;

pub fn load_scenario(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Scenario::from_toml(&text).unwrap()
}

pub fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// DBSCAN from the definitions: core points are those with at least
/// `min_pts` points (themselves included) within `eps`; connected core
/// points share a cluster; a border point goes to the adjacent cluster
/// whose lowest-index core point is smallest; all else is noise. Returns a
/// cluster key per point (the lowest core index of its cluster).
pub fn dbscan_oracle(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let close = |i: usize, j: usize| {
        let d2: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum();
        d2 <= eps * eps
    };
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| close(i, j)).count() >= min_pts).collect();
    let mut uf = UnionFind((0..n).collect());
    for i in 0..n {
        for j in 0..n {
            if core[i] && core[j] && close(i, j) {
                uf.union(i, j);
            }
        }
    }
    (0..n)
        .map(|i| {
            if core[i] {
                Some(uf.find(i))
            } else {
                (0..n).filter(|&j| core[j] && close(i, j)).map(|j| uf.find(j)).min()
            }
        })
        .collect()
}

/// True when two labelings induce the same partition and the same noise set.
pub fn same_partition(labels: &[Label], oracle: &[Option<usize>]) -> bool {
    if labels.len() != oracle.len() {
        return false;
    }
    let mut fwd: HashMap<u32, usize> = HashMap::new();
    let mut back: HashMap<usize, u32> = HashMap::new();
    for (l, o) in labels.iter().zip(oracle) {
        match (l, o) {
            (Label::Noise, None) => {}
            (Label::Cluster(c), Some(k)) => {
                if *fwd.entry(*c).or_insert(*k) != *k || *back.entry(*k).or_insert(*c) != *c {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Homogeneity, completeness and V-measure computed from an explicit
/// contingency table with natural-log entropies.
pub fn vmeasure_oracle<A: Eq + Hash + Clone, B: Eq + Hash + Clone>(truth: &[A], pred: &[B]) -> (f64, f64, f64) {
    let n = truth.len() as f64;
    if truth.is_empty() {
        return (1.0, 1.0, 1.0);
    }
    let mut classes: Vec<A> = Vec::new();
    let mut clusters: Vec<B> = Vec::new();
    for t in truth {
        if !classes.contains(t) {
            classes.push(t.clone());
        }
    }
    for p in pred {
        if !clusters.contains(p) {
            clusters.push(p.clone());
        }
    }
    let mut table = vec![vec![0.0f64; clusters.len()]; classes.len()];
    for (t, p) in truth.iter().zip(pred) {
        let c = classes.iter().position(|x| x == t).unwrap();
        let k = clusters.iter().position(|x| x == p).unwrap();
        table[c][k] += 1.0;
    }
    let row: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<f64> = (0..clusters.len()).map(|k| table.iter().map(|r| r[k]).sum()).collect();
    let entropy = |counts: &[f64]| -> f64 {
        counts
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -(x / n) * (x / n).ln())
            .sum()
    };
    let h_c = entropy(&row);
    let h_k = entropy(&col);
    let mut h_c_given_k = 0.0;
    let mut h_k_given_c = 0.0;
    for (c, r) in table.iter().enumerate() {
        for (k, &a) in r.iter().enumerate() {
            if a > 0.0 {
                h_c_given_k -= (a / n) * (a / col[k]).ln();
                h_k_given_c -= (a / n) * (a / row[c]).ln();
            }
        }
    }
    let h = if h_c == 0.0 { 1.0 } else { 1.0 - h_c_given_k / h_c };
    let c = if h_k == 0.0 { 1.0 } else { 1.0 - h_k_given_c / h_k };
    let v = if h + c == 0.0 { 0.0 } else { 2.0 * h * c / (h + c) };
    (h, c, v)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Lowest squared cosine distortion over every assignment of rows to `k`
/// non-empty groups, each group scored against its renormalized mean.
/// Returns the distortion and one minimizing assignment.
pub fn exhaustive_kmeans(rows: &[Vec<f64>], k: usize) -> (f64, Vec<usize>) {
    let n = rows.len();
    assert!(k >= 1 && k <= n && (k as f64).powi(n as i32) <= 2e6);
    let units: Vec<Vec<f64>> = rows.iter().map(|r| unit(r)).collect();
    let dim = units[0].len();
    let mut labels = vec![0usize; n];
    let mut best = (f64::INFINITY, Vec::new());
    loop {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (u, &l) in units.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(u) {
                *s += x;
            }
        }
        if counts.iter().all(|&c| c > 0) {
            let centers: Vec<Vec<f64>> = sums.iter().map(|s| unit(s)).collect();
            let d: f64 = units
                .iter()
                .zip(&labels)
                .map(|(u, &l)| {
                    let cos: f64 = u.iter().zip(&centers[l]).map(|(a, b)| a * b).sum();
                    (1.0 - cos.min(1.0)).powi(2)
                })
                .sum();
            if d < best.0 {
                best = (d, labels.clone());
            }
        }
        // Odometer increment over k^n assignments.
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Same partition for two plain label vectors.
pub fn same_grouping(a: &[usize], b: &[usize]) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x)
}
