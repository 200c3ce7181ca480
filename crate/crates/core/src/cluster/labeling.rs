use std::collections::BTreeMap;
use std::fmt;

/// Cluster assignment of one burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Noise,
    Cluster(u32),
}

impl Label {
    /// `-1` for noise.
    pub fn as_i64(self) -> i64 {
        match self {
            Label::Noise => -1,
            Label::Cluster(c) => i64::from(c),
        }
    }

    pub fn cluster(self) -> Option<u32> {
        match self {
            Label::Noise => None,
            Label::Cluster(c) => Some(c),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

/// Labels aligned with burst ids; cluster labels are `0..n_clusters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub burst_ids: Vec<u64>,
    pub labels: Vec<Label>,
}

impl ClusterLabeling {
    /// Renumbers clusters `0..n` in order of first appearance.
    pub fn new(burst_ids: Vec<u64>, labels: Vec<Label>) -> Self {
        assert_eq!(burst_ids.len(), labels.len());
        let mut map = BTreeMap::new();
        let labels = labels
            .into_iter()
            .map(|l| match l {
                Label::Noise => Label::Noise,
                Label::Cluster(c) => {
                    let next = map.len() as u32;
                    Label::Cluster(*map.entry(c).or_insert(next))
                }
            })
            .collect();
        ClusterLabeling { burst_ids, labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Clusters excluding noise.
    pub fn n_clusters(&self) -> usize {
        self.labels
            .iter()
            .filter_map(|l| l.cluster())
            .max()
            .map_or(0, |m| m as usize + 1)
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Noise).count()
    }

    /// Members per cluster label.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters()];
        for c in self.labels.iter().filter_map(|l| l.cluster()) {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn get(&self, burst_id: u64) -> Option<Label> {
        self.burst_ids
            .iter()
            .position(|&id| id == burst_id)
            .map(|i| self.labels[i])
    }

    pub fn as_map(&self) -> BTreeMap<u64, Label> {
        self.burst_ids
            .iter()
            .copied()
            .zip(self.labels.iter().copied())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renumbers_contiguously() {
        let l = ClusterLabeling::new(
            vec![10, 11, 12, 13, 14],
            vec![
                Label::Cluster(7),
                Label::Noise,
                Label::Cluster(3),
                Label::Cluster(7),
                Label::Cluster(3),
            ],
        );
        assert_eq!(l.labels[0], Label::Cluster(0));
        assert_eq!(l.labels[2], Label::Cluster(1));
        assert_eq!(l.n_clusters(), 2);
        assert_eq!(l.noise_count(), 1);
        assert_eq!(l.cluster_sizes(), vec![2, 2]);
        assert_eq!(l.get(11), Some(Label::Noise));
        assert_eq!(l.get(99), None);
        assert_eq!(Label::Noise.to_string(), "-1");
    }
}
