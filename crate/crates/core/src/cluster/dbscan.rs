use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Label;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbscanConfig {
    /// Neighbourhood radius (Euclidean, normalized feature space).
    pub eps: f64,
    /// Points within `eps`, the point itself included, that make a core point.
    pub min_pts: usize,
}

impl Default for DbscanConfig {
    fn default() -> Self {
        DbscanConfig {
            eps: 0.05,
            min_pts: 10,
        }
    }
}

impl DbscanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        if self.min_pts == 0 {
            return Err(Error::Config("min_pts must be at least 1".into()));
        }
        Ok(())
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// DBSCAN scanning points in index order. A border point reachable from
/// several clusters joins the first one discovered.
pub fn dbscan<P: AsRef<[f64]>>(points: &[P], config: &DbscanConfig) -> Vec<Label> {
    let eps2 = config.eps * config.eps;
    let neighbours = |i: usize| -> Vec<usize> {
        let p = points[i].as_ref();
        (0..points.len())
            .filter(|&j| dist2(p, points[j].as_ref()) <= eps2)
            .collect()
    };

    let mut labels: Vec<Option<Label>> = vec![None; points.len()];
    let mut next = 0u32;
    for i in 0..points.len() {
        if labels[i].is_some() {
            continue;
        }
        let seeds = neighbours(i);
        if seeds.len() < config.min_pts {
            labels[i] = Some(Label::Noise);
            continue;
        }
        let cluster = Label::Cluster(next);
        next += 1;
        labels[i] = Some(cluster);
        let mut queue: VecDeque<usize> = seeds.into();
        while let Some(j) = queue.pop_front() {
            match labels[j] {
                Some(Label::Noise) => labels[j] = Some(cluster),
                Some(Label::Cluster(_)) => {}
                None => {
                    labels[j] = Some(cluster);
                    let more = neighbours(j);
                    if more.len() >= config.min_pts {
                        queue.extend(more);
                    }
                }
            }
        }
    }
    labels.into_iter().map(|l| l.unwrap_or(Label::Noise)).collect()
}
