//! k-means on the unit sphere (cosine similarity).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::{Error, Result};

/// Per-row contribution to the distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistortionKind {
    /// `(1 - cos)^2`
    #[default]
    SquaredCosineDistance,
    /// `1 - cos`
    CosineDistance,
}

impl DistortionKind {
    fn of(self, similarity: f64) -> f64 {
        let d = (1.0 - similarity).max(0.0);
        match self {
            DistortionKind::SquaredCosineDistance => d * d,
            DistortionKind::CosineDistance => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansConfig {
    pub k_max: usize,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub threshold_base: f64,
    pub threshold_span: f64,
    pub distortion: DistortionKind,
}

impl Default for KmeansConfig {
    fn default() -> Self {
        KmeansConfig {
            k_max: 5,
            max_iterations: 100,
            restarts: 8,
            seed: seed::DEFAULT_SEED,
            threshold_base: 0.4,
            threshold_span: 0.6,
            distortion: DistortionKind::default(),
        }
    }
}

impl KmeansConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.max_iterations == 0 || self.restarts == 0 {
            return Err(Error::Config(
                "k_max, max_iterations and restarts must be positive".into(),
            ));
        }
        if self.threshold_base < 0.0
            || self.threshold_span < 0.0
            || self.threshold_base + self.threshold_span > 1.0 + 1e-9
        {
            return Err(Error::Config(format!(
                "threshold_base + threshold_span must lie in [0, 1], got {} + {}",
                self.threshold_base, self.threshold_span
            )));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

fn unit(row: &[f64]) -> Result<Vec<f64>> {
    let n = norm(row);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(row.iter().map(|x| x / n).collect())
}

/// Mean cosine similarity over all unordered pairs of rows; 1.0 for a
/// single row. Uses `sum_{i<j} u_i.u_j = (|sum u|^2 - n) / 2`.
pub fn average_pairwise_similarity<R: AsRef<[f64]>>(rows: &[R]) -> Result<f64> {
    let n = rows.len();
    if n < 2 {
        return Ok(1.0);
    }
    let dim = rows[0].as_ref().len();
    let mut sum = vec![0.0; dim];
    for r in rows {
        if r.as_ref().len() != dim {
            return Err(Error::LengthMismatch(dim, r.as_ref().len()));
        }
        for (s, x) in sum.iter_mut().zip(unit(r.as_ref())?) {
            *s += x;
        }
    }
    let pairs = (n * (n - 1)) as f64;
    Ok(((dot(&sum, &sum) - n as f64) / pairs).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansFit {
    pub labels: Vec<usize>,
    /// Unit-length centers.
    pub centers: Vec<Vec<f64>>,
    pub distortion: f64,
    /// Distortion after each accepted iteration of the winning run.
    pub history: Vec<f64>,
}

struct Run {
    labels: Vec<usize>,
    centers: Vec<Vec<f64>>,
    distortion: f64,
    history: Vec<f64>,
}

/// Seeds centers k-means++ style, weighting rows by the squared cosine
/// distance to their nearest chosen center.
fn seed_centers(units: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = units.len();
    let mut centers = vec![units[rng.random_range(0..n)].clone()];
    let mut nearest: Vec<f64> = units.iter().map(|u| 1.0 - dot(u, &centers[0])).collect();
    while centers.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|d| d.max(0.0).powi(2)).collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, w) in weights.iter().enumerate() {
                if *w > 0.0 && target < *w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = units[pick].clone();
        for (d, u) in nearest.iter_mut().zip(units) {
            *d = d.min(1.0 - dot(u, &c));
        }
        centers.push(c);
    }
    centers
}

/// Assigns every row to its most similar center (ties to the lower index),
/// then reseeds empty clusters with the row least similar to its center.
fn assign(units: &[Vec<f64>], centers: &mut [Vec<f64>], kind: DistortionKind) -> (Vec<usize>, f64) {
    let k = centers.len();
    let mut labels = Vec::with_capacity(units.len());
    let mut sims = Vec::with_capacity(units.len());
    for u in units {
        let (best, sim) = centers
            .iter()
            .map(|c| dot(u, c))
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc });
        labels.push(best);
        sims.push(sim);
    }
    let mut counts = vec![0usize; k];
    for &l in &labels {
        counts[l] += 1;
    }
    while let Some(empty) = counts.iter().position(|&c| c == 0) {
        let worst = (0..units.len())
            .filter(|&i| counts[labels[i]] > 1)
            .min_by(|&a, &b| sims[a].total_cmp(&sims[b]).then(a.cmp(&b)))
            .expect("k <= rows leaves a cluster with two members");
        counts[labels[worst]] -= 1;
        counts[empty] += 1;
        labels[worst] = empty;
        centers[empty] = units[worst].clone();
        sims[worst] = 1.0;
    }
    let distortion = sims.iter().map(|&s| kind.of(s.min(1.0))).sum();
    (labels, distortion)
}

fn update(units: &[Vec<f64>], labels: &[usize], previous: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = units[0].len();
    let mut sums = vec![vec![0.0; dim]; previous.len()];
    for (u, &l) in units.iter().zip(labels) {
        for (s, x) in sums[l].iter_mut().zip(u) {
            *s += x;
        }
    }
    sums.into_iter()
        .zip(previous)
        .map(|(s, prev)| unit(&s).unwrap_or_else(|_| prev.clone()))
        .collect()
}

fn run_once(units: &[Vec<f64>], k: usize, config: &KmeansConfig, rng: &mut impl Rng) -> Run {
    let mut centers = seed_centers(units, k, rng);
    let (mut labels, mut distortion) = assign(units, &mut centers, config.distortion);
    let mut history = vec![distortion];
    for _ in 0..config.max_iterations {
        let mut next_centers = update(units, &labels, &centers);
        let (next_labels, next_distortion) = assign(units, &mut next_centers, config.distortion);
        // The renormalized mean maximizes summed similarity, which does not
        // always lower the squared distortion; stop rather than go uphill.
        if next_distortion > distortion {
            break;
        }
        let moved = next_labels != labels;
        centers = next_centers;
        labels = next_labels;
        distortion = next_distortion;
        history.push(distortion);
        if !moved {
            break;
        }
    }
    Run {
        labels,
        centers,
        distortion,
        history,
    }
}

/// Best of `config.restarts` runs by distortion; earlier runs win ties.
/// The random stream depends only on `(config.seed, k)`.
pub fn spherical_kmeans<R: AsRef<[f64]>>(
    rows: &[R],
    k: usize,
    config: &KmeansConfig,
) -> Result<KmeansFit> {
    if k == 0 || k > rows.len() {
        return Err(Error::TooFewRows { k, rows: rows.len() });
    }
    let units = rows
        .iter()
        .map(|r| unit(r.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let dim = units[0].len();
    if let Some(bad) = units.iter().find(|u| u.len() != dim) {
        return Err(Error::LengthMismatch(dim, bad.len()));
    }
    let mut rng = seed::rng(seed::indexed(config.seed, k as u64));
    let mut best: Option<Run> = None;
    for _ in 0..config.restarts {
        let run = run_once(&units, k, config, &mut rng);
        if best.as_ref().is_none_or(|b| run.distortion < b.distortion) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    Ok(KmeansFit {
        labels: best.labels,
        centers: best.centers,
        distortion: best.distortion,
        history: best.history,
    })
}
