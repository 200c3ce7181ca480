use super::KmeansConfig;

/// Cumulative drops at or below this are treated as no drop at all.
const FLAT_TOLERANCE: f64 = 1e-12;

/// `base + span * (1 - max(0, avg_similarity))`: tight clusters get a low
/// threshold and so fewer sub-clusters.
pub fn dynamic_threshold(avg_similarity: f64, config: &KmeansConfig) -> f64 {
    config.threshold_base + config.threshold_span * (1.0 - avg_similarity.max(0.0))
}

/// Picks `k` from distortions indexed `k = 1..=k_max`.
///
/// The per-step drops `D(k-1) - D(k)` for `k >= 2` are normalized by their
/// total; the result is the smallest `k` whose cumulative share reaches
/// `threshold`. Returns 1 when distortion is flat or the threshold is never
/// reached.
pub fn elbow_select_k(distortions: &[f64], threshold: f64) -> usize {
    if distortions.len() < 2 {
        return 1;
    }
    let mut running = Vec::with_capacity(distortions.len());
    let mut lowest = f64::INFINITY;
    for &d in distortions {
        lowest = lowest.min(d);
        running.push(lowest);
    }
    let drops: Vec<f64> = running.windows(2).map(|w| w[0] - w[1]).collect();
    let total: f64 = drops.iter().sum();
    if total <= FLAT_TOLERANCE {
        return 1;
    }
    let mut cumulative = 0.0;
    for (i, drop) in drops.iter().enumerate() {
        cumulative += drop / total;
        if cumulative + FLAT_TOLERANCE >= threshold {
            return i + 2;
        }
    }
    1
}
