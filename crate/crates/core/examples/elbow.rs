//! The k selection of stage 2 on three kinds of coarse cluster: a single
//! device, a twin pair and a device whose sweep is jittered.
//!
//!     cargo run --example elbow

use probe_derand::cluster::{refine_cluster, KmeansConfig};

fn rows(patterns: &[(&[f64], usize)]) -> Vec<Vec<f64>> {
    patterns
        .iter()
        .flat_map(|(p, n)| std::iter::repeat_n(p.to_vec(), *n))
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = KmeansConfig::default();
    let fwd: &[f64] = &[1.0, 6.0, 11.0, 1.0, 6.0, 11.0];
    let rev: &[f64] = &[11.0, 6.0, 1.0, 11.0, 6.0, 1.0];
    let jittered: &[f64] = &[1.0, 6.0, 11.0, 1.0, 3.0, 11.0];
    let cases = [
        ("one device", rows(&[(fwd, 30)])),
        ("twin pair", rows(&[(fwd, 30), (rev, 30)])),
        ("one device, 1 in 10 bursts jittered", rows(&[(fwd, 27), (jittered, 3)])),
    ];
    for (name, rows) in cases {
        let r = refine_cluster(&rows, &cfg)?;
        let d: Vec<String> = r.distortions.iter().map(|x| format!("{x:.4}")).collect();
        println!("{name}:");
        println!("  avg similarity {:.4} -> threshold {:.4}", r.avg_similarity, r.threshold);
        println!("  D(k) for k = 1..{}: [{}]", r.distortions.len(), d.join(", "));
        println!("  chosen k = {}", r.k);
    }
    Ok(())
}
