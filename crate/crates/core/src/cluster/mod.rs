//! Coarse DBSCAN over IE fingerprints, fine cosine k-means over channel
//! vectors, and the two-stage composition.

mod dbscan;
mod elbow;
mod file;
mod kmeans;
mod labeling;
mod pipeline;

pub use dbscan::{dbscan, DbscanConfig};
pub use elbow::{dynamic_threshold, elbow_select_k};
pub use file::write_labeling;
pub use kmeans::{
    average_pairwise_similarity, cosine_similarity, spherical_kmeans, DistortionKind, KmeansConfig,
    KmeansFit,
};
pub use labeling::{ClusterLabeling, Label};
pub use pipeline::{
    cluster_bursts, ie_only_cluster, refine_cluster, two_stage_cluster, Method, Refinement,
    TwoStageLabeling,
};
