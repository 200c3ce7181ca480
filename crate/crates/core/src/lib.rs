//! De-randomization of MAC addresses in captured Wi-Fi Probe Request traffic.
//!
//! The pipeline runs in four steps:
//!
//! 1. [`capture`] parses pcap files (Radiotap or bare 802.11), keeps Probe
//!    Requests and merges the per-channel sniffer captures into one stream.
//! 2. [`features`] groups frames into per-MAC bursts and builds two
//!    descriptors per burst: an IE fingerprint (HT Capabilities, Extended
//!    Capabilities, Vendor Specific) and the arrival-order vector of DS
//!    channels.
//! 3. [`cluster`] runs DBSCAN over the normalized fingerprints, then splits
//!    every coarse cluster with cosine k-means over the channel vectors,
//!    choosing `k` with an elbow rule whose threshold adapts to the
//!    cluster's internal similarity.
//! 4. [`metrics`] scores labelings against ground truth (homogeneity,
//!    completeness, V-measure, Delta, RMSE) and runs the random-subset
//!    evaluation protocol and the DBSCAN hyperparameter sweep.
//!
//! [`synth`] generates labeled multi-channel captures from device profiles,
//! which is how the whole pipeline is exercised without physical devices.
//! The `examples/` directory has one runnable program per capability.

pub mod capture;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod features;
pub mod metrics;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
