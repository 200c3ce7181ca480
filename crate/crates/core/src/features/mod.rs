//! Per-burst descriptors: the IE fingerprint and the channel arrival-order
//! vector.

mod burst;
mod encode;
mod file;
mod matrix;

pub use burst::{build_channel_vector, group_bursts, Burst, BurstRecord, DEFAULT_GAP_SECONDS};
pub use encode::{
    build_ie_features, encode_ie, normalize_ie_matrix, IeEncoding, IeFeatureVector, IeKind,
};
pub use file::{read_feature_file, read_features, write_features};
pub use matrix::{pad_matrix, PaddedFeatureMatrix};
