//! Labeled synthetic multi-channel Probe Request traffic.
//!
//! A [`Scenario`] lists device profiles; generation produces per-device
//! frame streams, the sniffer model decides which channel capture hears each
//! frame, and [`generate_scenario`] lays the result out as a dataset
//! directory that `ingest` reads back with ground truth.

mod generate;
mod output;
mod profile;

pub use generate::{assign_to_sniffers, generate_device, generate_frames, LabeledFrame};
pub use output::{generate_scenario, write_capture, write_capture_file, GeneratedDataset, MANIFEST_FILE};
pub use profile::{BurstLength, DeviceProfile, IeTemplate, Interval, Scenario};
