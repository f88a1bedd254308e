//! Ink mismatch detection for handwritten hyperspectral document images.
//!
//! A scanned page carries more than the eye sees: inks that look identical in
//! RGB often differ in their spectral response across the visible and
//! near-infrared range. This crate loads hyperspectral cubes of handwritten
//! documents, strips the paper background, clusters the remaining ink spectra,
//! and reports how many spectrally distinct inks appear on each text line.
//!
//! The pieces compose as a pipeline:
//!
//! 1. [`envi`] reads ENVI header/raw pairs into a [`cube::HyperCube`].
//! 2. [`preprocess`] crops, thresholds a single band with Otsu's method to
//!    find ink pixels, segments text lines, and suppresses the background.
//! 3. [`signatures`] extracts mean spectral signatures per line.
//! 4. [`kmeans`] clusters pixel spectra with Lloyd's algorithm.
//! 5. [`segment`] colorizes the cluster labels and tabulates cluster
//!    composition per text line.
//! 6. [`synth`] generates labeled synthetic documents for end-to-end checks.
//! 7. [`pipeline`] chains the stages and writes artifacts to a directory.

pub mod cube;
pub mod envi;
pub mod kmeans;
pub mod metrics;
pub mod pipeline;
pub mod plot;
pub mod pngio;
pub mod preprocess;
pub mod segment;
pub mod signatures;
pub mod synth;

pub use cube::{GrayImage, HyperCube};
pub use envi::{ByteOrder, EnviHeader, Interleave};
pub use kmeans::{ClusterModel, InitStrategy, KMeansConfig};
pub use pipeline::{PipelineConfig, PipelineError, PipelineReport, Stage};
pub use preprocess::{BinaryMask, Histogram, LineRegion, Rect};
pub use segment::{LineClusterTable, SegmentedImage};
pub use signatures::SpectralSignature;
pub use synth::{GroundTruth, SynthSpec};
