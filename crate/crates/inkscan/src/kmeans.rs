//! Lloyd's K-means over per-pixel band vectors.
//!
//! Clustering runs on the background-suppressed cube: every paper pixel
//! carries one identical flat spectrum, so the whole background collapses
//! into a single cluster and the remaining clusters absorb the inks.
//!
//! Everything here is deterministic: initialization is either a closed-form
//! spread between per-band extrema or seeded D^2 sampling, assignment ties
//! resolve to the lowest centroid index, and all reductions run in fixed
//! pixel order.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::HyperCube;
use crate::plot::{line_chart, Series};

#[derive(Debug, Error)]
pub enum KMeansError {
    #[error("k must be at least 1, got {0}")]
    ZeroK(usize),
    #[error("max_iterations must be at least 1, got {0}")]
    ZeroIterations(usize),
    #[error("centroid {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("assignment needs at least one centroid")]
    NoCentroids,
    #[error("kmeanspp needs {k} distinct pixel spectra, found only {distinct}")]
    InsufficientDistinctPixels { k: usize, distinct: usize },
    #[error("label {label} at pixel {pixel} does not fit the 8-bit label map")]
    LabelTooLarge { pixel: usize, label: u32 },
    #[error("label map is malformed: {0}")]
    BadLabelMap(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Centroid initialization strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitStrategy {
    /// Centroid `i` sits at `min_b + i * (max_b - min_b) / (k - 1)` in every
    /// band `b`; for k = 1 the per-band midpoint. Closed-form, seed-free.
    #[serde(rename = "uniform_spread")]
    UniformSpread,
    /// D^2-weighted sampling of actual pixel spectra, driven by the seed.
    #[serde(rename = "kmeanspp")]
    KMeansPlusPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub init_strategy: InitStrategy,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 7,
            max_iterations: 500,
            seed: 0,
            init_strategy: InitStrategy::UniformSpread,
        }
    }
}

impl KMeansConfig {
    fn validate(&self) -> Result<(), KMeansError> {
        if self.k == 0 {
            return Err(KMeansError::ZeroK(self.k));
        }
        if self.max_iterations == 0 {
            return Err(KMeansError::ZeroIterations(self.max_iterations));
        }
        Ok(())
    }
}

/// Result of one clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    /// One centroid spectrum per cluster, each of cube band length.
    pub centroids: Vec<Vec<f64>>,
    /// Row-major per-pixel labels, each in `0..k`.
    pub labels: Vec<u32>,
    pub rows: usize,
    pub cols: usize,
    /// Assignment passes executed.
    pub iterations_run: usize,
    /// Sum over pixels of squared Euclidean distance to the assigned centroid.
    pub sse: f64,
    pub converged: bool,
}

/// Snapshot of one assign+update round, for step-level verification.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRound {
    pub labels: Vec<u32>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
}

/// Squared Euclidean distance.
///
/// Four independent accumulators overlap the FP latency chain; the final
/// reduction is left-associative, which for dimensions up to 4 reproduces the
/// plain sequential sum bit-for-bit.
#[inline]
fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4 * 4;
    let mut i = 0;
    while i < chunks {
        let d0 = a[i] - b[i];
        let d1 = a[i + 1] - b[i + 1];
        let d2 = a[i + 2] - b[i + 2];
        let d3 = a[i + 3] - b[i + 3];
        acc[0] += d0 * d0;
        acc[1] += d1 * d1;
        acc[2] += d2 * d2;
        acc[3] += d3 * d3;
        i += 4;
    }
    for j in chunks..a.len() {
        let d = a[j] - b[j];
        acc[j - chunks] += d * d;
    }
    ((acc[0] + acc[1]) + acc[2]) + acc[3]
}

/// [`dist_sq`] with an abort bound. Partial sums of squares never decrease,
/// so once they exceed `bound` the exact total cannot come back under it and
/// the caller's comparison against `bound` is unaffected by the early exit.
#[inline]
fn dist_sq_bounded(a: &[f64], b: &[f64], bound: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4 * 4;
    let mut i = 0;
    while i < chunks {
        let d0 = a[i] - b[i];
        let d1 = a[i + 1] - b[i + 1];
        let d2 = a[i + 2] - b[i + 2];
        let d3 = a[i + 3] - b[i + 3];
        acc[0] += d0 * d0;
        acc[1] += d1 * d1;
        acc[2] += d2 * d2;
        acc[3] += d3 * d3;
        i += 4;
        if ((acc[0] + acc[1]) + acc[2]) + acc[3] > bound {
            return f64::INFINITY;
        }
    }
    for j in chunks..a.len() {
        let d = a[j] - b[j];
        acc[j - chunks] += d * d;
    }
    ((acc[0] + acc[1]) + acc[2]) + acc[3]
}

/// Produces `config.k` starting centroids for a cube's pixel spectra.
pub fn init_centroids(
    cube: &HyperCube,
    config: &KMeansConfig,
) -> Result<Vec<Vec<f64>>, KMeansError> {
    config.validate()?;
    let k = config.k;
    let dim = cube.bands();
    match config.init_strategy {
        InitStrategy::UniformSpread => {
            let mut min = vec![f64::INFINITY; dim];
            let mut max = vec![f64::NEG_INFINITY; dim];
            for p in 0..cube.n_pixels() {
                let spectrum = &cube.data()[p * dim..(p + 1) * dim];
                for b in 0..dim {
                    min[b] = min[b].min(spectrum[b]);
                    max[b] = max[b].max(spectrum[b]);
                }
            }
            let centroids = (0..k)
                .map(|i| {
                    (0..dim)
                        .map(|b| {
                            if k == 1 {
                                (min[b] + max[b]) / 2.0
                            } else {
                                min[b] + i as f64 * (max[b] - min[b]) / (k - 1) as f64
                            }
                        })
                        .collect()
                })
                .collect();
            Ok(centroids)
        }
        InitStrategy::KMeansPlusPlus => kmeanspp_init(cube, k, config.seed),
    }
}

fn kmeanspp_init(cube: &HyperCube, k: usize, seed: u64) -> Result<Vec<Vec<f64>>, KMeansError> {
    let dim = cube.bands();
    let n = cube.n_pixels();
    let spectrum = |p: usize| &cube.data()[p * dim..(p + 1) * dim];

    let mut distinct = std::collections::HashSet::new();
    for p in 0..n {
        distinct.insert(spectrum(p).iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        if distinct.len() >= k {
            break;
        }
    }
    if distinct.len() < k {
        return Err(KMeansError::InsufficientDistinctPixels {
            k,
            distinct: distinct.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(spectrum(rng.random_range(0..n)).to_vec());

    // min squared distance from each pixel to the chosen centroids
    let mut d2: Vec<f64> = (0..n).map(|p| dist_sq(spectrum(p), &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        // distinctness was checked above, so some pixel has positive weight
        let mut target = rng.random::<f64>() * total;
        let mut chosen = None;
        for (p, &w) in d2.iter().enumerate() {
            if w > 0.0 {
                chosen = Some(p);
                if target < w {
                    break;
                }
                target -= w;
            }
        }
        let p = chosen.expect("positive total weight guarantees a candidate");
        centroids.push(spectrum(p).to_vec());
        let newest = centroids.last().expect("just pushed");
        for (q, slot) in d2.iter_mut().enumerate() {
            let d = dist_sq(spectrum(q), newest);
            if d < *slot {
                *slot = d;
            }
        }
    }
    Ok(centroids)
}

/// Labels each pixel with the index of its nearest centroid by squared
/// Euclidean distance; ties go to the lowest index.
///
/// `pixels` is a flat row-major sequence of `dim`-length spectra.
pub fn assign(pixels: &[f64], dim: usize, centroids: &[Vec<f64>]) -> Result<Vec<u32>, KMeansError> {
    if centroids.is_empty() {
        return Err(KMeansError::NoCentroids);
    }
    for (index, c) in centroids.iter().enumerate() {
        if c.len() != dim {
            return Err(KMeansError::DimensionMismatch {
                index,
                expected: dim,
                got: c.len(),
            });
        }
    }
    assert!(
        dim > 0 && pixels.len().is_multiple_of(dim),
        "pixel buffer length {} is not a multiple of dim {dim}",
        pixels.len()
    );

    let n = pixels.len() / dim;
    let mut labels = Vec::with_capacity(n);
    for p in 0..n {
        let x = &pixels[p * dim..(p + 1) * dim];
        let mut best = 0u32;
        let mut best_d = dist_sq(x, &centroids[0]);
        for (j, c) in centroids.iter().enumerate().skip(1) {
            let d = dist_sq_bounded(x, c, best_d);
            if d < best_d {
                best_d = d;
                best = j as u32;
            }
        }
        labels.push(best);
    }
    Ok(labels)
}

/// Recomputes centroids as per-cluster means over `pixels`.
///
/// An empty cluster is relocated to the pixel farthest from its own cluster's
/// fresh mean (lowest pixel index on ties); that pixel is excluded from the
/// search for any further empty clusters in the same step, so distinct empty
/// clusters land on distinct pixels. Empty clusters are processed in
/// ascending index order.
pub fn update(pixels: &[f64], dim: usize, labels: &[u32], k: usize) -> Vec<Vec<f64>> {
    assert!(dim > 0 && pixels.len().is_multiple_of(dim));
    let n = pixels.len() / dim;
    assert_eq!(labels.len(), n, "one label per pixel");

    let mut sums = vec![vec![0.0f64; dim]; k];
    let mut counts = vec![0usize; k];
    for p in 0..n {
        let label = labels[p] as usize;
        assert!(label < k, "label {label} out of range for k = {k}");
        let x = &pixels[p * dim..(p + 1) * dim];
        for (s, &v) in sums[label].iter_mut().zip(x) {
            *s += v;
        }
        counts[label] += 1;
    }
    let mut centroids = sums;
    for j in 0..k {
        if counts[j] > 0 {
            for s in &mut centroids[j] {
                *s /= counts[j] as f64;
            }
        }
    }

    let empties: Vec<usize> = (0..k).filter(|&j| counts[j] == 0).collect();
    if !empties.is_empty() {
        let mut taken = vec![false; n];
        for j in empties {
            let mut far_p = None;
            let mut far_d = f64::NEG_INFINITY;
            for p in 0..n {
                if taken[p] {
                    continue;
                }
                let x = &pixels[p * dim..(p + 1) * dim];
                let d = dist_sq(x, &centroids[labels[p] as usize]);
                if d > far_d {
                    far_d = d;
                    far_p = Some(p);
                }
            }
            // when every pixel is taken (k exceeds the pixel count) the
            // remaining empty centroids stay at the zero vector
            let Some(p) = far_p else { break };
            taken[p] = true;
            centroids[j] = pixels[p * dim..(p + 1) * dim].to_vec();
        }
    }
    centroids
}

fn sse_of(pixels: &[f64], dim: usize, labels: &[u32], centroids: &[Vec<f64>]) -> f64 {
    let n = pixels.len() / dim;
    let mut sse = 0.0f64;
    for p in 0..n {
        let x = &pixels[p * dim..(p + 1) * dim];
        sse += dist_sq(x, &centroids[labels[p] as usize]);
    }
    sse
}

fn run_core(
    cube: &HyperCube,
    config: &KMeansConfig,
    mut trace: Option<&mut Vec<KMeansRound>>,
) -> Result<ClusterModel, KMeansError> {
    let dim = cube.bands();
    let pixels = cube.data();
    let mut centroids = init_centroids(cube, config)?;

    let mut labels: Vec<u32> = Vec::new();
    let mut iterations_run = 0;
    let mut converged = false;
    for _ in 0..config.max_iterations {
        let new_labels = assign(pixels, dim, &centroids)?;
        iterations_run += 1;
        let unchanged = new_labels == labels;
        labels = new_labels;
        centroids = update(pixels, dim, &labels, config.k);
        if let Some(rounds) = trace.as_deref_mut() {
            rounds.push(KMeansRound {
                labels: labels.clone(),
                centroids: centroids.clone(),
                sse: sse_of(pixels, dim, &labels, &centroids),
            });
        }
        if unchanged {
            converged = true;
            break;
        }
    }
    let sse = sse_of(pixels, dim, &labels, &centroids);
    Ok(ClusterModel {
        k: config.k,
        centroids,
        labels,
        rows: cube.rows(),
        cols: cube.cols(),
        iterations_run,
        sse,
        converged,
    })
}

/// Alternates assignment and update from the configured initialization until
/// an assignment pass changes no label (converged) or the iteration cap is
/// hit. `iterations_run` counts assignment passes; centroids are
/// post-final-update; `sse` reflects the returned labels and centroids.
pub fn run_kmeans(cube: &HyperCube, config: &KMeansConfig) -> Result<ClusterModel, KMeansError> {
    run_core(cube, config, None)
}

/// [`run_kmeans`] that also records every round's labels, centroids, and sse.
/// Intended for desk-scale verification; the trace grows with rounds × pixels.
pub fn run_kmeans_traced(
    cube: &HyperCube,
    config: &KMeansConfig,
) -> Result<(ClusterModel, Vec<KMeansRound>), KMeansError> {
    let mut rounds = Vec::new();
    let model = run_core(cube, config, Some(&mut rounds))?;
    Ok((model, rounds))
}

/// Plots every centroid spectrum as one polyline over the wavelength axis.
pub fn centroid_plot(model: &ClusterModel, wavelengths_nm: &[f64]) -> String {
    let series: Vec<Series> = model
        .centroids
        .iter()
        .enumerate()
        .map(|(i, c)| Series {
            label: format!("cluster {i}"),
            ys: c,
        })
        .collect();
    line_chart(
        "Centroid spectra",
        "wavelength (nm)",
        "reflectance",
        wavelengths_nm,
        &series,
    )
}

#[derive(Serialize)]
struct ModelExport<'a> {
    k: usize,
    centroids: &'a [Vec<f64>],
    iterations_run: usize,
    sse: f64,
    converged: bool,
}

/// Serializes the model (without the label map) as pretty JSON. Reals use
/// shortest-roundtrip decimal form, so the file is byte-stable across runs.
pub fn model_json(model: &ClusterModel) -> String {
    let export = ModelExport {
        k: model.k,
        centroids: &model.centroids,
        iterations_run: model.iterations_run,
        sse: model.sse,
        converged: model.converged,
    };
    let mut json = serde_json::to_string_pretty(&export).expect("model serializes");
    json.push('\n');
    json
}

pub const LABEL_MAP_MAGIC: &[u8; 8] = b"INKLBL\0\0";

/// Encodes the label map: a 16-byte header (8-byte magic, rows and cols as
/// 32-bit little-endian) followed by one byte per pixel, row-major.
pub fn encode_label_map(model: &ClusterModel) -> Result<Vec<u8>, KMeansError> {
    let mut bytes = Vec::with_capacity(16 + model.labels.len());
    bytes.extend_from_slice(LABEL_MAP_MAGIC);
    bytes.extend_from_slice(&(model.rows as u32).to_le_bytes());
    bytes.extend_from_slice(&(model.cols as u32).to_le_bytes());
    for (pixel, &label) in model.labels.iter().enumerate() {
        let byte = u8::try_from(label).map_err(|_| KMeansError::LabelTooLarge { pixel, label })?;
        bytes.push(byte);
    }
    Ok(bytes)
}

/// Decodes a label map produced by [`encode_label_map`].
pub fn decode_label_map(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>), KMeansError> {
    if bytes.len() < 16 {
        return Err(KMeansError::BadLabelMap(format!(
            "{} bytes is shorter than the 16-byte header",
            bytes.len()
        )));
    }
    if &bytes[..8] != LABEL_MAP_MAGIC {
        return Err(KMeansError::BadLabelMap("bad magic".to_string()));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes")) as usize;
    let expected = rows * cols;
    let payload = &bytes[16..];
    if payload.len() != expected {
        return Err(KMeansError::BadLabelMap(format!(
            "payload is {} bytes for a {rows} x {cols} map",
            payload.len()
        )));
    }
    Ok((rows, cols, payload.to_vec()))
}

/// Writes the encoded label map to a file.
pub fn write_label_map(model: &ClusterModel, path: &Path) -> Result<(), KMeansError> {
    let bytes = encode_label_map(model)?;
    std::fs::write(path, bytes).map_err(|source| KMeansError::Io {
        path: path.to_path_buf(),
        source,
    })
}
