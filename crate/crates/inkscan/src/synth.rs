//! Synthetic hyperspectral documents with known ink ground truth.
//!
//! Real captures of handwritten pages are huge and carry no per-pixel truth,
//! so end-to-end checks run on generated documents instead: evenly spaced
//! text lines of pseudo-handwriting, one ink per line, over flat paper, with
//! optional printed rule lines. Ink spectra follow a Gaussian absorption
//! model, the simplest smooth family giving distinct dips at distinct
//! wavelengths. Everything is deterministic under the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::HyperCube;
use crate::preprocess::LineRegion;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("rows, cols, and bands must all be positive")]
    EmptyDimensions,
    #[error("line_to_ink has {got} entries for {n_lines} lines")]
    LineMapLengthMismatch { n_lines: usize, got: usize },
    #[error("line {line} references ink {ink} but only {n_inks} inks are defined")]
    InkIndexOutOfRange {
        line: usize,
        ink: usize,
        n_inks: usize,
    },
    #[error("ink depth must lie in (0, 1], got {0}")]
    BadDepth(f64),
    #[error("ink width must be positive, got {0}")]
    BadWidth(f64),
    #[error("noise_sigma must be non-negative and finite, got {0}")]
    BadNoise(f64),
    #[error("wavelength range {0}..{1} must be finite and increasing")]
    BadWavelengthRange(f64, f64),
    #[error("{rows} rows cannot fit {n_lines} text lines (each line needs at least {MIN_SLOT_ROWS} rows)")]
    LayoutOverflow { rows: usize, n_lines: usize },
    #[error("{cols} columns are too narrow for strokes (need at least {needed})")]
    TooNarrow { cols: usize, needed: usize },
    #[error("ground-truth map is malformed: {0}")]
    BadGroundTruthMap(String),
}

/// Gaussian absorption parameters of one ink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InkParams {
    pub center_nm: f64,
    pub width_nm: f64,
    /// Fraction of paper reflectance absorbed at the center, in (0, 1].
    pub depth: f64,
}

/// Full recipe for one synthetic document. Every field has a default, so a
/// JSON spec file may set only what it changes; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub rows: usize,
    pub cols: usize,
    pub bands: usize,
    pub wavelength_range_nm: (f64, f64),
    pub n_lines: usize,
    /// Ink index written on each line, top to bottom.
    pub line_to_ink: Vec<usize>,
    pub ink_params: Vec<InkParams>,
    pub paper_reflectance: f64,
    pub rule_reflectance: f64,
    pub noise_sigma: f64,
    pub rule_lines: bool,
    pub seed: u64,
}

impl Default for SynthSpec {
    /// The dataset-shaped document: 512 x 650 x 149, 478 to 901 nm, twelve
    /// lines written with five inks grouped as on the reference page.
    fn default() -> Self {
        SynthSpec {
            rows: 512,
            cols: 650,
            bands: 149,
            wavelength_range_nm: (478.0, 901.0),
            n_lines: 12,
            line_to_ink: vec![0, 0, 1, 1, 2, 2, 3, 3, 3, 3, 4, 4],
            ink_params: vec![
                InkParams { center_nm: 550.0, width_nm: 40.0, depth: 0.75 },
                InkParams { center_nm: 580.0, width_nm: 35.0, depth: 0.60 },
                InkParams { center_nm: 610.0, width_nm: 45.0, depth: 0.50 },
                InkParams { center_nm: 540.0, width_nm: 60.0, depth: 0.40 },
                InkParams { center_nm: 640.0, width_nm: 50.0, depth: 0.75 },
            ],
            paper_reflectance: 0.9,
            rule_reflectance: 0.55,
            noise_sigma: 0.0,
            rule_lines: true,
            seed: 0,
        }
    }
}

/// Ground-truth pixel label for paper background.
pub const GT_BACKGROUND: i8 = -1;
/// Ground-truth pixel label for printed rule lines.
pub const GT_RULE_LINE: i8 = -2;

/// Per-pixel provenance of a generated document.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub rows: usize,
    pub cols: usize,
    /// Row-major: ink index for ink pixels, [`GT_BACKGROUND`], or
    /// [`GT_RULE_LINE`].
    pub ink_label: Vec<i8>,
    /// True row extent of each text line, 1-based ids, top to bottom.
    pub line_regions: Vec<LineRegion>,
}

/// Rows each line slot must span so that strokes, inter-line gaps, and the
/// rule line all fit without merging under the default segmentation margins.
pub const MIN_SLOT_ROWS: usize = 16;

/// Evaluates the Gaussian absorption model over a wavelength axis:
/// `paper_reflectance * (1 - depth * exp(-(w - center)^2 / (2 width^2)))`,
/// clamped to [0, 1].
pub fn ink_spectrum(params: &InkParams, paper_reflectance: f64, wavelengths_nm: &[f64]) -> Vec<f64> {
    wavelengths_nm
        .iter()
        .map(|&w| {
            let d = (w - params.center_nm) / params.width_nm;
            let r = paper_reflectance * (1.0 - params.depth * (-0.5 * d * d).exp());
            r.clamp(0.0, 1.0)
        })
        .collect()
}

/// Linearly spaced wavelength axis for a spec.
pub fn wavelength_axis(spec: &SynthSpec) -> Vec<f64> {
    let (lo, hi) = spec.wavelength_range_nm;
    if spec.bands == 1 {
        return vec![lo];
    }
    (0..spec.bands)
        .map(|b| lo + (hi - lo) * b as f64 / (spec.bands - 1) as f64)
        .collect()
}

fn validate(spec: &SynthSpec) -> Result<(), SynthError> {
    if spec.rows == 0 || spec.cols == 0 || spec.bands == 0 || spec.n_lines == 0 {
        return Err(SynthError::EmptyDimensions);
    }
    if spec.line_to_ink.len() != spec.n_lines {
        return Err(SynthError::LineMapLengthMismatch {
            n_lines: spec.n_lines,
            got: spec.line_to_ink.len(),
        });
    }
    for (line, &ink) in spec.line_to_ink.iter().enumerate() {
        if ink >= spec.ink_params.len() {
            return Err(SynthError::InkIndexOutOfRange {
                line: line + 1,
                ink,
                n_inks: spec.ink_params.len(),
            });
        }
    }
    for p in &spec.ink_params {
        if !(p.depth > 0.0 && p.depth <= 1.0) {
            return Err(SynthError::BadDepth(p.depth));
        }
        // NaN fails the comparison and is rejected along with zero and negatives
        if p.width_nm.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(SynthError::BadWidth(p.width_nm));
        }
    }
    if !(spec.noise_sigma >= 0.0 && spec.noise_sigma.is_finite()) {
        return Err(SynthError::BadNoise(spec.noise_sigma));
    }
    let (lo, hi) = spec.wavelength_range_nm;
    if !(lo.is_finite() && hi.is_finite() && (lo < hi || (lo == hi && spec.bands == 1))) {
        return Err(SynthError::BadWavelengthRange(lo, hi));
    }
    let slot_h = spec.rows / spec.n_lines;
    if slot_h < MIN_SLOT_ROWS {
        return Err(SynthError::LayoutOverflow {
            rows: spec.rows,
            n_lines: spec.n_lines,
        });
    }
    // the zigzag pass needs one full triangle period to touch every band row
    let band_h = slot_h / 2;
    let margin = spec.cols / 16;
    let width = spec.cols - 2 * margin;
    let needed = 2 * band_h.max(2);
    if width < needed {
        return Err(SynthError::TooNarrow {
            cols: spec.cols,
            needed: needed + 2 * margin,
        });
    }
    Ok(())
}

/// Generates the document cube and its per-pixel ground truth.
///
/// Line `i` occupies the slot of `rows / n_lines` rows starting at
/// `i * slot_h`; its text band covers `band_h = slot_h / 2` rows starting at
/// offset `slot_h / 8`, and the optional rule line sits 3 rows under the
/// band. A deterministic zigzag stroke touches every band row (so the line's
/// true extent equals its projection extent) and seeded random walks add
/// irregular handwriting-like density. Per-band Gaussian noise is added only
/// when `noise_sigma > 0`; values are clamped to [0, 1].
pub fn generate(spec: &SynthSpec) -> Result<(HyperCube, GroundTruth), SynthError> {
    validate(spec)?;
    let (rows, cols, bands) = (spec.rows, spec.cols, spec.bands);
    let slot_h = rows / spec.n_lines;
    let band_h = slot_h / 2;
    let margin = cols / 16;
    let (left, right) = (margin, cols - margin);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ink_label = vec![GT_BACKGROUND; rows * cols];
    let mut line_regions = Vec::with_capacity(spec.n_lines);

    for line in 0..spec.n_lines {
        let ink = spec.line_to_ink[line] as i8;
        let band_top = line * slot_h + slot_h / 8;
        line_regions.push(LineRegion {
            line_id: line + 1,
            row_start: band_top,
            row_end: band_top + band_h,
        });

        // connected zigzag: a triangle wave over the band height, two pixels
        // thick, touching every row of the band at least once
        let period = 2 * (band_h - 1);
        for c in left..right {
            let phase = (c - left) % period;
            let off = if phase < band_h { phase } else { period - phase };
            ink_label[(band_top + off) * cols + c] = ink;
            let off2 = (off + 1).min(band_h - 1);
            ink_label[(band_top + off2) * cols + c] = ink;
        }

        // seeded random-walk marks for irregular density
        let n_walks = (right - left) / 12;
        for _ in 0..n_walks {
            let mut r = rng.random_range(0..band_h);
            let start = rng.random_range(left..right);
            for c in (start..right).take(30) {
                ink_label[(band_top + r) * cols + c] = ink;
                let r2 = (r + 1).min(band_h - 1);
                ink_label[(band_top + r2) * cols + c] = ink;
                match rng.random_range(0..3u8) {
                    0 if r > 0 => r -= 1,
                    1 if r + 1 < band_h => r += 1,
                    _ => {}
                }
            }
        }

        if spec.rule_lines {
            let rule_row = band_top + band_h + 3;
            for c in 0..cols {
                ink_label[rule_row * cols + c] = GT_RULE_LINE;
            }
        }
    }

    let wavelengths = wavelength_axis(spec);
    let ink_spectra: Vec<Vec<f64>> = spec
        .ink_params
        .iter()
        .map(|p| ink_spectrum(p, spec.paper_reflectance, &wavelengths))
        .collect();
    let paper = vec![spec.paper_reflectance.clamp(0.0, 1.0); bands];
    let rule = vec![spec.rule_reflectance.clamp(0.0, 1.0); bands];

    let noise = if spec.noise_sigma > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma).expect("validated sigma"))
    } else {
        None
    };

    let mut data = Vec::with_capacity(rows * cols * bands);
    for &label in &ink_label {
        let base: &[f64] = match label {
            GT_BACKGROUND => &paper,
            GT_RULE_LINE => &rule,
            ink => &ink_spectra[ink as usize],
        };
        match &noise {
            None => data.extend_from_slice(base),
            Some(normal) => {
                for &v in base {
                    data.push((v + normal.sample(&mut rng)).clamp(0.0, 1.0));
                }
            }
        }
    }

    let cube = HyperCube::new(rows, cols, bands, Some(wavelengths), data)
        .expect("generated data matches its own dimensions");
    let truth = GroundTruth {
        rows,
        cols,
        ink_label,
        line_regions,
    };
    Ok((cube, truth))
}

pub const GT_MAP_MAGIC: &[u8; 8] = b"INKGT\0\0\0";

/// Encodes the ground-truth label map in the label-map binary layout:
/// 16-byte header (8-byte magic, rows and cols as 32-bit little-endian),
/// then one signed byte per pixel.
pub fn encode_gt_map(truth: &GroundTruth) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(16 + truth.ink_label.len());
    bytes.extend_from_slice(GT_MAP_MAGIC);
    bytes.extend_from_slice(&(truth.rows as u32).to_le_bytes());
    bytes.extend_from_slice(&(truth.cols as u32).to_le_bytes());
    bytes.extend(truth.ink_label.iter().map(|&v| v as u8));
    bytes
}

/// Decodes a map produced by [`encode_gt_map`].
pub fn decode_gt_map(bytes: &[u8]) -> Result<(usize, usize, Vec<i8>), SynthError> {
    if bytes.len() < 16 {
        return Err(SynthError::BadGroundTruthMap(format!(
            "{} bytes is shorter than the 16-byte header",
            bytes.len()
        )));
    }
    if &bytes[..8] != GT_MAP_MAGIC {
        return Err(SynthError::BadGroundTruthMap("bad magic".to_string()));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes")) as usize;
    let payload = &bytes[16..];
    if payload.len() != rows * cols {
        return Err(SynthError::BadGroundTruthMap(format!(
            "payload is {} bytes for a {rows} x {cols} map",
            payload.len()
        )));
    }
    Ok((rows, cols, payload.iter().map(|&b| b as i8).collect()))
}

#[derive(Serialize)]
struct GroundTruthExport<'a> {
    line_to_ink: &'a [usize],
    line_regions: &'a [LineRegion],
}

/// JSON form of the ground truth: the line-to-ink map and the line regions.
pub fn ground_truth_json(spec: &SynthSpec, truth: &GroundTruth) -> String {
    let export = GroundTruthExport {
        line_to_ink: &spec.line_to_ink,
        line_regions: &truth.line_regions,
    };
    let mut json = serde_json::to_string_pretty(&export).expect("ground truth serializes");
    json.push('\n');
    json
}
