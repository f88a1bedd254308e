//! Cropping, Otsu thresholding, text line segmentation, and background
//! suppression.
//!
//! The goal of this stage is to separate ink from paper before clustering.
//! A single band is binarized against an automatically chosen threshold; the
//! resulting mask drives both the horizontal-projection line segmentation and
//! the suppression of background spectra, so that paper pixels collapse into
//! one flat cluster downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{CubeError, GrayImage, HyperCube};

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("empty crop rectangle")]
    EmptyRect,
    #[error("crop rectangle (rows {top}..{}, cols {left}..{}) exceeds cube extent {rows} x {cols}", top + height, left + width)]
    RectOutOfBounds {
        top: usize,
        left: usize,
        height: usize,
        width: usize,
        rows: usize,
        cols: usize,
    },
    #[error("mask is {mask_rows} x {mask_cols} but image is {rows} x {cols}")]
    DimensionMismatch {
        mask_rows: usize,
        mask_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("mask bit count {got} does not match {rows} x {cols}")]
    MaskLengthMismatch { rows: usize, cols: usize, got: usize },
    #[error("histogram needs at least one bin")]
    NoBins,
    #[error("image is constant; no threshold separates it")]
    DegenerateImage,
    #[error("mask contains no ink pixels")]
    NoLinesFound,
    #[error("suppression fill value must be finite, got {0}")]
    NonFiniteFill(f64),
    #[error(transparent)]
    Cube(#[from] CubeError),
}

/// Axis-aligned crop region; half-open extents from a top-left origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn new(top: usize, left: usize, height: usize, width: usize) -> Self {
        Rect {
            top,
            left,
            height,
            width,
        }
    }

    /// The full extent of a cube, the identity crop.
    pub fn full(cube: &HyperCube) -> Self {
        Rect::new(0, 0, cube.rows(), cube.cols())
    }
}

/// Per-pixel ink mask over an image grid; `true` marks ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    ink: Vec<bool>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, ink: Vec<bool>) -> Result<Self, PreprocessError> {
        if ink.len() != rows * cols {
            return Err(PreprocessError::MaskLengthMismatch {
                rows,
                cols,
                got: ink.len(),
            });
        }
        Ok(BinaryMask { rows, cols, ink })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_ink(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "mask index out of range");
        self.ink[row * self.cols + col]
    }

    /// Row-major ink flags.
    pub fn ink(&self) -> &[bool] {
        &self.ink
    }

    pub fn count_ink(&self) -> usize {
        self.ink.iter().filter(|&&b| b).count()
    }

    /// Ink pixel count per row, the horizontal projection profile.
    pub fn row_profile(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| {
                self.ink[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .filter(|&&b| b)
                    .count()
            })
            .collect()
    }
}

/// Equal-width intensity histogram.
///
/// `bin_edges` has one more entry than `counts`; bin `i` covers
/// `[bin_edges[i], bin_edges[i+1])` with the final bin closed at the top.
/// A constant image has no usable range; the histogram then carries the
/// single bin `[v, v+1]` holding every pixel and sets `degenerate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub degenerate: bool,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Center value of bin `i`.
    pub fn bin_center(&self, i: usize) -> f64 {
        (self.bin_edges[i] + self.bin_edges[i + 1]) / 2.0
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One detected text line: a half-open row range within the (cropped) image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRegion {
    /// 1-based line number, counted top to bottom.
    pub line_id: usize,
    pub row_start: usize,
    pub row_end: usize,
}

impl LineRegion {
    pub fn height(&self) -> usize {
        self.row_end - self.row_start
    }

    pub fn contains_row(&self, row: usize) -> bool {
        (self.row_start..self.row_end).contains(&row)
    }
}

/// Extracts the sub-cube covering `rect`, preserving every band and the
/// wavelength axis.
pub fn crop(cube: &HyperCube, rect: Rect) -> Result<HyperCube, PreprocessError> {
    if rect.height == 0 || rect.width == 0 {
        return Err(PreprocessError::EmptyRect);
    }
    if rect.top + rect.height > cube.rows() || rect.left + rect.width > cube.cols() {
        return Err(PreprocessError::RectOutOfBounds {
            top: rect.top,
            left: rect.left,
            height: rect.height,
            width: rect.width,
            rows: cube.rows(),
            cols: cube.cols(),
        });
    }
    let bands = cube.bands();
    let mut data = Vec::with_capacity(rect.height * rect.width * bands);
    for r in rect.top..rect.top + rect.height {
        for c in rect.left..rect.left + rect.width {
            data.extend_from_slice(cube.pixel(r, c));
        }
    }
    Ok(HyperCube::new(
        rect.height,
        rect.width,
        bands,
        Some(cube.wavelengths_nm().to_vec()),
        data,
    )?)
}

/// Builds an `n_bins` equal-width histogram over the image's own min..max
/// range. The maximum value is folded into the last bin.
pub fn histogram(image: &GrayImage, n_bins: usize) -> Result<Histogram, PreprocessError> {
    if n_bins == 0 {
        return Err(PreprocessError::NoBins);
    }
    let (min, max) = image.min_max();
    if min == max {
        return Ok(Histogram {
            bin_edges: vec![min, min + 1.0],
            counts: vec![image.values().len() as u64],
            degenerate: true,
        });
    }
    let mut bin_edges: Vec<f64> = (0..=n_bins)
        .map(|i| min + (max - min) * i as f64 / n_bins as f64)
        .collect();
    bin_edges[n_bins] = max;
    let mut counts = vec![0u64; n_bins];
    let scale = n_bins as f64 / (max - min);
    for &v in image.values() {
        let bin = (((v - min) * scale) as usize).min(n_bins - 1);
        counts[bin] += 1;
    }
    Ok(Histogram {
        bin_edges,
        counts,
        degenerate: false,
    })
}

/// Otsu's threshold: the internal bin edge of the `n_bins` histogram that
/// maximizes the between-class variance `w0 * w1 * (mu0 - mu1)^2`, with
/// class means taken over bin centers and pixels strictly below the edge
/// forming class 0. Ties resolve to the lowest edge.
///
/// Per-candidate sums run over ascending bin index, so the selected edge is
/// reproducible bit-for-bit regardless of how callers batch images.
pub fn otsu_threshold(image: &GrayImage, n_bins: usize) -> Result<f64, PreprocessError> {
    let hist = histogram(image, n_bins)?;
    if hist.degenerate {
        return Err(PreprocessError::DegenerateImage);
    }
    let total = hist.total() as f64;
    let mut best_edge = 1;
    let mut best_var = f64::NEG_INFINITY;
    for i in 1..hist.n_bins() {
        let mut count0: u64 = 0;
        let mut sum0 = 0.0;
        for j in 0..i {
            count0 += hist.counts[j];
            sum0 += hist.bin_center(j) * hist.counts[j] as f64;
        }
        let mut count1: u64 = 0;
        let mut sum1 = 0.0;
        for j in i..hist.n_bins() {
            count1 += hist.counts[j];
            sum1 += hist.bin_center(j) * hist.counts[j] as f64;
        }
        if count0 == 0 || count1 == 0 {
            continue;
        }
        let w0 = count0 as f64 / total;
        let w1 = count1 as f64 / total;
        let mu0 = sum0 / count0 as f64;
        let mu1 = sum1 / count1 as f64;
        let var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if var > best_var {
            best_var = var;
            best_edge = i;
        }
    }
    Ok(hist.bin_edges[best_edge])
}

/// Classifies pixels against a threshold. With `ink_is_dark`, values strictly
/// below the threshold are ink; otherwise values strictly above are. A value
/// exactly at the threshold is background under both polarities.
pub fn binarize(image: &GrayImage, threshold: f64, ink_is_dark: bool) -> BinaryMask {
    let ink = image
        .values()
        .iter()
        .map(|&v| if ink_is_dark { v < threshold } else { v > threshold })
        .collect();
    BinaryMask {
        rows: image.rows(),
        cols: image.cols(),
        ink,
    }
}

/// Extracts text lines from an ink mask by horizontal projection.
///
/// Rows containing any ink form runs; gaps shorter than `min_gap_rows` are
/// bridged (ascenders and descenders often split a line), then runs shorter
/// than `min_line_rows` are discarded as specks or printed rule lines.
/// A mask with no ink at all is an error; a mask whose every run is too
/// short yields an empty list.
pub fn segment_lines(
    mask: &BinaryMask,
    min_gap_rows: usize,
    min_line_rows: usize,
) -> Result<Vec<LineRegion>, PreprocessError> {
    if mask.count_ink() == 0 {
        return Err(PreprocessError::NoLinesFound);
    }
    let profile = mask.row_profile();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start: Option<usize> = None;
    for (r, &count) in profile.iter().enumerate() {
        match (start, count > 0) {
            (None, true) => start = Some(r),
            (Some(s), false) => {
                runs.push((s, r));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, profile.len()));
    }

    let mut merged: Vec<(usize, usize)> = Vec::new();
    for run in runs {
        match merged.last_mut() {
            Some(last) if run.0 - last.1 < min_gap_rows => last.1 = run.1,
            _ => merged.push(run),
        }
    }

    Ok(merged
        .into_iter()
        .filter(|&(start, end)| end - start >= min_line_rows)
        .enumerate()
        .map(|(i, (row_start, row_end))| LineRegion {
            line_id: i + 1,
            row_start,
            row_end,
        })
        .collect())
}

/// Replaces the spectrum of every non-ink pixel with the constant `fill`,
/// leaving ink pixels untouched. All background pixels become identical, so
/// a subsequent clustering collapses them into a single flat cluster.
pub fn suppress_background(
    cube: &HyperCube,
    mask: &BinaryMask,
    fill: f64,
) -> Result<HyperCube, PreprocessError> {
    if mask.rows() != cube.rows() || mask.cols() != cube.cols() {
        return Err(PreprocessError::DimensionMismatch {
            mask_rows: mask.rows(),
            mask_cols: mask.cols(),
            rows: cube.rows(),
            cols: cube.cols(),
        });
    }
    if !fill.is_finite() {
        return Err(PreprocessError::NonFiniteFill(fill));
    }
    let bands = cube.bands();
    let mut data = cube.data().to_vec();
    for (p, &is_ink) in mask.ink().iter().enumerate() {
        if !is_ink {
            data[p * bands..(p + 1) * bands].fill(fill);
        }
    }
    Ok(HyperCube::new(
        cube.rows(),
        cube.cols(),
        bands,
        Some(cube.wavelengths_nm().to_vec()),
        data,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(rows: usize, cols: usize, values: Vec<f64>) -> GrayImage {
        GrayImage::new(rows, cols, values).unwrap()
    }

    #[test]
    fn identity_crop_equals_input() {
        let data: Vec<f64> = (0..3 * 4 * 2).map(|i| i as f64).collect();
        let cube = HyperCube::new(3, 4, 2, None, data).unwrap();
        assert_eq!(crop(&cube, Rect::full(&cube)).unwrap(), cube);
    }

    #[test]
    fn crop_shifts_pixel_origin() {
        let data: Vec<f64> = (0..4 * 4 * 2).map(|i| i as f64).collect();
        let cube = HyperCube::new(4, 4, 2, None, data).unwrap();
        let sub = crop(&cube, Rect::new(1, 1, 2, 2)).unwrap();
        assert_eq!((sub.rows(), sub.cols(), sub.bands()), (2, 2, 2));
        assert_eq!(sub.pixel(0, 0), cube.pixel(1, 1));
        assert_eq!(sub.pixel(1, 1), cube.pixel(2, 2));
        assert_eq!(sub.wavelengths_nm(), cube.wavelengths_nm());
    }

    #[test]
    fn crop_bounds_are_enforced() {
        let cube = HyperCube::new(3, 4, 1, None, vec![0.0; 12]).unwrap();
        assert!(matches!(
            crop(&cube, Rect::new(2, 0, 2, 1)),
            Err(PreprocessError::RectOutOfBounds { .. })
        ));
        assert!(matches!(
            crop(&cube, Rect::new(0, 3, 1, 2)),
            Err(PreprocessError::RectOutOfBounds { .. })
        ));
        assert!(matches!(
            crop(&cube, Rect::new(0, 0, 0, 2)),
            Err(PreprocessError::EmptyRect)
        ));
    }

    #[test]
    fn histogram_counts_every_pixel_once() {
        let img = gray(1, 4, vec![0.0, 0.0, 1.0, 1.0]);
        let h = histogram(&img, 2).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.bin_edges, vec![0.0, 0.5, 1.0]);
        assert!(!h.degenerate);
    }

    #[test]
    fn histogram_max_value_lands_in_last_bin() {
        let img = gray(1, 2, vec![0.0, 1.0]);
        let h = histogram(&img, 256).unwrap();
        assert_eq!(h.counts[0], 1);
        assert_eq!(h.counts[255], 1);
        assert_eq!(h.total(), 2);
    }

    #[test]
    fn histogram_matches_brute_force_tally() {
        // known multiset over a fixed range, tallied directly against edges
        let values = vec![0.0, 0.05, 0.1, 0.5, 0.55, 0.9, 0.95, 1.0];
        let img = gray(2, 4, values.clone());
        let h = histogram(&img, 10).unwrap();
        for (i, &count) in h.counts.iter().enumerate() {
            let lo = h.bin_edges[i];
            let hi = h.bin_edges[i + 1];
            let expected = values
                .iter()
                .filter(|&&v| {
                    if i + 1 == h.n_bins() {
                        v >= lo && v <= hi
                    } else {
                        v >= lo && v < hi
                    }
                })
                .count() as u64;
            assert_eq!(count, expected, "bin {i}");
        }
    }

    #[test]
    fn constant_image_yields_degenerate_histogram() {
        let img = gray(2, 2, vec![0.7; 4]);
        let h = histogram(&img, 256).unwrap();
        assert!(h.degenerate);
        assert_eq!(h.counts, vec![4]);
        assert_eq!(h.bin_edges, vec![0.7, 1.7]);
    }

    #[test]
    fn otsu_rejects_constant_image() {
        let img = gray(2, 2, vec![0.7; 4]);
        assert!(matches!(
            otsu_threshold(&img, 256),
            Err(PreprocessError::DegenerateImage)
        ));
    }

    #[test]
    fn otsu_separates_two_well_separated_modes() {
        let mut values = vec![0.1; 100];
        values.extend(vec![0.9; 100]);
        let img = gray(10, 20, values);
        let t = otsu_threshold(&img, 256).unwrap();
        assert!(t > 0.1 && t < 0.9, "threshold {t} must split the modes");
        let mask = binarize(&img, t, true);
        assert_eq!(mask.count_ink(), 100);
    }

    #[test]
    fn otsu_tie_resolves_to_lowest_edge() {
        // four pixels at the extremes of a 4-bin histogram: edges 1, 2, 3 all
        // separate the two spikes with equal variance, so edge 1 must win
        let img = gray(1, 4, vec![0.0, 0.0, 4.0, 4.0]);
        let t = otsu_threshold(&img, 4).unwrap();
        assert_eq!(t, 1.0);
    }

    #[test]
    fn binarize_polarity_and_boundary() {
        let img = gray(1, 3, vec![0.2, 0.5, 0.8]);
        let dark = binarize(&img, 0.5, true);
        assert_eq!(dark.ink(), &[true, false, false]);
        let bright = binarize(&img, 0.5, false);
        assert_eq!(bright.ink(), &[false, false, true]);
    }

    fn mask_from_rows(rows_with_ink: &[usize], rows: usize, cols: usize) -> BinaryMask {
        let mut ink = vec![false; rows * cols];
        for &r in rows_with_ink {
            ink[r * cols] = true;
        }
        BinaryMask::new(rows, cols, ink).unwrap()
    }

    #[test]
    fn segment_lines_finds_separated_runs() {
        // ink rows 2..=4 and 10..=13, min_gap 2, min_line 2
        let mask = mask_from_rows(&[2, 3, 4, 10, 11, 12, 13], 20, 5);
        let lines = segment_lines(&mask, 2, 2).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            (lines[0].line_id, lines[0].row_start, lines[0].row_end),
            (1, 2, 5)
        );
        assert_eq!(
            (lines[1].line_id, lines[1].row_start, lines[1].row_end),
            (2, 10, 14)
        );
    }

    #[test]
    fn segment_lines_bridges_small_gaps() {
        // the 2-row gap (7, 8) is below min_gap_rows = 3, so one line results
        let mask = mask_from_rows(&[2, 3, 4, 5, 6, 9, 10, 11], 20, 5);
        let lines = segment_lines(&mask, 3, 5).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!((lines[0].row_start, lines[0].row_end), (2, 12));
    }

    #[test]
    fn segment_lines_discards_short_runs() {
        // a 1-row speck (like a printed rule) vanishes
        let mask = mask_from_rows(&[2, 3, 4, 5, 6, 15], 20, 5);
        let lines = segment_lines(&mask, 3, 5).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!((lines[0].row_start, lines[0].row_end), (2, 7));
    }

    #[test]
    fn segment_lines_requires_some_ink() {
        let mask = BinaryMask::new(5, 5, vec![false; 25]).unwrap();
        assert!(matches!(
            segment_lines(&mask, 3, 5),
            Err(PreprocessError::NoLinesFound)
        ));
    }

    #[test]
    fn segment_lines_regions_are_disjoint_and_sorted() {
        let mask = mask_from_rows(&[0, 1, 2, 3, 4, 8, 9, 10, 11, 12, 16, 17, 18, 19], 20, 3);
        let lines = segment_lines(&mask, 2, 3).unwrap();
        for pair in lines.windows(2) {
            assert!(pair[0].row_end <= pair[1].row_start);
            assert!(pair[0].line_id < pair[1].line_id);
        }
    }

    #[test]
    fn suppress_background_flattens_non_ink_only() {
        let data: Vec<f64> = (0..2 * 2 * 3).map(|i| i as f64 / 10.0).collect();
        let cube = HyperCube::new(2, 2, 3, None, data).unwrap();
        let mask = BinaryMask::new(2, 2, vec![true, false, false, true]).unwrap();
        let out = suppress_background(&cube, &mask, 1.0).unwrap();
        assert_eq!(out.pixel(0, 0), cube.pixel(0, 0));
        assert_eq!(out.pixel(1, 1), cube.pixel(1, 1));
        assert_eq!(out.pixel(0, 1), &[1.0, 1.0, 1.0]);
        assert_eq!(out.pixel(1, 0), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn suppress_background_is_idempotent() {
        let data: Vec<f64> = (0..3 * 3 * 2).map(|i| (i as f64).sin().abs()).collect();
        let cube = HyperCube::new(3, 3, 2, None, data).unwrap();
        let ink: Vec<bool> = (0..9).map(|i| i % 2 == 0).collect();
        let mask = BinaryMask::new(3, 3, ink).unwrap();
        let once = suppress_background(&cube, &mask, 0.0).unwrap();
        let twice = suppress_background(&once, &mask, 0.0).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn suppress_background_rejects_shape_mismatch() {
        let cube = HyperCube::new(2, 2, 1, None, vec![0.0; 4]).unwrap();
        let mask = BinaryMask::new(1, 4, vec![false; 4]).unwrap();
        assert!(matches!(
            suppress_background(&cube, &mask, 0.0),
            Err(PreprocessError::DimensionMismatch { .. })
        ));
    }
}
