//! Per-line mean spectral signatures and their CSV/SVG export.
//!
//! Every ink differs in how it reflects across the band axis; averaging the
//! ink pixels of one text line gives that line's spectral fingerprint.
//! Accumulation runs in fixed row-major order over double-width reals, so a
//! signature is a pure, bit-deterministic function of cube, mask, and region.

use thiserror::Error;

use crate::cube::HyperCube;
use crate::plot::{line_chart, Series};
use crate::preprocess::{BinaryMask, LineRegion};

#[derive(Debug, Error)]
pub enum SignatureError {
    #[error("line {line_id} (rows {row_start}..{row_end}) contains no ink pixels")]
    EmptyRegion {
        line_id: usize,
        row_start: usize,
        row_end: usize,
    },
    #[error("region rows {row_start}..{row_end} exceed cube rows {rows}")]
    RegionOutOfBounds {
        row_start: usize,
        row_end: usize,
        rows: usize,
    },
    #[error("mask is {mask_rows} x {mask_cols} but cube is {rows} x {cols}")]
    DimensionMismatch {
        mask_rows: usize,
        mask_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("signature for line {line_id} has {got} bands, expected {expected}")]
    LengthMismatch {
        line_id: usize,
        expected: usize,
        got: usize,
    },
    #[error("no signature with line id {0}")]
    UnknownLineId(usize),
}

/// Mean ink spectrum of one text line.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSignature {
    pub line_id: usize,
    pub mean_reflectance: Vec<f64>,
    /// Ink pixels averaged; always at least one.
    pub pixel_count: usize,
}

/// Averages the spectra of all ink pixels whose rows fall in `region`.
pub fn mean_signature(
    cube: &HyperCube,
    mask: &BinaryMask,
    region: &LineRegion,
) -> Result<SpectralSignature, SignatureError> {
    if mask.rows() != cube.rows() || mask.cols() != cube.cols() {
        return Err(SignatureError::DimensionMismatch {
            mask_rows: mask.rows(),
            mask_cols: mask.cols(),
            rows: cube.rows(),
            cols: cube.cols(),
        });
    }
    if region.row_end > cube.rows() || region.row_start >= region.row_end {
        return Err(SignatureError::RegionOutOfBounds {
            row_start: region.row_start,
            row_end: region.row_end,
            rows: cube.rows(),
        });
    }

    let bands = cube.bands();
    let mut sums = vec![0.0f64; bands];
    let mut pixel_count = 0usize;
    for r in region.row_start..region.row_end {
        for c in 0..cube.cols() {
            if mask.is_ink(r, c) {
                for (s, &v) in sums.iter_mut().zip(cube.pixel(r, c)) {
                    *s += v;
                }
                pixel_count += 1;
            }
        }
    }
    if pixel_count == 0 {
        return Err(SignatureError::EmptyRegion {
            line_id: region.line_id,
            row_start: region.row_start,
            row_end: region.row_end,
        });
    }
    for s in &mut sums {
        *s /= pixel_count as f64;
    }
    Ok(SpectralSignature {
        line_id: region.line_id,
        mean_reflectance: sums,
        pixel_count,
    })
}

/// Serializes signatures as CSV: header `wavelength_nm,line_1,...,line_n`,
/// one row per band. Values print in shortest-roundtrip decimal form, so
/// parsing the CSV back recovers the exact reals.
pub fn export_signatures(
    signatures: &[SpectralSignature],
    wavelengths_nm: &[f64],
) -> Result<String, SignatureError> {
    for sig in signatures {
        if sig.mean_reflectance.len() != wavelengths_nm.len() {
            return Err(SignatureError::LengthMismatch {
                line_id: sig.line_id,
                expected: wavelengths_nm.len(),
                got: sig.mean_reflectance.len(),
            });
        }
    }
    let mut csv = String::from("wavelength_nm");
    for sig in signatures {
        csv.push_str(&format!(",line_{}", sig.line_id));
    }
    csv.push('\n');
    for (b, &wl) in wavelengths_nm.iter().enumerate() {
        csv.push_str(&format!("{wl}"));
        for sig in signatures {
            csv.push_str(&format!(",{}", sig.mean_reflectance[b]));
        }
        csv.push('\n');
    }
    Ok(csv)
}

/// Plots the selected signatures as one polyline each over the wavelength
/// axis. Selection order fixes the drawing and legend order.
pub fn render_signature_plot(
    signatures: &[SpectralSignature],
    wavelengths_nm: &[f64],
    selection: &[usize],
) -> Result<String, SignatureError> {
    let mut series = Vec::with_capacity(selection.len());
    for &line_id in selection {
        let sig = signatures
            .iter()
            .find(|s| s.line_id == line_id)
            .ok_or(SignatureError::UnknownLineId(line_id))?;
        if sig.mean_reflectance.len() != wavelengths_nm.len() {
            return Err(SignatureError::LengthMismatch {
                line_id: sig.line_id,
                expected: wavelengths_nm.len(),
                got: sig.mean_reflectance.len(),
            });
        }
        series.push(Series {
            label: format!("line {line_id}"),
            ys: &sig.mean_reflectance,
        });
    }
    Ok(line_chart(
        "Mean spectral signatures",
        "wavelength (nm)",
        "mean reflectance",
        wavelengths_nm,
        &series,
    ))
}
