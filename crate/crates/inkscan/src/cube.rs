//! In-memory hyperspectral cube and single-band image types.
//!
//! A [`HyperCube`] stores reflectance values in pixel-interleaved order:
//! the full band vector of pixel (0,0) comes first, then (0,1), and so on
//! row-major. Every downstream consumer (masking, signature averaging,
//! clustering distances) walks whole spectra, so this layout keeps the hot
//! loops contiguous.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("cube dimensions must be positive, got {rows} x {cols} x {bands}")]
    EmptyDimensions {
        rows: usize,
        cols: usize,
        bands: usize,
    },
    #[error("data has {got} values but {rows} x {cols} x {bands} requires {expected}")]
    DataLengthMismatch {
        rows: usize,
        cols: usize,
        bands: usize,
        expected: usize,
        got: usize,
    },
    #[error("wavelength list has {got} entries but the cube has {bands} bands")]
    WavelengthCountMismatch { bands: usize, got: usize },
    #[error("non-finite value at row {row}, col {col}, band {band}")]
    NonFiniteValue {
        row: usize,
        col: usize,
        band: usize,
    },
    #[error("band index {index} out of range, cube has {bands} bands")]
    BandOutOfRange { index: usize, bands: usize },
    #[error("image dimensions must be positive, got {rows} x {cols}")]
    EmptyImage { rows: usize, cols: usize },
    #[error("image data has {got} values but {rows} x {cols} requires {expected}")]
    ImageLengthMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
}

/// A rows x cols x bands reflectance cube with a wavelength axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperCube {
    rows: usize,
    cols: usize,
    bands: usize,
    wavelengths_nm: Vec<f64>,
    data: Vec<f64>,
}

impl HyperCube {
    /// Builds a cube from pixel-interleaved data, validating dimensions,
    /// wavelength count, and finiteness of every value.
    ///
    /// When `wavelengths_nm` is `None` the axis is synthesized as band
    /// indices `0..bands`, so plots fall back to band numbers.
    pub fn new(
        rows: usize,
        cols: usize,
        bands: usize,
        wavelengths_nm: Option<Vec<f64>>,
        data: Vec<f64>,
    ) -> Result<Self, CubeError> {
        if rows == 0 || cols == 0 || bands == 0 {
            return Err(CubeError::EmptyDimensions { rows, cols, bands });
        }
        let expected = rows * cols * bands;
        if data.len() != expected {
            return Err(CubeError::DataLengthMismatch {
                rows,
                cols,
                bands,
                expected,
                got: data.len(),
            });
        }
        let wavelengths_nm = match wavelengths_nm {
            Some(w) => {
                if w.len() != bands {
                    return Err(CubeError::WavelengthCountMismatch {
                        bands,
                        got: w.len(),
                    });
                }
                w
            }
            None => (0..bands).map(|b| b as f64).collect(),
        };
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            let pixel = i / bands;
            return Err(CubeError::NonFiniteValue {
                row: pixel / cols,
                col: pixel % cols,
                band: i % bands,
            });
        }
        Ok(Self {
            rows,
            cols,
            bands,
            wavelengths_nm,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn n_pixels(&self) -> usize {
        self.rows * self.cols
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    /// Pixel-interleaved backing data.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// The band vector of pixel (`row`, `col`). Panics if out of range.
    pub fn pixel(&self, row: usize, col: usize) -> &[f64] {
        assert!(row < self.rows && col < self.cols, "pixel out of range");
        let start = (row * self.cols + col) * self.bands;
        &self.data[start..start + self.bands]
    }

    /// A single reflectance value. Panics if out of range.
    pub fn value(&self, row: usize, col: usize, band: usize) -> f64 {
        assert!(band < self.bands, "band out of range");
        self.pixel(row, col)[band]
    }

    /// Extracts one band as a grayscale image.
    pub fn band(&self, index: usize) -> Result<GrayImage, CubeError> {
        if index >= self.bands {
            return Err(CubeError::BandOutOfRange {
                index,
                bands: self.bands,
            });
        }
        let mut values = Vec::with_capacity(self.rows * self.cols);
        values.extend(self.data.iter().skip(index).step_by(self.bands));
        GrayImage::new(self.rows, self.cols, values)
    }
}

/// A single-band grayscale image with real-valued pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, CubeError> {
        if rows == 0 || cols == 0 {
            return Err(CubeError::EmptyImage { rows, cols });
        }
        if values.len() != rows * cols {
            return Err(CubeError::ImageLengthMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CubeError::NonFiniteValue {
                row: i / cols,
                col: i % cols,
                band: 0,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "pixel out of range");
        self.values[row * self.cols + col]
    }

    /// Smallest and largest pixel value.
    pub fn min_max(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in &self.values {
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }
}
