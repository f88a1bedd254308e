//! ENVI header parsing and raw cube loading/writing.
//!
//! ENVI stores a cube as a small text header (`key = value` entries, list
//! values in braces) next to a headerless binary file whose layout is
//! described by the header: band-sequential (BSQ), band-interleaved-by-line
//! (BIL), or band-interleaved-by-pixel (BIP). The loader deinterleaves all
//! three into the canonical pixel-interleaved [`HyperCube`] order.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cube::{CubeError, HyperCube};

#[derive(Debug, Error)]
pub enum EnviError {
    #[error("not an ENVI header: first token must be \"ENVI\"")]
    NotEnvi,
    #[error("missing required header key \"{0}\"")]
    MissingKey(&'static str),
    #[error("invalid value for header key \"{key}\": {value:?}")]
    InvalidValue { key: String, value: String },
    #[error("unsupported ENVI data type code {0} (supported: 1, 2, 4, 12)")]
    UnsupportedDataType(i64),
    #[error("unsupported interleave {0:?} (supported: bsq, bil, bip)")]
    UnsupportedInterleave(String),
    #[error("wavelength list has {got} entries but header declares {bands} bands")]
    WavelengthCountMismatch { bands: usize, got: usize },
    #[error("raw data truncated: need {needed} bytes, got {got}")]
    TruncatedData { needed: usize, got: usize },
    #[error("non-finite float value at row {row}, col {col}, band {band}")]
    NonFiniteValue {
        row: usize,
        col: usize,
        band: usize,
    },
    #[error("no data file found for header {header}; tried {tried:?}")]
    MissingDataFile { header: PathBuf, tried: Vec<PathBuf> },
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// On-disk layout of the raw file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interleave {
    Bsq,
    Bil,
    Bip,
}

impl Interleave {
    pub fn as_str(self) -> &'static str {
        match self {
            Interleave::Bsq => "bsq",
            Interleave::Bil => "bil",
            Interleave::Bip => "bip",
        }
    }

    pub const ALL: [Interleave; 3] = [Interleave::Bsq, Interleave::Bil, Interleave::Bip];
}

impl std::str::FromStr for Interleave {
    type Err = EnviError;

    fn from_str(s: &str) -> Result<Self, EnviError> {
        match s.to_ascii_lowercase().as_str() {
            "bsq" => Ok(Interleave::Bsq),
            "bil" => Ok(Interleave::Bil),
            "bip" => Ok(Interleave::Bip),
            other => Err(EnviError::UnsupportedInterleave(other.to_string())),
        }
    }
}

/// ENVI `byte order` field: 0 = little-endian, 1 = big-endian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ByteOrder {
    Little,
    Big,
}

impl ByteOrder {
    pub fn code(self) -> u8 {
        match self {
            ByteOrder::Little => 0,
            ByteOrder::Big => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ByteOrder::Little => "little",
            ByteOrder::Big => "big",
        }
    }
}

/// Supported ENVI `data type` codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataType {
    U8,
    I16,
    F32,
    U16,
}

impl DataType {
    pub fn from_code(code: i64) -> Result<Self, EnviError> {
        match code {
            1 => Ok(DataType::U8),
            2 => Ok(DataType::I16),
            4 => Ok(DataType::F32),
            12 => Ok(DataType::U16),
            other => Err(EnviError::UnsupportedDataType(other)),
        }
    }

    pub fn code(self) -> i64 {
        match self {
            DataType::U8 => 1,
            DataType::I16 => 2,
            DataType::F32 => 4,
            DataType::U16 => 12,
        }
    }

    pub fn bytes_per_element(self) -> usize {
        match self {
            DataType::U8 => 1,
            DataType::I16 | DataType::U16 => 2,
            DataType::F32 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DataType::U8 => "uint8",
            DataType::I16 => "int16",
            DataType::F32 => "float32",
            DataType::U16 => "uint16",
        }
    }
}

/// Parsed ENVI header fields.
#[derive(Debug, Clone, PartialEq)]
pub struct EnviHeader {
    /// Number of columns.
    pub samples: usize,
    /// Number of rows.
    pub lines: usize,
    pub bands: usize,
    pub interleave: Interleave,
    pub data_type: DataType,
    pub byte_order: ByteOrder,
    /// Bytes to skip at the start of the raw file.
    pub header_offset: usize,
    pub wavelengths_nm: Option<Vec<f64>>,
}

impl EnviHeader {
    /// Bytes of payload the raw file must contain after the offset.
    pub fn payload_bytes(&self) -> usize {
        self.samples * self.lines * self.bands * self.data_type.bytes_per_element()
    }
}

/// Parses ENVI header text into an [`EnviHeader`].
///
/// Keys are case-insensitive, unknown keys are ignored, and brace-enclosed
/// list values may span multiple lines. `byte order` and `header offset`
/// default to 0 when absent.
pub fn parse_envi_header(text: &str) -> Result<EnviHeader, EnviError> {
    let mut lines = text.lines();
    loop {
        match lines.next() {
            Some(line) if line.trim().is_empty() => continue,
            Some(line) if line.trim() == "ENVI" => break,
            _ => return Err(EnviError::NotEnvi),
        }
    }

    let mut entries: HashMap<String, String> = HashMap::new();
    let mut key = String::new();
    let mut value = String::new();
    let mut depth: i64 = 0;
    for line in lines {
        if depth == 0 {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with(';') {
                continue;
            }
            let Some(eq) = line.find('=') else { continue };
            // normalize interior whitespace so "data  type" still matches
            key = line[..eq]
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ")
                .to_ascii_lowercase();
            value = line[eq + 1..].trim().to_string();
        } else {
            value.push('\n');
            value.push_str(line);
        }
        depth += line.matches('{').count() as i64;
        depth -= line.matches('}').count() as i64;
        if depth == 0 && !key.is_empty() {
            entries.insert(std::mem::take(&mut key), std::mem::take(&mut value));
        }
    }

    let get_int = |key: &'static str| -> Result<Option<i64>, EnviError> {
        match entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .trim()
                .parse::<i64>()
                .map(Some)
                .map_err(|_| EnviError::InvalidValue {
                    key: key.to_string(),
                    value: raw.clone(),
                }),
        }
    };
    let require_dim = |key: &'static str| -> Result<usize, EnviError> {
        let v = get_int(key)?.ok_or(EnviError::MissingKey(key))?;
        if v < 1 {
            return Err(EnviError::InvalidValue {
                key: key.to_string(),
                value: v.to_string(),
            });
        }
        Ok(v as usize)
    };

    let samples = require_dim("samples")?;
    let lines_count = require_dim("lines")?;
    let bands = require_dim("bands")?;

    let interleave: Interleave = entries
        .get("interleave")
        .ok_or(EnviError::MissingKey("interleave"))?
        .trim()
        .parse()?;

    let data_type = DataType::from_code(
        get_int("data type")?.ok_or(EnviError::MissingKey("data type"))?,
    )?;

    let byte_order = match get_int("byte order")?.unwrap_or(0) {
        0 => ByteOrder::Little,
        1 => ByteOrder::Big,
        other => {
            return Err(EnviError::InvalidValue {
                key: "byte order".to_string(),
                value: other.to_string(),
            })
        }
    };

    let header_offset = match get_int("header offset")?.unwrap_or(0) {
        v if v >= 0 => v as usize,
        v => {
            return Err(EnviError::InvalidValue {
                key: "header offset".to_string(),
                value: v.to_string(),
            })
        }
    };

    let wavelengths_nm = match entries.get("wavelength") {
        None => None,
        Some(raw) => {
            let list = parse_float_list("wavelength", raw)?;
            if list.len() != bands {
                return Err(EnviError::WavelengthCountMismatch {
                    bands,
                    got: list.len(),
                });
            }
            Some(list)
        }
    };

    Ok(EnviHeader {
        samples,
        lines: lines_count,
        bands,
        interleave,
        data_type,
        byte_order,
        header_offset,
        wavelengths_nm,
    })
}

fn parse_float_list(key: &str, raw: &str) -> Result<Vec<f64>, EnviError> {
    let trimmed = raw.trim();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| EnviError::InvalidValue {
            key: key.to_string(),
            value: raw.to_string(),
        })?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| EnviError::InvalidValue {
                key: key.to_string(),
                value: s.to_string(),
            })
        })
        .collect()
}

/// Decodes a raw byte payload into a cube, deinterleaving into canonical
/// pixel-interleaved order. Integer source types are converted to reals
/// verbatim, without rescaling.
pub fn load_cube(header: &EnviHeader, raw: &[u8]) -> Result<HyperCube, EnviError> {
    let needed = header.header_offset + header.payload_bytes();
    if raw.len() < needed {
        return Err(EnviError::TruncatedData {
            needed,
            got: raw.len(),
        });
    }
    let payload = &raw[header.header_offset..needed];

    let (rows, cols, bands) = (header.lines, header.samples, header.bands);
    let bpe = header.data_type.bytes_per_element();
    let read_at = |element: usize| -> f64 {
        let bytes = &payload[element * bpe..(element + 1) * bpe];
        match (header.data_type, header.byte_order) {
            (DataType::U8, _) => bytes[0] as f64,
            (DataType::I16, ByteOrder::Little) => {
                i16::from_le_bytes([bytes[0], bytes[1]]) as f64
            }
            (DataType::I16, ByteOrder::Big) => i16::from_be_bytes([bytes[0], bytes[1]]) as f64,
            (DataType::U16, ByteOrder::Little) => {
                u16::from_le_bytes([bytes[0], bytes[1]]) as f64
            }
            (DataType::U16, ByteOrder::Big) => u16::from_be_bytes([bytes[0], bytes[1]]) as f64,
            (DataType::F32, ByteOrder::Little) => {
                f32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64
            }
            (DataType::F32, ByteOrder::Big) => {
                f32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64
            }
        }
    };

    let mut data = Vec::with_capacity(rows * cols * bands);
    for r in 0..rows {
        for c in 0..cols {
            for b in 0..bands {
                let element = match header.interleave {
                    Interleave::Bsq => (b * rows + r) * cols + c,
                    Interleave::Bil => (r * bands + b) * cols + c,
                    Interleave::Bip => (r * cols + c) * bands + b,
                };
                let v = read_at(element);
                if !v.is_finite() {
                    return Err(EnviError::NonFiniteValue {
                        row: r,
                        col: c,
                        band: b,
                    });
                }
                data.push(v);
            }
        }
    }

    Ok(HyperCube::new(
        rows,
        cols,
        bands,
        header.wavelengths_nm.clone(),
        data,
    )?)
}

/// Serializes a cube to ENVI header text plus a float32 raw payload in the
/// requested interleave and byte order. Loading the pair back reproduces the
/// cube bit-exactly when its values are float32-representable.
pub fn write_cube(
    cube: &HyperCube,
    interleave: Interleave,
    byte_order: ByteOrder,
) -> (String, Vec<u8>) {
    let (rows, cols, bands) = (cube.rows(), cube.cols(), cube.bands());

    let mut header = String::new();
    header.push_str("ENVI\n");
    header.push_str("description = { inkscan exported cube }\n");
    header.push_str(&format!("samples = {cols}\n"));
    header.push_str(&format!("lines = {rows}\n"));
    header.push_str(&format!("bands = {bands}\n"));
    header.push_str("header offset = 0\n");
    header.push_str("file type = ENVI Standard\n");
    header.push_str("data type = 4\n");
    header.push_str(&format!("interleave = {}\n", interleave.as_str()));
    header.push_str(&format!("byte order = {}\n", byte_order.code()));
    header.push_str("wavelength = {\n");
    for (i, w) in cube.wavelengths_nm().iter().enumerate() {
        if i > 0 {
            header.push_str(if i % 6 == 0 { ",\n" } else { ", " });
        }
        if i % 6 == 0 {
            header.push(' ');
        }
        header.push_str(&format!("{w}"));
    }
    header.push_str(" }\n");

    let push_value = |raw: &mut Vec<u8>, v: f64| {
        let bits = v as f32;
        match byte_order {
            ByteOrder::Little => raw.extend_from_slice(&bits.to_le_bytes()),
            ByteOrder::Big => raw.extend_from_slice(&bits.to_be_bytes()),
        }
    };

    let mut raw = Vec::with_capacity(rows * cols * bands * 4);
    match interleave {
        Interleave::Bsq => {
            for b in 0..bands {
                for r in 0..rows {
                    for c in 0..cols {
                        push_value(&mut raw, cube.value(r, c, b));
                    }
                }
            }
        }
        Interleave::Bil => {
            for r in 0..rows {
                for b in 0..bands {
                    for c in 0..cols {
                        push_value(&mut raw, cube.value(r, c, b));
                    }
                }
            }
        }
        Interleave::Bip => {
            for v in cube.data() {
                push_value(&mut raw, *v);
            }
        }
    }

    (header, raw)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EnviError + '_ {
    move |source| EnviError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads and parses just the header file.
pub fn read_header(header_path: &Path) -> Result<EnviHeader, EnviError> {
    let text = fs::read_to_string(header_path).map_err(io_err(header_path))?;
    parse_envi_header(&text)
}

/// Locates the raw data file next to a header: the same path without the
/// `.hdr` extension, or with `.raw`, `.img`, or `.dat` substituted.
pub fn data_path_for(header_path: &Path) -> Result<PathBuf, EnviError> {
    let stem = header_path.with_extension("");
    let mut tried = Vec::new();
    for candidate in [
        stem.clone(),
        stem.with_extension("raw"),
        stem.with_extension("img"),
        stem.with_extension("dat"),
    ] {
        if candidate != *header_path && candidate.is_file() {
            return Ok(candidate);
        }
        tried.push(candidate);
    }
    Err(EnviError::MissingDataFile {
        header: header_path.to_path_buf(),
        tried,
    })
}

/// Loads a cube from a header path and its sibling data file.
pub fn read_envi(header_path: &Path) -> Result<HyperCube, EnviError> {
    let header = read_header(header_path)?;
    let data_path = data_path_for(header_path)?;
    let raw = fs::read(&data_path).map_err(io_err(&data_path))?;
    load_cube(&header, &raw)
}

/// Writes `<stem>.hdr` and `<stem>.raw` for a cube.
pub fn write_envi(
    cube: &HyperCube,
    interleave: Interleave,
    byte_order: ByteOrder,
    header_path: &Path,
) -> Result<PathBuf, EnviError> {
    let (header, raw) = write_cube(cube, interleave, byte_order);
    let data_path = header_path.with_extension("raw");
    fs::write(header_path, header).map_err(io_err(header_path))?;
    fs::write(&data_path, raw).map_err(io_err(&data_path))?;
    Ok(data_path)
}
