//! Final outputs: the color-segmented document image and the line-to-cluster
//! table.
//!
//! The table is the detection result proper: each text line is attributed to
//! the cluster owning most of its ink pixels, so lines written with the same
//! ink land on the same cluster row and the number of distinct ink clusters
//! estimates the number of inks.

use thiserror::Error;

use crate::kmeans::ClusterModel;
use crate::pngio;
use crate::preprocess::{BinaryMask, LineRegion};

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("palette holds {got} colors but the model has k = {k}")]
    PaletteTooSmall { k: usize, got: usize },
    #[error("palette colors {first} and {second} are identical; labels would be ambiguous")]
    PaletteNotDistinct { first: usize, second: usize },
    #[error("line {line_id} (rows {row_start}..{row_end}) contains no ink pixels")]
    EmptyRegion {
        line_id: usize,
        row_start: usize,
        row_end: usize,
    },
    #[error("mask is {mask_rows} x {mask_cols} but the label map is {rows} x {cols}")]
    DimensionMismatch {
        mask_rows: usize,
        mask_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("region rows {row_start}..{row_end} exceed the label map rows {rows}")]
    RegionOutOfBounds {
        row_start: usize,
        row_end: usize,
        rows: usize,
    },
}

/// Default cluster colors: ten well-separated RGB triples, label 0 first.
/// Pure white and pure black are deliberately absent so background rendering
/// can claim them without colliding with a cluster color.
pub const DEFAULT_PALETTE: [[u8; 3]; 10] = [
    [230, 25, 75],   // red
    [60, 180, 75],   // green
    [255, 225, 25],  // yellow
    [0, 130, 200],   // blue
    [245, 130, 48],  // orange
    [145, 30, 180],  // purple
    [70, 240, 240],  // cyan
    [240, 50, 230],  // magenta
    [128, 128, 0],   // olive
    [0, 0, 128],     // navy
];

/// RGB rendering of a label map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedImage {
    pub rows: usize,
    pub cols: usize,
    /// Row-major pixel colors.
    pub rgb: Vec<[u8; 3]>,
}

/// One text line's cluster attribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineClusterEntry {
    pub line_id: usize,
    /// Mode of the cluster labels over the line's ink pixels; ties resolve
    /// to the lowest label.
    pub dominant_cluster: u32,
    /// Fraction of the line's ink pixels holding the dominant label.
    pub purity: f64,
    pub ink_pixel_count: usize,
}

/// Per-line cluster attributions, one entry per detected line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineClusterTable {
    pub entries: Vec<LineClusterEntry>,
}

/// Maps every label to its palette color. The first `k` palette entries must
/// be pairwise distinct so the coloring stays injective on labels.
pub fn colorize(model: &ClusterModel, palette: &[[u8; 3]]) -> Result<SegmentedImage, SegmentError> {
    if palette.len() < model.k {
        return Err(SegmentError::PaletteTooSmall {
            k: model.k,
            got: palette.len(),
        });
    }
    for i in 0..model.k {
        for j in i + 1..model.k {
            if palette[i] == palette[j] {
                return Err(SegmentError::PaletteNotDistinct { first: i, second: j });
            }
        }
    }
    let rgb = model
        .labels
        .iter()
        .map(|&label| palette[label as usize])
        .collect();
    Ok(SegmentedImage {
        rows: model.rows,
        cols: model.cols,
        rgb,
    })
}

/// The cluster holding the majority of the mask's background pixels, or
/// `None` when the mask has no background at all. Ties resolve to the lowest
/// label.
pub fn background_cluster(model: &ClusterModel, mask: &BinaryMask) -> Option<u32> {
    if mask.rows() != model.rows || mask.cols() != model.cols {
        return None;
    }
    let mut counts = vec![0usize; model.k];
    let mut background_pixels = 0usize;
    for (p, &is_ink) in mask.ink().iter().enumerate() {
        if !is_ink {
            counts[model.labels[p] as usize] += 1;
            background_pixels += 1;
        }
    }
    if background_pixels == 0 {
        return None;
    }
    let mut best = 0usize;
    for j in 1..model.k {
        if counts[j] > counts[best] {
            best = j;
        }
    }
    Some(best as u32)
}

/// Attributes each detected line to the cluster owning most of its ink
/// pixels. A region whose rows hold no ink is rejected: such a region cannot
/// come from a well-formed segmentation of the same mask.
pub fn line_cluster_table(
    model: &ClusterModel,
    regions: &[LineRegion],
    mask: &BinaryMask,
) -> Result<LineClusterTable, SegmentError> {
    if mask.rows() != model.rows || mask.cols() != model.cols {
        return Err(SegmentError::DimensionMismatch {
            mask_rows: mask.rows(),
            mask_cols: mask.cols(),
            rows: model.rows,
            cols: model.cols,
        });
    }
    let mut entries = Vec::with_capacity(regions.len());
    for region in regions {
        if region.row_end > model.rows {
            return Err(SegmentError::RegionOutOfBounds {
                row_start: region.row_start,
                row_end: region.row_end,
                rows: model.rows,
            });
        }
        let mut counts = vec![0usize; model.k];
        let mut ink_pixel_count = 0usize;
        for r in region.row_start..region.row_end {
            for c in 0..model.cols {
                if mask.is_ink(r, c) {
                    counts[model.labels[r * model.cols + c] as usize] += 1;
                    ink_pixel_count += 1;
                }
            }
        }
        if ink_pixel_count == 0 {
            return Err(SegmentError::EmptyRegion {
                line_id: region.line_id,
                row_start: region.row_start,
                row_end: region.row_end,
            });
        }
        let mut dominant = 0usize;
        for j in 1..model.k {
            if counts[j] > counts[dominant] {
                dominant = j;
            }
        }
        entries.push(LineClusterEntry {
            line_id: region.line_id,
            dominant_cluster: dominant as u32,
            purity: counts[dominant] as f64 / ink_pixel_count as f64,
            ink_pixel_count,
        });
    }
    Ok(LineClusterTable { entries })
}

/// CSV form: `line_id,cluster,purity,ink_pixels`, one row per line.
pub fn table_csv(table: &LineClusterTable) -> String {
    let mut csv = String::from("line_id,cluster,purity,ink_pixels\n");
    for e in &table.entries {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            e.line_id, e.dominant_cluster, e.purity, e.ink_pixel_count
        ));
    }
    csv
}

/// Aligned plain-text form grouping lines by cluster, one cluster per row.
pub fn table_text(table: &LineClusterTable) -> String {
    let mut clusters: Vec<u32> = table.entries.iter().map(|e| e.dominant_cluster).collect();
    clusters.sort_unstable();
    clusters.dedup();

    let mut text = String::from("Cluster No.    Text Line No.\n");
    for cluster in clusters {
        let lines: Vec<String> = table
            .entries
            .iter()
            .filter(|e| e.dominant_cluster == cluster)
            .map(|e| format!("L-{}", e.line_id))
            .collect();
        text.push_str(&format!("{:<15}{}\n", format!("C-{cluster}"), lines.join(", ")));
    }
    text
}

/// Encodes a segmented image as an 8-bit RGB PNG.
pub fn write_png(image: &SegmentedImage) -> Vec<u8> {
    let mut flat = Vec::with_capacity(image.rgb.len() * 3);
    for px in &image.rgb {
        flat.extend_from_slice(px);
    }
    pngio::encode_rgb8(image.rows, image.cols, &flat)
}
