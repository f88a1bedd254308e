//! The staged end-to-end run: crop, threshold, signatures, cluster, segment.
//!
//! Every stage writes its artifacts to the output directory before the next
//! stage starts, so a failed run leaves all completed work on disk for
//! inspection. Artifact contents are deterministic functions of the input
//! cube and the configuration (no timestamps, no absolute paths), which makes
//! whole-directory comparison a valid reproducibility check.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{GrayImage, HyperCube};
use crate::envi::{self, ByteOrder, EnviHeader, Interleave};
use crate::kmeans::{self, ClusterModel, InitStrategy, KMeansConfig};
use crate::pngio;
use crate::preprocess::{self, BinaryMask, LineRegion, Rect};
use crate::segment::{self, LineClusterTable, DEFAULT_PALETTE};
use crate::signatures;

#[derive(Debug, Error)]
pub enum PipelineError {
    /// The configuration or input is unusable; nothing was attempted.
    #[error("{0}")]
    Input(String),
    /// A stage failed mid-run; earlier artifacts are on disk.
    #[error("stage {stage} failed: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
}

fn stage_err<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> PipelineError {
    move |e| PipelineError::Stage {
        stage,
        message: e.to_string(),
    }
}

/// The pipeline stages in execution order. Running "up to" a stage writes
/// that stage's artifacts and stops, which is how the per-stage subcommands
/// reuse one code path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    /// Crop to the configured region (full frame when none) and save the cube.
    Crop,
    /// Grayscale band export, histogram, Otsu threshold, binary mask.
    Threshold,
    /// Line segmentation and per-line mean spectral signatures.
    Signatures,
    /// Background suppression and K-means clustering.
    Cluster,
    /// Colorized label image and the line-to-cluster table.
    Segment,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Crop => "crop",
            Stage::Threshold => "threshold",
            Stage::Signatures => "signatures",
            Stage::Cluster => "cluster",
            Stage::Segment => "segment",
        }
    }
}

/// Full run configuration, readable from a JSON file. Every field has a
/// default, so `{}` is a valid config; unknown keys are rejected to catch
/// typos. CLI flags override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Crop region; the full frame when absent.
    pub crop: Option<Rect>,
    /// Band index used for thresholding and the grayscale export.
    pub threshold_band: usize,
    /// Manual threshold; when absent the threshold comes from Otsu's method.
    pub threshold: Option<f64>,
    pub ink_is_dark: bool,
    /// Histogram resolution for threshold selection.
    pub n_bins: usize,
    /// Value written into every band of background pixels.
    pub fill: f64,
    /// Manual line regions as `[row_start, row_end)` pairs, top to bottom;
    /// when absent lines come from projection-profile segmentation.
    pub line_regions: Option<Vec<[usize; 2]>>,
    pub min_gap_rows: usize,
    pub min_line_rows: usize,
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub init_strategy: InitStrategy,
    /// Cluster colors; the built-in palette when absent.
    pub palette: Option<Vec<[u8; 3]>>,
    /// Render this cluster in the background color (the table still reports
    /// the original labels).
    pub merge_cluster: Option<u32>,
    /// Extra signature plots, each listing the line ids to draw together.
    pub signature_groups: Vec<Vec<usize>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            crop: None,
            threshold_band: 30,
            threshold: None,
            ink_is_dark: true,
            n_bins: 256,
            fill: 1.0,
            line_regions: None,
            min_gap_rows: 3,
            min_line_rows: 5,
            k: 7,
            max_iterations: 500,
            seed: 0,
            init_strategy: InitStrategy::UniformSpread,
            palette: None,
            merge_cluster: None,
            signature_groups: Vec::new(),
        }
    }
}

impl PipelineConfig {
    /// Reads and validates a JSON config file.
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Input(format!("bad config: {e}")))
    }

    fn kmeans_config(&self) -> KMeansConfig {
        KMeansConfig {
            k: self.k,
            max_iterations: self.max_iterations,
            seed: self.seed,
            init_strategy: self.init_strategy,
        }
    }

    /// Checks the cube-independent invariants.
    fn validate(&self) -> Result<(), PipelineError> {
        if self.k < 2 {
            return Err(PipelineError::Input(format!(
                "k must be at least 2 so one cluster can absorb the background, got {}",
                self.k
            )));
        }
        if self.max_iterations == 0 {
            return Err(PipelineError::Input("max_iterations must be positive".into()));
        }
        if self.n_bins == 0 {
            return Err(PipelineError::Input("n_bins must be positive".into()));
        }
        if self.min_gap_rows == 0 || self.min_line_rows == 0 {
            return Err(PipelineError::Input(
                "min_gap_rows and min_line_rows must be positive".into(),
            ));
        }
        if !self.fill.is_finite() {
            return Err(PipelineError::Input(format!(
                "fill must be finite, got {}",
                self.fill
            )));
        }
        if let Some(t) = self.threshold {
            if !t.is_finite() {
                return Err(PipelineError::Input(format!(
                    "threshold must be finite, got {t}"
                )));
            }
        }
        if let Some(regions) = &self.line_regions {
            for (i, r) in regions.iter().enumerate() {
                if r[0] >= r[1] {
                    return Err(PipelineError::Input(format!(
                        "line_regions[{i}] = [{}, {}] is not an increasing row range",
                        r[0], r[1]
                    )));
                }
            }
        }
        if let Some(palette) = &self.palette {
            if palette.len() < self.k {
                return Err(PipelineError::Input(format!(
                    "palette has {} colors for k = {}",
                    palette.len(),
                    self.k
                )));
            }
        }
        if let Some(m) = self.merge_cluster {
            if m as usize >= self.k {
                return Err(PipelineError::Input(format!(
                    "merge_cluster {m} is out of range for k = {}",
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// What a run produced, stage by stage. Fields past the last executed stage
/// stay `None`/empty.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub out_dir: PathBuf,
    /// Artifact file names in write order.
    pub artifacts: Vec<String>,
    pub threshold: Option<f64>,
    pub regions: Vec<LineRegion>,
    pub iterations_run: Option<usize>,
    pub sse: Option<f64>,
    pub converged: Option<bool>,
    pub table: Option<LineClusterTable>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    parameters: &'a PipelineConfig,
    last_stage: &'static str,
    threshold: Option<f64>,
    artifacts: &'a [String],
}

fn write_manifest(
    out_dir: &Path,
    config: &PipelineConfig,
    last_stage: Stage,
    threshold: Option<f64>,
    artifacts: &mut Vec<String>,
) -> Result<(), PipelineError> {
    let manifest = Manifest {
        parameters: config,
        last_stage: last_stage.name(),
        threshold,
        artifacts,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(out_dir.join("run_manifest.json"), json).map_err(stage_err("manifest"))?;
    artifacts.push("run_manifest.json".to_string());
    Ok(())
}

struct Writer<'a> {
    out_dir: &'a Path,
    artifacts: Vec<String>,
}

impl Writer<'_> {
    fn put(
        &mut self,
        stage: &'static str,
        name: &str,
        bytes: impl AsRef<[u8]>,
    ) -> Result<(), PipelineError> {
        fs::write(self.out_dir.join(name), bytes.as_ref()).map_err(stage_err(stage))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn put_cube(
        &mut self,
        stage: &'static str,
        stem: &str,
        cube: &HyperCube,
    ) -> Result<(), PipelineError> {
        let header_path = self.out_dir.join(format!("{stem}.hdr"));
        envi::write_envi(cube, Interleave::Bsq, ByteOrder::Little, &header_path)
            .map_err(stage_err(stage))?;
        self.artifacts.push(format!("{stem}.hdr"));
        self.artifacts.push(format!("{stem}.raw"));
        Ok(())
    }
}

/// Grayscale PNG of one band, min-max normalized to the 8-bit range.
/// A flat band renders as black.
pub fn band_png(image: &GrayImage) -> Vec<u8> {
    let (lo, hi) = image.min_max();
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let pixels: Vec<u8> = image
        .values()
        .iter()
        .map(|&v| ((v - lo) * scale).round() as u8)
        .collect();
    pngio::encode_gray8(image.rows(), image.cols(), &pixels)
}

/// Binary mask PNG: ink pixels black (0), background white (255).
pub fn mask_png(mask: &BinaryMask) -> Vec<u8> {
    let pixels: Vec<u8> = mask.ink().iter().map(|&b| if b { 0 } else { 255 }).collect();
    pngio::encode_gray8(mask.rows(), mask.cols(), &pixels)
}

/// Histogram CSV: `bin_start,bin_end,count`, one row per bin.
pub fn histogram_csv(hist: &preprocess::Histogram) -> String {
    let mut csv = String::from("bin_start,bin_end,count\n");
    for i in 0..hist.n_bins() {
        csv.push_str(&format!(
            "{},{},{}\n",
            hist.bin_edges[i],
            hist.bin_edges[i + 1],
            hist.counts[i]
        ));
    }
    csv
}

/// One-line description of a cube on disk:
/// `rows x cols x bands, lo-hi nm, data type`.
pub fn describe(header: &EnviHeader) -> String {
    let mut text = format!("{} x {} x {}", header.lines, header.samples, header.bands);
    if let Some(wl) = &header.wavelengths_nm {
        if let (Some(lo), Some(hi)) = (wl.first(), wl.last()) {
            text.push_str(&format!(", {lo:.1}\u{2013}{hi:.1} nm"));
        }
    }
    text.push_str(&format!(", {}", header.data_type.as_str()));
    text
}

/// Runs the pipeline on an already-loaded cube, writing artifacts for every
/// stage up to and including `last_stage`, then the run manifest. On a stage
/// failure the artifacts written so far remain on disk and the manifest lists
/// exactly them.
pub fn run_pipeline(
    cube: &HyperCube,
    config: &PipelineConfig,
    out_dir: &Path,
    last_stage: Stage,
) -> Result<PipelineReport, PipelineError> {
    config.validate()?;
    fs::create_dir_all(out_dir)
        .map_err(|e| PipelineError::Input(format!("cannot create {}: {e}", out_dir.display())))?;

    let mut w = Writer {
        out_dir,
        artifacts: Vec::new(),
    };
    let result = run_stages(cube, config, &mut w, last_stage);
    let threshold = match &result {
        Ok(report) => report.threshold,
        Err(_) => None,
    };
    // the manifest is written even after a failure so it always lists
    // exactly the artifacts that exist
    let manifest_result = write_manifest(out_dir, config, last_stage, threshold, &mut w.artifacts);
    match result {
        Ok(mut report) => {
            manifest_result?;
            report.artifacts = w.artifacts;
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

fn run_stages(
    cube: &HyperCube,
    config: &PipelineConfig,
    w: &mut Writer,
    last_stage: Stage,
) -> Result<PipelineReport, PipelineError> {
    let mut report = PipelineReport {
        out_dir: w.out_dir.to_path_buf(),
        artifacts: Vec::new(),
        threshold: None,
        regions: Vec::new(),
        iterations_run: None,
        sse: None,
        converged: None,
        table: None,
    };

    // crop
    let rect = config.crop.unwrap_or_else(|| Rect::full(cube));
    let cube = preprocess::crop(cube, rect).map_err(stage_err("crop"))?;
    w.put_cube("crop", "cropped", &cube)?;
    if last_stage < Stage::Threshold {
        return Ok(report);
    }

    // threshold
    let band = cube
        .band(config.threshold_band)
        .map_err(stage_err("threshold"))?;
    w.put(
        "threshold",
        &format!("band_{}.png", config.threshold_band),
        band_png(&band),
    )?;
    let hist = preprocess::histogram(&band, config.n_bins).map_err(stage_err("threshold"))?;
    w.put("threshold", "histogram.csv", histogram_csv(&hist))?;
    let threshold = match config.threshold {
        Some(t) => t,
        None => preprocess::otsu_threshold(&band, config.n_bins).map_err(stage_err("threshold"))?,
    };
    report.threshold = Some(threshold);
    let mask = preprocess::binarize(&band, threshold, config.ink_is_dark);
    w.put("threshold", "mask.png", mask_png(&mask))?;
    if last_stage < Stage::Signatures {
        return Ok(report);
    }

    // signatures
    let regions = match &config.line_regions {
        Some(manual) => manual
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r[1] > cube.rows() {
                    return Err(PipelineError::Stage {
                        stage: "signatures",
                        message: format!(
                            "line_regions[{i}] ends at row {} but the image has {} rows",
                            r[1],
                            cube.rows()
                        ),
                    });
                }
                Ok(LineRegion {
                    line_id: i + 1,
                    row_start: r[0],
                    row_end: r[1],
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => preprocess::segment_lines(&mask, config.min_gap_rows, config.min_line_rows)
            .map_err(stage_err("signatures"))?,
    };
    let mut regions_json =
        serde_json::to_string_pretty(&regions).expect("line regions serialize");
    regions_json.push('\n');
    w.put("signatures", "line_regions.json", regions_json)?;

    let sigs = regions
        .iter()
        .map(|r| signatures::mean_signature(&cube, &mask, r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(stage_err("signatures"))?;
    let wavelengths = cube.wavelengths_nm().to_vec();
    let csv = signatures::export_signatures(&sigs, &wavelengths).map_err(stage_err("signatures"))?;
    w.put("signatures", "signatures.csv", csv)?;
    let all_ids: Vec<usize> = regions.iter().map(|r| r.line_id).collect();
    let svg = signatures::render_signature_plot(&sigs, &wavelengths, &all_ids)
        .map_err(stage_err("signatures"))?;
    w.put("signatures", "signatures_all.svg", svg)?;
    for (i, group) in config.signature_groups.iter().enumerate() {
        let svg = signatures::render_signature_plot(&sigs, &wavelengths, group)
            .map_err(stage_err("signatures"))?;
        w.put("signatures", &format!("signatures_group_{}.svg", i + 1), svg)?;
    }
    report.regions = regions.clone();
    if last_stage < Stage::Cluster {
        return Ok(report);
    }

    // cluster
    let suppressed =
        preprocess::suppress_background(&cube, &mask, config.fill).map_err(stage_err("cluster"))?;
    w.put_cube("cluster", "suppressed", &suppressed)?;
    let model =
        kmeans::run_kmeans(&suppressed, &config.kmeans_config()).map_err(stage_err("cluster"))?;
    w.put("cluster", "cluster_model.json", kmeans::model_json(&model))?;
    let label_map = kmeans::encode_label_map(&model).map_err(stage_err("cluster"))?;
    w.put("cluster", "labels.bin", label_map)?;
    w.put(
        "cluster",
        "centroids.svg",
        kmeans::centroid_plot(&model, &wavelengths),
    )?;
    report.iterations_run = Some(model.iterations_run);
    report.sse = Some(model.sse);
    report.converged = Some(model.converged);
    if last_stage < Stage::Segment {
        return Ok(report);
    }

    // segment
    let image = render_segmented(&model, &mask, config).map_err(stage_err("segment"))?;
    w.put("segment", "segmented.png", segment::write_png(&image))?;
    let table = segment::line_cluster_table(&model, &report.regions, &mask)
        .map_err(stage_err("segment"))?;
    w.put("segment", "line_clusters.csv", segment::table_csv(&table))?;
    w.put("segment", "line_clusters.txt", segment::table_text(&table))?;
    report.table = Some(table);
    Ok(report)
}

/// Colorizes the label map with the background cluster rendered in the
/// background color: white for `fill >= 0.5`, black below. An optional
/// merge cluster is rendered the same way; tables still use the original
/// labels, so the merge is purely visual.
fn render_segmented(
    model: &ClusterModel,
    mask: &BinaryMask,
    config: &PipelineConfig,
) -> Result<segment::SegmentedImage, segment::SegmentError> {
    let mut palette: Vec<[u8; 3]> = match &config.palette {
        Some(p) => p.clone(),
        None => DEFAULT_PALETTE.to_vec(),
    };
    let background_color: [u8; 3] = if config.fill >= 0.5 {
        [255, 255, 255]
    } else {
        [0, 0, 0]
    };
    if let Some(bg) = segment::background_cluster(model, mask) {
        palette[bg as usize] = background_color;
    }
    let mut image = segment::colorize(model, &palette)?;
    if let Some(m) = config.merge_cluster {
        for (rgb, &label) in image.rgb.iter_mut().zip(&model.labels) {
            if label == m {
                *rgb = background_color;
            }
        }
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{self, SynthSpec};

    fn small_spec() -> SynthSpec {
        SynthSpec {
            rows: 96,
            cols: 80,
            bands: 16,
            n_lines: 4,
            line_to_ink: vec![0, 1, 2, 2],
            ink_params: vec![
                synth::InkParams { center_nm: 550.0, width_nm: 60.0, depth: 0.75 },
                synth::InkParams { center_nm: 600.0, width_nm: 45.0, depth: 0.55 },
                synth::InkParams { center_nm: 680.0, width_nm: 60.0, depth: 0.65 },
            ],
            ..SynthSpec::default()
        }
    }

    fn small_config() -> PipelineConfig {
        PipelineConfig {
            threshold_band: 5,
            k: 5,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn config_defaults_parse_from_empty_json() {
        let config = PipelineConfig::from_json("{}").unwrap();
        assert_eq!(config, PipelineConfig::default());
        assert_eq!(config.threshold_band, 30);
        assert_eq!(config.k, 7);
        assert_eq!(config.fill, 1.0);
        assert!(config.ink_is_dark);
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        assert!(PipelineConfig::from_json("{\"treshold_band\": 30}").is_err());
        let config = PipelineConfig {
            k: 1,
            ..PipelineConfig::default()
        };
        assert!(matches!(config.validate(), Err(PipelineError::Input(_))));
        let config = PipelineConfig {
            line_regions: Some(vec![[10, 10]]),
            ..PipelineConfig::default()
        };
        assert!(config.validate().is_err());
        let config = PipelineConfig {
            merge_cluster: Some(9),
            ..PipelineConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn config_roundtrips_through_json() {
        let config = PipelineConfig {
            crop: Some(Rect::new(1, 2, 30, 40)),
            threshold_band: 5,
            line_regions: Some(vec![[0, 10], [20, 30]]),
            signature_groups: vec![vec![1, 2]],
            ..PipelineConfig::default()
        };
        let json = serde_json::to_string(&config).unwrap();
        assert_eq!(PipelineConfig::from_json(&json).unwrap(), config);
    }

    #[test]
    fn full_run_writes_every_artifact_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let (cube, _) = synth::generate(&small_spec()).unwrap();
        let report =
            run_pipeline(&cube, &small_config(), dir.path(), Stage::Segment).unwrap();
        let expected = [
            "cropped.hdr",
            "cropped.raw",
            "band_5.png",
            "histogram.csv",
            "mask.png",
            "line_regions.json",
            "signatures.csv",
            "signatures_all.svg",
            "suppressed.hdr",
            "suppressed.raw",
            "cluster_model.json",
            "labels.bin",
            "centroids.svg",
            "segmented.png",
            "line_clusters.csv",
            "line_clusters.txt",
            "run_manifest.json",
        ];
        assert_eq!(report.artifacts, expected);
        for name in expected {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        assert_eq!(report.regions.len(), 4);
        assert_eq!(report.table.as_ref().unwrap().entries.len(), 4);
        assert!(report.converged.unwrap());
    }

    #[test]
    fn stage_limit_stops_after_its_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let (cube, _) = synth::generate(&small_spec()).unwrap();
        let report =
            run_pipeline(&cube, &small_config(), dir.path(), Stage::Threshold).unwrap();
        assert_eq!(
            report.artifacts,
            [
                "cropped.hdr",
                "cropped.raw",
                "band_5.png",
                "histogram.csv",
                "mask.png",
                "run_manifest.json"
            ]
        );
        assert!(!dir.path().join("line_regions.json").exists());
        assert!(report.threshold.is_some());
        assert!(report.table.is_none());
    }

    #[test]
    fn failed_stage_leaves_earlier_artifacts_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let (cube, _) = synth::generate(&small_spec()).unwrap();
        let config = PipelineConfig {
            threshold_band: 99,
            ..small_config()
        };
        let err = run_pipeline(&cube, &config, dir.path(), Stage::Segment).unwrap_err();
        match err {
            PipelineError::Stage { stage, .. } => assert_eq!(stage, "threshold"),
            other => panic!("expected stage error, got {other:?}"),
        }
        assert!(dir.path().join("cropped.hdr").exists());
        assert!(!dir.path().join("mask.png").exists());
        let manifest = fs::read_to_string(dir.path().join("run_manifest.json")).unwrap();
        let value: serde_json::Value = serde_json::from_str(&manifest).unwrap();
        let listed: Vec<&str> = value["artifacts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        assert_eq!(listed, ["cropped.hdr", "cropped.raw"]);
    }

    #[test]
    fn manual_threshold_and_regions_override_detection() {
        let dir = tempfile::tempdir().unwrap();
        let (cube, truth) = synth::generate(&small_spec()).unwrap();
        let manual: Vec<[usize; 2]> = truth
            .line_regions
            .iter()
            .map(|r| [r.row_start, r.row_end])
            .collect();
        let config = PipelineConfig {
            threshold: Some(0.8),
            line_regions: Some(manual),
            ..small_config()
        };
        let report = run_pipeline(&cube, &config, dir.path(), Stage::Signatures).unwrap();
        assert_eq!(report.threshold, Some(0.8));
        assert_eq!(report.regions, truth.line_regions);
    }

    #[test]
    fn runs_are_byte_identical_under_a_fixed_seed() {
        let (cube, _) = synth::generate(&small_spec()).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let report =
            run_pipeline(&cube, &small_config(), dir_a.path(), Stage::Segment).unwrap();
        run_pipeline(&cube, &small_config(), dir_b.path(), Stage::Segment).unwrap();
        for name in &report.artifacts {
            let a = fs::read(dir_a.path().join(name)).unwrap();
            let b = fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical runs");
        }
    }

    #[test]
    fn describe_formats_the_dataset_geometry() {
        let header = EnviHeader {
            samples: 650,
            lines: 512,
            bands: 149,
            interleave: Interleave::Bsq,
            data_type: crate::envi::DataType::F32,
            byte_order: ByteOrder::Little,
            header_offset: 0,
            wavelengths_nm: Some((0..149).map(|i| 478.0 + 423.0 * i as f64 / 148.0).collect()),
        };
        assert_eq!(describe(&header), "512 x 650 x 149, 478.0\u{2013}901.0 nm, float32");
    }

    #[test]
    fn band_png_normalizes_to_full_range() {
        let image = GrayImage::new(1, 3, vec![0.0, 0.5, 1.0]).unwrap();
        let png = band_png(&image);
        let decoded = image::load_from_memory(&png).unwrap().into_luma8();
        assert_eq!(decoded.as_raw(), &vec![0u8, 128, 255]);
    }

    #[test]
    fn mask_png_is_black_ink_on_white() {
        let mask = BinaryMask::new(1, 2, vec![true, false]).unwrap();
        let png = mask_png(&mask);
        let decoded = image::load_from_memory(&png).unwrap().into_luma8();
        assert_eq!(decoded.as_raw(), &vec![0u8, 255]);
    }
}
