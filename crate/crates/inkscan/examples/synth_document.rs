//! Generates a synthetic handwritten document cube with known per-pixel
//! ground truth, for testing detection pipelines end to end.
//!
//! ```sh
//! cargo run --example synth_document
//! ```

use std::error::Error;
use std::fs;

use inkscan::envi::{self, ByteOrder, Interleave};
use inkscan::synth::{self, InkParams, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/synth_document");
    fs::create_dir_all(out)?;

    // two visually similar blue-ish inks and one distinct red-ish ink
    let spec = SynthSpec {
        rows: 192,
        cols: 160,
        bands: 32,
        n_lines: 6,
        line_to_ink: vec![0, 1, 0, 2, 1, 2],
        ink_params: vec![
            InkParams { center_nm: 560.0, width_nm: 45.0, depth: 0.70 },
            InkParams { center_nm: 575.0, width_nm: 50.0, depth: 0.60 },
            InkParams { center_nm: 700.0, width_nm: 40.0, depth: 0.65 },
        ],
        noise_sigma: 0.015,
        seed: 42,
        ..SynthSpec::default()
    };
    let (cube, truth) = synth::generate(&spec)?;

    envi::write_envi(&cube, Interleave::Bsq, ByteOrder::Little, &out.join("synth.hdr"))?;
    fs::write(out.join("ground_truth.json"), synth::ground_truth_json(&spec, &truth))?;
    fs::write(out.join("ground_truth.bin"), synth::encode_gt_map(&truth))?;

    println!(
        "generated {} x {} x {} document, {} lines, {} inks",
        spec.rows,
        spec.cols,
        spec.bands,
        spec.n_lines,
        spec.ink_params.len(),
    );
    for region in &truth.line_regions {
        println!(
            "  line {} rows {}..{} writes ink {}",
            region.line_id,
            region.row_start,
            region.row_end,
            spec.line_to_ink[region.line_id - 1],
        );
    }

    let ink_pixels = truth.ink_label.iter().filter(|&&l| l >= 0).count();
    let rule_pixels = truth.ink_label.iter().filter(|&&l| l == -2).count();
    println!("{ink_pixels} ink pixels, {rule_pixels} rule-line pixels");
    println!("artifacts in {}", out.display());
    Ok(())
}
