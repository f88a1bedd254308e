//! Finds text lines by projection, averages each line's ink spectra into a
//! signature, and exports the signatures as CSV and as an SVG chart.
//!
//! ```sh
//! cargo run --example line_signatures
//! ```

use std::error::Error;
use std::fs;

use inkscan::preprocess::{self};
use inkscan::signatures::{export_signatures, mean_signature, render_signature_plot};
use inkscan::synth::{self, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/line_signatures");
    fs::create_dir_all(out)?;

    let spec = SynthSpec {
        rows: 160,
        cols: 128,
        bands: 24,
        n_lines: 6,
        line_to_ink: vec![0, 0, 1, 1, 2, 3],
        noise_sigma: 0.01,
        ..SynthSpec::default()
    };
    let (cube, _) = synth::generate(&spec)?;

    let image = cube.band(5)?;
    let threshold = preprocess::otsu_threshold(&image, 256)?;
    let mask = preprocess::binarize(&image, threshold, true);
    let regions = preprocess::segment_lines(&mask, 3, 5)?;
    println!("found {} text lines:", regions.len());

    let mut signatures = Vec::new();
    for region in &regions {
        let signature = mean_signature(&cube, &mask, region)?;
        println!(
            "  line {} rows {}..{} ({} ink pixels)",
            region.line_id, region.row_start, region.row_end, signature.pixel_count,
        );
        signatures.push(signature);
    }

    fs::write(
        out.join("signatures.csv"),
        export_signatures(&signatures, cube.wavelengths_nm())?,
    )?;
    let all: Vec<usize> = signatures.iter().map(|s| s.line_id).collect();
    fs::write(
        out.join("signatures.svg"),
        render_signature_plot(&signatures, cube.wavelengths_nm(), &all)?,
    )?;
    println!("artifacts in {}", out.display());
    Ok(())
}
