//! Separates ink from paper on a single band with Otsu's threshold and
//! writes the band image, its histogram, and the resulting binary mask.
//!
//! ```sh
//! cargo run --example threshold_mask
//! ```

use std::error::Error;
use std::fs;

use inkscan::cube::GrayImage;
use inkscan::pngio;
use inkscan::preprocess::{self};
use inkscan::synth::{self, SynthSpec};

fn gray_to_png(image: &GrayImage) -> Vec<u8> {
    let (min, max) = image.min_max();
    let scale = if max > min { 255.0 / (max - min) } else { 0.0 };
    let pixels: Vec<u8> = image
        .values()
        .iter()
        .map(|&v| ((v - min) * scale).round() as u8)
        .collect();
    pngio::encode_gray8(image.rows(), image.cols(), &pixels)
}

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/threshold_mask");
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

    let band = 5;
    let image = cube.band(band)?;
    fs::write(out.join("band.png"), gray_to_png(&image))?;

    let hist = preprocess::histogram(&image, 256)?;
    let mut csv = String::from("bin_start,bin_end,count\n");
    for (i, &count) in hist.counts.iter().enumerate() {
        csv.push_str(&format!("{},{},{count}\n", hist.bin_edges[i], hist.bin_edges[i + 1]));
    }
    fs::write(out.join("histogram.csv"), csv)?;

    let threshold = preprocess::otsu_threshold(&image, 256)?;
    let mask = preprocess::binarize(&image, threshold, true);
    let mask_pixels: Vec<u8> = mask.ink().iter().map(|&ink| if ink { 0 } else { 255 }).collect();
    fs::write(
        out.join("mask.png"),
        pngio::encode_gray8(mask.rows(), mask.cols(), &mask_pixels),
    )?;

    println!("band {band}: Otsu threshold = {threshold:.5}");
    println!(
        "ink pixels: {} of {} ({:.1}%)",
        mask.count_ink(),
        mask.rows() * mask.cols(),
        100.0 * mask.count_ink() as f64 / (mask.rows() * mask.cols()) as f64,
    );
    println!("artifacts in {}", out.display());
    Ok(())
}
