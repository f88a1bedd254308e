//! Writes a hyperspectral cube as an ENVI pair, reads it back, and prints
//! what the header says about it.
//!
//! ```sh
//! cargo run --example inspect_cube
//! ```

use std::error::Error;
use std::fs;

use inkscan::envi::{self, ByteOrder, Interleave};
use inkscan::synth::{self, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/inspect_cube");
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

    let header_path = out.join("demo.hdr");
    let data_path = envi::write_envi(&cube, Interleave::Bil, ByteOrder::Little, &header_path)?;
    println!("wrote {} and {}", header_path.display(), data_path.display());

    let header = envi::read_header(&header_path)?;
    println!(
        "{} x {} x {} ({} interleave, data type {})",
        header.lines,
        header.samples,
        header.bands,
        header.interleave.as_str(),
        header.data_type.as_str(),
    );

    let back = envi::read_envi(&header_path)?;
    // the pair stores 32-bit floats, so every value returns as its f32 rounding
    assert!(back
        .data()
        .iter()
        .zip(cube.data())
        .all(|(&b, &v)| b == (v as f32) as f64));
    assert_eq!(back.wavelengths_nm(), cube.wavelengths_nm());

    let w = back.wavelengths_nm();
    println!(
        "wavelengths {:.1}-{:.1} nm over {} bands",
        w[0],
        w[w.len() - 1],
        w.len()
    );
    for band in [0, back.bands() / 2, back.bands() - 1] {
        let (min, max) = back.band(band)?.min_max();
        println!("band {band:2}: reflectance {min:.3} to {max:.3}");
    }
    Ok(())
}
