//! Full clustering run rendered as a false-color segmentation image plus
//! the text-line to cluster table.
//!
//! ```sh
//! cargo run --example segment_document
//! ```

use std::error::Error;
use std::fs;

use inkscan::kmeans::{self, InitStrategy, KMeansConfig};
use inkscan::preprocess::{self};
use inkscan::segment::{self, DEFAULT_PALETTE};
use inkscan::synth::{self, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/segment_document");
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
    let (cube, truth) = synth::generate(&spec)?;

    let image = cube.band(5)?;
    let threshold = preprocess::otsu_threshold(&image, 256)?;
    let mask = preprocess::binarize(&image, threshold, true);
    let regions = preprocess::segment_lines(&mask, 3, 5)?;
    let suppressed = preprocess::suppress_background(&cube, &mask, 1.0)?;

    let config = KMeansConfig {
        k: 6,
        max_iterations: 500,
        seed: 0,
        init_strategy: InitStrategy::KMeansPlusPlus,
    };
    let model = kmeans::run_kmeans(&suppressed, &config)?;

    // paint the background cluster white so the inks stand out
    let mut palette: Vec<[u8; 3]> = DEFAULT_PALETTE.to_vec();
    if let Some(bg) = segment::background_cluster(&model, &mask) {
        palette[bg as usize] = [255, 255, 255];
    }
    let segmented = segment::colorize(&model, &palette)?;
    fs::write(out.join("segmented.png"), segment::write_png(&segmented))?;

    let table = segment::line_cluster_table(&model, &regions, &mask)?;
    println!("{}", segment::table_text(&table));
    fs::write(out.join("line_clusters.csv"), segment::table_csv(&table))?;

    // the generator's layout tells us which lines truly share an ink
    println!("true ink per line: {:?}", spec.line_to_ink);
    println!("true line rows:    {:?}", truth
        .line_regions
        .iter()
        .map(|r| (r.row_start, r.row_end))
        .collect::<Vec<_>>());
    println!("artifacts in {}", out.display());
    Ok(())
}
