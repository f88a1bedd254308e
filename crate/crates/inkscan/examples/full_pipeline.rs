//! Runs the whole detection pipeline through one call and prints the report:
//! crop, threshold, line segmentation, signatures, clustering, rendering.
//!
//! ```sh
//! cargo run --example full_pipeline
//! ```

use std::error::Error;

use inkscan::kmeans::InitStrategy;
use inkscan::pipeline::{self, PipelineConfig, Stage};
use inkscan::synth::{self, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/full_pipeline");

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

    let config = PipelineConfig {
        threshold_band: 5,
        k: 6,
        init_strategy: InitStrategy::KMeansPlusPlus,
        ..PipelineConfig::default()
    };
    let report = pipeline::run_pipeline(&cube, &config, out, Stage::Segment)?;

    if let Some(threshold) = report.threshold {
        println!("threshold = {threshold:.5}");
    }
    println!("{} text lines", report.regions.len());
    if let (Some(iterations), Some(sse)) = (report.iterations_run, report.sse) {
        println!(
            "k-means: {iterations} iterations, sse = {sse:.3}, converged = {}",
            report.converged.unwrap_or(false),
        );
    }
    if let Some(table) = &report.table {
        println!("{}", inkscan::segment::table_text(table));
    }
    println!("{} artifacts in {}:", report.artifacts.len(), report.out_dir.display());
    for name in &report.artifacts {
        println!("  {name}");
    }
    Ok(())
}
