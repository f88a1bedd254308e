//! Suppresses the paper background and clusters pixel spectra with k-means,
//! then reports how the pixels distribute over the clusters.
//!
//! ```sh
//! cargo run --example cluster_inks
//! ```

use std::error::Error;
use std::fs;

use inkscan::kmeans::{self, InitStrategy, KMeansConfig};
use inkscan::preprocess::{self};
use inkscan::synth::{self, SynthSpec};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::path::Path::new("example_output/cluster_inks");
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
    // one flat spectrum for all paper pixels keeps them out of the ink clusters
    let suppressed = preprocess::suppress_background(&cube, &mask, 1.0)?;

    // 4 inks + rule lines + background
    let config = KMeansConfig {
        k: 6,
        max_iterations: 500,
        seed: 0,
        init_strategy: InitStrategy::KMeansPlusPlus,
    };
    let model = kmeans::run_kmeans(&suppressed, &config)?;
    println!(
        "k = {}: {} iterations, sse = {:.3}, converged = {}",
        model.k, model.iterations_run, model.sse, model.converged,
    );

    let mut counts = vec![0usize; model.k];
    for &label in &model.labels {
        counts[label as usize] += 1;
    }
    for (cluster, count) in counts.iter().enumerate() {
        println!("  cluster {cluster}: {count} pixels");
    }

    fs::write(out.join("cluster_model.json"), kmeans::model_json(&model))?;
    kmeans::write_label_map(&model, &out.join("labels.bin"))?;
    fs::write(
        out.join("centroids.svg"),
        kmeans::centroid_plot(&model, cube.wavelengths_nm()),
    )?;
    println!("artifacts in {}", out.display());
    Ok(())
}
