//! Randomized invariants over the core operations: format roundtrips,
//! preprocessing algebra, clustering determinism, and generator bounds.

use proptest::prelude::*;

use inkscan::cube::{GrayImage, HyperCube};
use inkscan::envi::{self, ByteOrder, Interleave};
use inkscan::kmeans::{self, ClusterModel, InitStrategy, KMeansConfig};
use inkscan::metrics::adjusted_rand_index;
use inkscan::plot::{line_chart, Series};
use inkscan::pngio;
use inkscan::preprocess::{self, BinaryMask, LineRegion, Rect};
use inkscan::signatures::mean_signature;
use inkscan::synth::{self, InkParams, SynthSpec};

/// Values exactly representable in f32, so ENVI roundtrips can demand
/// bit equality.
fn f32_value() -> impl Strategy<Value = f64> {
    (-512i32..=512).prop_map(|v| v as f64 / 64.0)
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..5, 1usize..5)
}

fn cube_strategy() -> impl Strategy<Value = HyperCube> {
    dims().prop_flat_map(|(rows, cols, bands)| {
        prop::collection::vec(f32_value(), rows * cols * bands)
            .prop_map(move |data| HyperCube::new(rows, cols, bands, None, data).unwrap())
    })
}

fn image_strategy() -> impl Strategy<Value = GrayImage> {
    (1usize..8, 1usize..8).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(-100.0f64..100.0, rows * cols)
            .prop_map(move |values| GrayImage::new(rows, cols, values).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn envi_roundtrip_preserves_the_cube(
        cube in cube_strategy(),
        which in 0usize..3,
        big in any::<bool>(),
    ) {
        let interleave = Interleave::ALL[which];
        let byte_order = if big { ByteOrder::Big } else { ByteOrder::Little };
        let (header_text, raw) = envi::write_cube(&cube, interleave, byte_order);
        let header = envi::parse_envi_header(&header_text).unwrap();
        prop_assert_eq!(header.interleave, interleave);
        prop_assert_eq!(header.byte_order, byte_order);
        let back = envi::load_cube(&header, &raw).unwrap();
        prop_assert_eq!(back, cube);
    }

    #[test]
    fn full_crop_is_the_identity(cube in cube_strategy()) {
        let back = preprocess::crop(&cube, Rect::full(&cube)).unwrap();
        prop_assert_eq!(back, cube);
    }

    #[test]
    fn crop_matches_direct_indexing(
        cube in cube_strategy(),
        sel in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
    ) {
        let top = (sel.0 * cube.rows() as f64) as usize;
        let left = (sel.1 * cube.cols() as f64) as usize;
        let height = 1 + (sel.2 * (cube.rows() - top - 1) as f64) as usize;
        let width = 1 + (sel.3 * (cube.cols() - left - 1) as f64) as usize;
        let sub = preprocess::crop(&cube, Rect::new(top, left, height, width)).unwrap();
        prop_assert_eq!((sub.rows(), sub.cols(), sub.bands()), (height, width, cube.bands()));
        prop_assert_eq!(sub.wavelengths_nm(), cube.wavelengths_nm());
        for r in 0..height {
            for c in 0..width {
                for b in 0..cube.bands() {
                    prop_assert_eq!(sub.value(r, c, b), cube.value(top + r, left + c, b));
                }
            }
        }
    }

    #[test]
    fn binarize_splits_strictly_on_the_threshold(
        image in image_strategy(),
        threshold in -100.0f64..100.0,
        ink_is_dark in any::<bool>(),
    ) {
        let mask = preprocess::binarize(&image, threshold, ink_is_dark);
        prop_assert_eq!((mask.rows(), mask.cols()), (image.rows(), image.cols()));
        for r in 0..image.rows() {
            for c in 0..image.cols() {
                let v = image.value(r, c);
                let want = if ink_is_dark { v < threshold } else { v > threshold };
                prop_assert_eq!(mask.is_ink(r, c), want);
                if v == threshold {
                    prop_assert!(!mask.is_ink(r, c), "threshold value is background");
                }
            }
        }
    }

    #[test]
    fn suppress_background_is_idempotent_and_leaves_ink_alone(
        cube in cube_strategy(),
        seed_bits in any::<u64>(),
        fill in -2.0f64..2.0,
    ) {
        let ink: Vec<bool> = (0..cube.n_pixels()).map(|p| (seed_bits >> (p % 64)) & 1 == 1).collect();
        let mask = BinaryMask::new(cube.rows(), cube.cols(), ink).unwrap();
        let once = preprocess::suppress_background(&cube, &mask, fill).unwrap();
        let twice = preprocess::suppress_background(&once, &mask, fill).unwrap();
        prop_assert_eq!(&twice, &once);
        for p in 0..cube.n_pixels() {
            let (r, c) = (p / cube.cols(), p % cube.cols());
            for b in 0..cube.bands() {
                let want = if mask.is_ink(r, c) { cube.value(r, c, b) } else { fill };
                prop_assert_eq!(once.value(r, c, b), want);
            }
        }
    }

    #[test]
    fn segment_lines_respects_gap_and_height_rules(
        ink_rows in prop::collection::vec(any::<bool>(), 1..40),
        min_gap_rows in 1usize..4,
        min_line_rows in 1usize..5,
    ) {
        let rows = ink_rows.len();
        let cols = 4usize;
        let ink: Vec<bool> = (0..rows * cols).map(|p| ink_rows[p / cols] && p % cols == 1).collect();
        let mask = BinaryMask::new(rows, cols, ink).unwrap();
        let result = preprocess::segment_lines(&mask, min_gap_rows, min_line_rows);
        if !ink_rows.iter().any(|&b| b) {
            prop_assert!(result.is_err(), "inkless mask must be rejected");
            return Ok(());
        }
        let regions = result.unwrap();
        for (i, region) in regions.iter().enumerate() {
            prop_assert_eq!(region.line_id, i + 1);
            prop_assert!(region.row_start < region.row_end);
            prop_assert!(region.row_end <= rows);
            prop_assert!(region.height() >= min_line_rows);
            prop_assert!(ink_rows[region.row_start], "region must start on an ink row");
            prop_assert!(ink_rows[region.row_end - 1], "region must end on an ink row");
        }
        for pair in regions.windows(2) {
            prop_assert!(
                pair[1].row_start - pair[0].row_end >= min_gap_rows,
                "regions closer than the bridge distance must have merged"
            );
        }
    }

    #[test]
    fn histogram_accounts_for_every_pixel(
        image in image_strategy(),
        n_bins in 1usize..16,
    ) {
        let hist = preprocess::histogram(&image, n_bins).unwrap();
        let (min, max) = image.min_max();
        prop_assert_eq!(hist.degenerate, min == max);
        prop_assert_eq!(hist.total(), (image.rows() * image.cols()) as u64);
        prop_assert_eq!(hist.bin_edges.len(), hist.n_bins() + 1);
        prop_assert!(hist.bin_edges.windows(2).all(|w| w[0] < w[1]));
        if !hist.degenerate {
            prop_assert_eq!(hist.n_bins(), n_bins);
            prop_assert_eq!(hist.bin_edges[0], min);
            prop_assert_eq!(hist.bin_edges[n_bins], max);
        }
    }

    #[test]
    fn otsu_picks_an_interior_bin_edge(
        image in image_strategy(),
        n_bins in 2usize..64,
    ) {
        let (min, max) = image.min_max();
        prop_assume!(min != max);
        let threshold = preprocess::otsu_threshold(&image, n_bins).unwrap();
        let hist = preprocess::histogram(&image, n_bins).unwrap();
        prop_assert!(
            hist.bin_edges[1..n_bins].contains(&threshold),
            "threshold {threshold} is not an interior edge"
        );
    }

    #[test]
    fn ari_is_symmetric_bounded_and_one_on_itself(
        a in prop::collection::vec(0i64..4, 2..30),
        b_bits in any::<u128>(),
    ) {
        let b: Vec<i64> = (0..a.len()).map(|i| ((b_bits >> (i % 126)) & 3) as i64).collect();
        let ab = adjusted_rand_index(&a, &b);
        let ba = adjusted_rand_index(&b, &a);
        prop_assert!((ab - ba).abs() <= 1e-12, "asymmetric: {ab} vs {ba}");
        prop_assert!(ab <= 1.0 + 1e-12);
        prop_assert!(ab >= -1.0 - 1e-12);
        prop_assert_eq!(adjusted_rand_index(&a, &a), 1.0);
    }

    #[test]
    fn gray_png_roundtrips_through_a_reference_decoder(
        (rows, cols) in (1usize..8, 1usize..8),
        fill_bits in any::<u64>(),
    ) {
        let pixels: Vec<u8> = (0..rows * cols).map(|p| (fill_bits >> (p % 57)) as u8).collect();
        let png = pngio::encode_gray8(rows, cols, &pixels);
        let decoded = image::load_from_memory(&png).unwrap().to_luma8();
        prop_assert_eq!((decoded.height() as usize, decoded.width() as usize), (rows, cols));
        prop_assert_eq!(decoded.as_raw().as_slice(), pixels.as_slice());
    }

    #[test]
    fn rgb_png_roundtrips_through_a_reference_decoder(
        (rows, cols) in (1usize..8, 1usize..8),
        fill_bits in any::<u64>(),
    ) {
        let pixels: Vec<u8> = (0..rows * cols * 3).map(|p| (fill_bits >> (p % 57)) as u8).collect();
        let png = pngio::encode_rgb8(rows, cols, &pixels);
        let decoded = image::load_from_memory(&png).unwrap().to_rgb8();
        prop_assert_eq!((decoded.height() as usize, decoded.width() as usize), (rows, cols));
        prop_assert_eq!(decoded.as_raw().as_slice(), pixels.as_slice());
    }

    #[test]
    fn label_map_roundtrips(
        (rows, cols) in (1usize..6, 1usize..6),
        label_bits in any::<u64>(),
    ) {
        let labels: Vec<u32> = (0..rows * cols).map(|p| ((label_bits >> (p % 61)) & 7) as u32).collect();
        let model = ClusterModel {
            k: 8,
            centroids: vec![vec![0.0]; 8],
            labels: labels.clone(),
            rows,
            cols,
            iterations_run: 1,
            sse: 0.0,
            converged: true,
        };
        let bytes = kmeans::encode_label_map(&model).unwrap();
        prop_assert_eq!(bytes.len(), 16 + rows * cols);
        let (r, c, payload) = kmeans::decode_label_map(&bytes).unwrap();
        prop_assert_eq!((r, c), (rows, cols));
        let as_u8: Vec<u8> = labels.iter().map(|&l| l as u8).collect();
        prop_assert_eq!(payload, as_u8);
    }

    #[test]
    fn ground_truth_map_roundtrips(
        (rows, cols) in (1usize..6, 1usize..6),
        label_bits in any::<u64>(),
    ) {
        let ink_label: Vec<i8> = (0..rows * cols)
            .map(|p| (((label_bits >> (p % 61)) & 7) as i8) - 2)
            .collect();
        let truth = synth::GroundTruth {
            rows,
            cols,
            ink_label: ink_label.clone(),
            line_regions: Vec::new(),
        };
        let bytes = synth::encode_gt_map(&truth);
        let (r, c, labels) = synth::decode_gt_map(&bytes).unwrap();
        prop_assert_eq!((r, c), (rows, cols));
        prop_assert_eq!(labels, ink_label);
    }

    #[test]
    fn line_chart_draws_one_polyline_per_series(
        n_points in 2usize..8,
        n_series in 1usize..5,
        y_bits in any::<u64>(),
    ) {
        let xs: Vec<f64> = (0..n_points).map(|i| i as f64).collect();
        let ys: Vec<Vec<f64>> = (0..n_series)
            .map(|s| (0..n_points).map(|i| ((y_bits >> ((s * n_points + i) % 60)) & 15) as f64).collect())
            .collect();
        let series: Vec<Series> = ys
            .iter()
            .enumerate()
            .map(|(i, ys)| Series { label: format!("s{i}"), ys })
            .collect();
        let svg = line_chart("t", "x", "y", &xs, &series);
        prop_assert!(svg.starts_with("<svg"));
        prop_assert!(svg.trim_end().ends_with("</svg>"));
        prop_assert_eq!(svg.matches("<polyline").count(), n_series);
    }

    #[test]
    fn mean_signature_stays_within_band_bounds(
        cube in cube_strategy(),
        seed_bits in any::<u64>(),
    ) {
        let mut ink: Vec<bool> = (0..cube.n_pixels()).map(|p| (seed_bits >> (p % 64)) & 1 == 1).collect();
        ink[0] = true;
        let mask = BinaryMask::new(cube.rows(), cube.cols(), ink).unwrap();
        let region = LineRegion { line_id: 1, row_start: 0, row_end: cube.rows() };
        let signature = mean_signature(&cube, &mask, &region).unwrap();
        prop_assert_eq!(signature.pixel_count, mask.count_ink());
        prop_assert_eq!(signature.mean_reflectance.len(), cube.bands());
        for b in 0..cube.bands() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for r in 0..cube.rows() {
                for c in 0..cube.cols() {
                    if mask.is_ink(r, c) {
                        lo = lo.min(cube.value(r, c, b));
                        hi = hi.max(cube.value(r, c, b));
                    }
                }
            }
            prop_assert!(signature.mean_reflectance[b] >= lo - 1e-12);
            prop_assert!(signature.mean_reflectance[b] <= hi + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kmeans_is_deterministic_and_centroids_are_cluster_means(
        cube in cube_strategy(),
        k in 1usize..5,
        seed in any::<u64>(),
        kmeanspp in any::<bool>(),
    ) {
        // distinct spectra guarantee kmeans++ can always draw k centers
        let mut data = cube.data().to_vec();
        for (i, v) in data.iter_mut().enumerate() {
            *v += (i / cube.bands()) as f64 * 1e-3;
        }
        let cube = HyperCube::new(cube.rows(), cube.cols(), cube.bands(), None, data).unwrap();
        prop_assume!(cube.n_pixels() >= k);
        let config = KMeansConfig {
            k,
            max_iterations: 50,
            seed,
            init_strategy: if kmeanspp { InitStrategy::KMeansPlusPlus } else { InitStrategy::UniformSpread },
        };
        let model = kmeans::run_kmeans(&cube, &config).unwrap();
        prop_assert_eq!(model.labels.len(), cube.n_pixels());
        prop_assert!(model.labels.iter().all(|&l| (l as usize) < k));
        prop_assert!(model.iterations_run >= 1 && model.iterations_run <= 50);
        prop_assert!(model.sse.is_finite() && model.sse >= 0.0);

        let again = kmeans::run_kmeans(&cube, &config).unwrap();
        prop_assert_eq!(&again, &model);

        // non-empty clusters: centroid equals the ascending-order mean exactly
        for c in 0..k {
            let members: Vec<usize> = (0..cube.n_pixels())
                .filter(|&p| model.labels[p] as usize == c)
                .collect();
            if members.is_empty() {
                continue;
            }
            for b in 0..cube.bands() {
                let mut sum = 0.0f64;
                for &p in &members {
                    sum += cube.data()[p * cube.bands() + b];
                }
                prop_assert_eq!(model.centroids[c][b], sum / members.len() as f64);
            }
        }
    }

    #[test]
    fn synthetic_documents_are_bounded_and_deterministic(
        n_lines in 1usize..4,
        extra_rows in 0usize..12,
        cols in 64usize..96,
        bands in 2usize..8,
        n_inks in 1usize..4,
        seed in any::<u64>(),
        noisy in any::<bool>(),
    ) {
        let spec = SynthSpec {
            rows: n_lines * 18 + extra_rows,
            cols,
            bands,
            n_lines,
            line_to_ink: (0..n_lines).map(|l| l % n_inks).collect(),
            ink_params: (0..n_inks)
                .map(|i| InkParams {
                    center_nm: 520.0 + 60.0 * i as f64,
                    width_nm: 35.0 + 10.0 * i as f64,
                    depth: 0.4 + 0.15 * i as f64,
                })
                .collect(),
            noise_sigma: if noisy { 0.02 } else { 0.0 },
            seed,
            ..SynthSpec::default()
        };
        let (cube, truth) = synth::generate(&spec).unwrap();
        prop_assert_eq!((cube.rows(), cube.cols(), cube.bands()), (spec.rows, spec.cols, spec.bands));
        prop_assert!(cube.data().iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert_eq!(truth.ink_label.len(), spec.rows * spec.cols);
        prop_assert!(truth
            .ink_label
            .iter()
            .all(|&l| l == -1 || l == -2 || (0..n_inks as i8).contains(&l)));
        prop_assert_eq!(truth.line_regions.len(), n_lines);
        for (i, region) in truth.line_regions.iter().enumerate() {
            prop_assert_eq!(region.line_id, i + 1);
            prop_assert!(region.row_start < region.row_end && region.row_end <= spec.rows);
        }

        let (cube2, truth2) = synth::generate(&spec).unwrap();
        prop_assert_eq!(cube2, cube);
        prop_assert_eq!(truth2.ink_label, truth.ink_label);
    }
}
