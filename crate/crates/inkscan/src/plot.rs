//! Minimal SVG line charts for spectral curves.
//!
//! Output is standalone SVG 1.1 with fixed geometry and `{:.2}` coordinate
//! formatting, so identical inputs always serialize to identical bytes.

/// Series colors, reused cyclically when a chart has more than twelve lines.
pub const PLOT_PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// One labeled curve sampled at shared x positions.
pub struct Series<'a> {
    pub label: String,
    pub ys: &'a [f64],
}

/// Renders labeled curves over a shared x axis as an SVG document.
///
/// Panics if a series length differs from `xs` or if everything is empty;
/// callers construct series from cube geometry, so lengths always agree.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, xs: &[f64], series: &[Series]) -> String {
    assert!(!xs.is_empty(), "chart needs at least one x sample");
    for s in series {
        assert_eq!(s.ys.len(), xs.len(), "series {:?} length mismatch", s.label);
    }

    let (x_min, x_max) = span(xs.iter().copied());
    let (y_min, y_max) = span(series.iter().flat_map(|s| s.ys.iter().copied()));

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));

    // min/max tick labels on each axis
    svg.push_str(&format!(
        "<text x=\"{x0:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>\n",
        y0 + 18.0,
        fmt_tick(x_min)
    ));
    svg.push_str(&format!(
        "<text x=\"{x1:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>\n",
        y0 + 18.0,
        fmt_tick(x_max)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"end\">{}</text>\n",
        x0 - 6.0,
        y0 + 4.0,
        fmt_tick(y_min)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"end\">{}</text>\n",
        x0 - 6.0,
        y1 + 4.0,
        fmt_tick(y_max)
    ));

    // axis titles
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PLOT_PALETTE[i % PLOT_PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(s.ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        // legend entry, stacked top-right inside the plot area
        let ly = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
             stroke=\"{color}\" stroke-width=\"3\"/>\n",
            x1 - 150.0,
            x1 - 126.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            x1 - 120.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Min and max of a non-empty value stream, widened when flat so the scale
/// transform stays finite.
fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    assert!(min.is_finite() && max.is_finite(), "chart needs finite values");
    if min == max {
        (min - 0.5, max + 0.5)
    } else {
        (min, max)
    }
}

fn fmt_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1.0e6 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_chart() -> String {
        let xs = [478.0, 600.0, 901.0];
        let a = [0.9, 0.4, 0.8];
        let b = [0.2, 0.3, 0.1];
        line_chart(
            "test",
            "wavelength (nm)",
            "reflectance",
            &xs,
            &[
                Series { label: "ink 1".into(), ys: &a },
                Series { label: "ink 2".into(), ys: &b },
            ],
        )
    }

    #[test]
    fn chart_is_wellformed_svg() {
        let svg = sample_chart();
        assert!(svg.starts_with("<svg "));
        assert!(svg.contains("xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        // every opened text element closes
        assert_eq!(svg.matches("<text").count(), svg.matches("</text>").count());
    }

    #[test]
    fn chart_shows_axis_extremes() {
        let svg = sample_chart();
        assert!(svg.contains(">478<"));
        assert!(svg.contains(">901<"));
        assert!(svg.contains(">0.100<"));
        assert!(svg.contains(">0.900<"));
    }

    #[test]
    fn identical_inputs_render_identical_bytes() {
        assert_eq!(sample_chart(), sample_chart());
    }

    #[test]
    fn labels_are_escaped() {
        let xs = [0.0, 1.0];
        let ys = [0.0, 1.0];
        let svg = line_chart(
            "a < b & c",
            "x",
            "y",
            &xs,
            &[Series { label: "s<1>".into(), ys: &ys }],
        );
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(svg.contains("s&lt;1&gt;"));
    }

    #[test]
    fn flat_series_still_renders() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.5, 0.5, 0.5];
        let svg = line_chart("flat", "x", "y", &xs, &[Series { label: "s".into(), ys: &ys }]);
        assert!(svg.contains("<polyline"));
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }
}
