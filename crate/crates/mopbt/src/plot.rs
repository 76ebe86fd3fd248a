//! Minimal deterministic SVG charts. Hand-rolled on purpose: the output
//! must be byte-stable across reruns for the determinism contract, which
//! rules out anything that embeds timestamps or generator metadata.

use std::fmt::Write as _;
use std::path::Path;

use crate::Result;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// One named line or point set.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points }
    }
}

/// Connected polylines, one per series — used for log-gap curves.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    chart(title, x_label, y_label, series, true)
}

/// Unconnected markers, one color per series — used for 2D fronts.
pub fn scatter_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    chart(title, x_label, y_label, series, false)
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg)?;
    Ok(())
}

fn finite_points(series: &[Series]) -> impl Iterator<Item = (f64, f64)> + '_ {
    series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
}

fn bounds(series: &[Series]) -> ((f64, f64), (f64, f64)) {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for (px, py) in finite_points(series) {
        x = (x.0.min(px), x.1.max(px));
        y = (y.0.min(py), y.1.max(py));
    }
    if x.0 > x.1 {
        return ((0.0, 1.0), (0.0, 1.0));
    }
    let pad = |(lo, hi): (f64, f64)| {
        if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            let p = 0.05 * (hi - lo);
            (lo - p, hi + p)
        }
    };
    (pad(x), pad(y))
}

/// Tick label with up to four decimals and no trailing zeros.
fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let formatted = if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    };
    if formatted.contains('.') && !formatted.contains('e') {
        formatted.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        formatted
    }
}

fn chart(title: &str, x_label: &str, y_label: &str, series: &[Series], connect: bool) -> String {
    let ((x_lo, x_hi), (y_lo, y_hi)) = bounds(series);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = write!(svg, "\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = write!(
        svg,
        "\n<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    );

    // Axes and ticks.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = write!(
        svg,
        "\n<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>",
        x0 + plot_w
    );
    let _ = write!(
        svg,
        "\n<line x1=\"{x0:.1}\" y1=\"{:.1}\" x2=\"{x0:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>",
        MARGIN_TOP
    );
    for i in 0..=4 {
        let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let px = sx(fx);
        let _ = write!(
            svg,
            "\n<line x1=\"{px:.1}\" y1=\"{y0:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = write!(
            svg,
            "\n<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            y0 + 20.0,
            fmt_tick(fx)
        );
        let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let py = sy(fy);
        let _ = write!(
            svg,
            "\n<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = write!(
            svg,
            "\n<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            x0 - 9.0,
            py + 4.0,
            fmt_tick(fy)
        );
    }
    let _ = write!(
        svg,
        "\n<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = write!(
        svg,
        "\n<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    // Data.
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .copied()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        if connect && pts.len() > 1 {
            let mut attr = String::new();
            for (x, y) in &pts {
                let _ = write!(attr, "{:.1},{:.1} ", sx(*x), sy(*y));
            }
            let _ = write!(
                svg,
                "\n<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                attr.trim_end()
            );
        } else {
            for (x, y) in &pts {
                let _ = write!(
                    svg,
                    "\n<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>",
                    sx(*x),
                    sy(*y)
                );
            }
        }
        // Legend entry.
        let ly = MARGIN_TOP + 16.0 * idx as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = write!(
            svg,
            "\n<rect x=\"{lx:.1}\" y=\"{:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/>",
            ly - 10.0
        );
        let _ = write!(
            svg,
            "\n<text x=\"{:.1}\" y=\"{ly:.1}\">{}</text>",
            lx + 18.0,
            escape(&s.label)
        );
    }
    svg.push_str("\n</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Series> {
        vec![
            Series::new("alpha", vec![(0.0, -1.0), (10.0, -3.0), (20.0, -5.5)]),
            Series::new("beta", vec![(0.0, -0.5), (10.0, -1.0)]),
        ]
    }

    #[test]
    fn charts_are_deterministic() {
        let a = line_chart("gap", "time (s)", "log10 gap", &sample());
        let b = line_chart("gap", "time (s)", "log10 gap", &sample());
        assert_eq!(a, b);
    }

    #[test]
    fn line_chart_draws_one_polyline_per_series() {
        let svg = line_chart("gap", "time (s)", "log10 gap", &sample());
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("alpha") && svg.contains("beta"));
        assert!(svg.contains("log10 gap"));
        assert!(svg.starts_with("<svg ") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn scatter_chart_draws_one_circle_per_point() {
        let svg = scatter_chart("front", "f1", "f2", &sample());
        assert_eq!(svg.matches("<circle").count(), 5);
        assert!(svg.contains(">f1</text>") && svg.contains(">f2</text>"));
    }

    #[test]
    fn degenerate_inputs_still_render() {
        let svg = line_chart("empty", "x", "y", &[]);
        assert!(svg.contains("</svg>"));
        let one = scatter_chart("one", "x", "y", &[Series::new("s", vec![(1.0, 1.0)])]);
        assert!(one.contains("<circle"));
        let with_nan = line_chart(
            "nan",
            "x",
            "y",
            &[Series::new("s", vec![(0.0, f64::NAN), (1.0, 2.0), (2.0, 3.0)])],
        );
        assert_eq!(with_nan.matches("<polyline").count(), 1);
    }

    #[test]
    fn tick_labels_are_compact() {
        assert_eq!(fmt_tick(0.0), "0");
        assert_eq!(fmt_tick(2.5), "2.5");
        assert_eq!(fmt_tick(2.50004), "2.5");
        assert_eq!(fmt_tick(-12.0), "-12");
        assert_eq!(fmt_tick(123456.0), "1.23e5");
    }

    #[test]
    fn labels_are_escaped() {
        let svg = line_chart("a < b & c", "x", "y", &sample());
        assert!(svg.contains("a &lt; b &amp; c"));
    }
}
