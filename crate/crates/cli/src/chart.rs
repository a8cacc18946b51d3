//! Standalone SVG line charts, one polyline per series, with legend and
//! optional logarithmic y axis. No plotting dependency; the output is a
//! plain 800x500 document meant for eyeballing experiment results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points }
    }
}

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("chart needs at least one non-empty series")]
    EmptySeries,
    #[error("series {series:?} has a non-finite or non-plottable point ({x}, {y})")]
    NonFiniteValue { series: String, x: f64, y: f64 },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if (0.001..100_000.0).contains(&magnitude) {
        let s = format!("{v:.4}");
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Renders the chart document. With `log_y`, every y value must be strictly
/// positive; any non-finite coordinate is rejected.
pub fn render_svg(
    series: &[Series],
    x_label: &str,
    y_label: &str,
    log_y: bool,
) -> Result<String, ChartError> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(ChartError::EmptySeries);
    }
    for s in series {
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() || (log_y && y <= 0.0) {
                return Err(ChartError::NonFiniteValue { series: s.name.clone(), x, y });
            }
        }
    }

    let y_value = |y: f64| if log_y { y.log10() } else { y };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y_value(y));
            y_max = y_max.max(y_value(y));
        }
    }
    if x_max == x_min {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_max == y_min {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad_y = 0.05 * (y_max - y_min);
    y_min -= pad_y;
    y_max += pad_y;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let py = MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;
        (px, py)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Frame.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    // Ticks and grid lines.
    let n_ticks = 5usize;
    for i in 0..=n_ticks {
        let t = i as f64 / n_ticks as f64;
        let x = x_min + t * (x_max - x_min);
        let (px, _) = to_px(x, y_min);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 6.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle" font-family="sans-serif">{}</text>"#,
            MARGIN_TOP + plot_h + 20.0,
            fmt_num(x)
        );

        let y = y_min + t * (y_max - y_min);
        let (_, py) = to_px(x_min, y);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        );
        let label = if log_y { format!("1e{}", fmt_num(y)) } else { fmt_num(y) };
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{py:.2}" font-size="12" text-anchor="end" dominant-baseline="middle" font-family="sans-serif">{label}</text>"#,
            MARGIN_LEFT - 8.0
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle" font-family="sans-serif">{x_label}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-size="14" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Series polylines and legend.
    for (index, s) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y_value(y));
            let _ = write!(points, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.trim_end()
        );

        let legend_x = MARGIN_LEFT + plot_w + 12.0;
        let legend_y = MARGIN_TOP + 14.0 + index as f64 * 20.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 24.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{legend_y:.2}" font-size="12" dominant-baseline="middle" font-family="sans-serif">{}</text>"#,
            legend_x + 30.0,
            s.name
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the chart, returning the path written.
pub fn write_svg_chart(
    series: &[Series],
    x_label: &str,
    y_label: &str,
    log_y: bool,
    path: &Path,
) -> Result<PathBuf, ChartError> {
    let svg = render_svg(series, x_label, y_label, log_y)?;
    fs::write(path, svg)?;
    Ok(path.to_path_buf())
}
