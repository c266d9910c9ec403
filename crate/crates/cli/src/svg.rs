use std::fmt::{self, Write as _};

use sdg_core::solve_post::{loglog_slope, FIT_LEVELS};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    /// `(x, y)` pairs, both positive.
    pub points: Vec<(f64, f64)>,
}

/// A dashed guide `y = c x^slope` drawn through the data.
#[derive(Clone, Debug)]
pub struct ReferenceSlope {
    pub label: String,
    pub slope: f64,
}

#[derive(Clone, Debug, Default)]
pub struct PlotLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

#[derive(Debug, PartialEq)]
pub enum SvgError {
    Empty,
    NonPositive { label: String, x: f64, y: f64 },
}

impl fmt::Display for SvgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SvgError::Empty => f.write_str("nothing to plot"),
            SvgError::NonPositive { label, x, y } => write!(f, "series {label:?} has a non-positive point ({x}, {y})"),
        }
    }
}

impl std::error::Error for SvgError {}

/// Slope printed next to a series: least-squares fit over its finest levels.
pub fn series_slope(points: &[(f64, f64)]) -> Option<f64> {
    (points.len() >= 2).then(|| loglog_slope(&points[points.len().saturating_sub(FIT_LEVELS)..]))
}

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x.log10() - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn decade_range(lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = (lo.log10().floor(), hi.log10().ceil());
    if a == b {
        (a - 0.5, b + 0.5)
    } else {
        (a, b)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Log-log plot of `series` with dashed reference slopes. Identical input
/// gives byte-identical output.
pub fn emit_svg(series: &[Series], references: &[ReferenceSlope], labels: &PlotLabels) -> Result<String, SvgError> {
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    if all.is_empty() {
        return Err(SvgError::Empty);
    }
    for s in series {
        if let Some(&(x, y)) = s.points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0 && p.0.is_finite() && p.1.is_finite())) {
            return Err(SvgError::NonPositive { label: s.label.clone(), x, y });
        }
    }
    let fold = |f: fn(&(f64, f64)) -> f64| {
        all.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (xlo, xhi) = fold(|p| p.0);
    let (ylo, yhi) = fold(|p| p.1);
    let axes = Axes { x: decade_range(xlo, xhi), y: decade_range(ylo, yhi) };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1) = (axes.px(10f64.powf(axes.x.0)), axes.px(10f64.powf(axes.x.1)));
    let (y0, y1) = (axes.py(10f64.powf(axes.y.0)), axes.py(10f64.powf(axes.y.1)));
    let _ = writeln!(out, r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);

    for k in (axes.x.0.ceil() as i32)..=(axes.x.1.floor() as i32) {
        let x = axes.px(10f64.powi(k));
        let _ = writeln!(out, r##"<line x1="{x:.2}" y1="{y1:.2}" x2="{x:.2}" y2="{y0:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{k}</text>"#, y0 + 18.0);
    }
    for k in (axes.y.0.ceil() as i32)..=(axes.y.1.floor() as i32) {
        let y = axes.py(10f64.powi(k));
        let _ = writeln!(out, r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{k}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, 0.5 * (x0 + x1), HEIGHT - 15.0, escape(&labels.x));
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1),
        escape(&labels.y)
    );
    let _ = writeln!(out, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#, 0.5 * (x0 + x1), escape(&labels.title));

    // Guides through the finest point of the first series.
    let anchor = series.iter().find_map(|s| s.points.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0))).unwrap_or(all[0]);
    for r in references {
        let c = anchor.1 / anchor.0.powf(r.slope);
        let (ga, gb) = (xlo, xhi);
        let (ya, yb) = (c * ga.powf(r.slope) * 0.5, c * gb.powf(r.slope) * 0.5);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#777777" stroke-dasharray="6 4"/>"##,
            axes.px(ga),
            axes.py(ya),
            axes.px(gb),
            axes.py(yb)
        );
        let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}" fill="#555555">{}</text>"##, axes.px(ga) + 4.0, axes.py(ya) - 4.0, escape(&r.label));
    }

    let mut legend_y = TOP + 10.0;
    let legend_x = WIDTH - RIGHT + 15.0;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", axes.px(x), axes.py(y))).collect();
        if pts.len() > 1 {
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
        }
        for &(x, y) in &s.points {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, axes.px(x), axes.py(y));
        }
        let slope = series_slope(&s.points);
        if let (Some(slope), Some(&(x, y))) = (slope, s.points.iter().min_by(|a, b| a.0.total_cmp(&b.0))) {
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" fill="{color}" class="slope">{slope:.2}</text>"#, axes.px(x) + 6.0, axes.py(y) + 4.0);
        }
        let _ = writeln!(out, r#"<line x1="{legend_x:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{color}" stroke-width="2"/>"#, legend_x + 20.0);
        let text = match slope {
            Some(v) => format!("{} (slope {v:.2})", s.label),
            None => s.label.clone(),
        };
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, legend_x + 26.0, legend_y + 4.0, escape(&text));
        legend_y += 18.0;
    }
    out.push_str("</svg>\n");
    Ok(out)
}
