//! Deterministic SVG line charts and the standard figure set built from sweep
//! and frontier tables.

use std::fmt::Write as _;

use crate::dat::DatTable;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const TICKS: usize = 5;
const PALETTE: [&str; 7] = [
    "#0072bd", "#d95319", "#edb120", "#7e2f8e", "#77ac30", "#4dbeee", "#a2142f",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Axis ranges; `None` fits the data.
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range: None,
            y_range: None,
            series: Vec::new(),
        }
    }

    fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|(x, y)| x.is_finite() && y.is_finite())
    }

    fn ranges(&self) -> Result<((f64, f64), (f64, f64))> {
        let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
        let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
        let mut any = false;
        for (x, y) in self.finite_points() {
            any = true;
            xs = (xs.0.min(x), xs.1.max(x));
            ys = (ys.0.min(y), ys.1.max(y));
        }
        if !any {
            return Err(Error::Empty("chart data"));
        }
        let widen = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        Ok((
            self.x_range.unwrap_or_else(|| widen(xs)),
            self.y_range.unwrap_or_else(|| widen(ys)),
        ))
    }

    pub fn to_svg(&self) -> Result<String> {
        let ((x0, x1), (y0, y1)) = self.ranges()?;
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
        );
        for k in 0..=TICKS {
            let f = k as f64 / TICKS as f64;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 19.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (k, series) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let dash = if series.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let pts = thin(&series.points, (x1 - x0) / 1000.0, (y1 - y0) / 1000.0);
            if !pts.is_empty() {
                let coords: Vec<String> = pts
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                    coords.join(" ")
                );
            }
            let ly = TOP + 10.0 + 18.0 * k as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 22.0,
                lx + 28.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

fn tick(v: f64) -> String {
    let r = format!("{v:.2}");
    if r == "-0.00" {
        "0.00".into()
    } else {
        r
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Drop non-finite points and points closer than `(dx, dy)` to the last kept
/// one; the final point is always kept.
fn thin(points: &[(f64, f64)], dx: f64, dy: f64) -> Vec<(f64, f64)> {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &p) in finite.iter().enumerate() {
        let keep = match out.last() {
            None => true,
            Some(&(lx, ly)) => {
                i + 1 == finite.len() || (p.0 - lx).abs() >= dx || (p.1 - ly).abs() >= dy
            }
        };
        if keep {
            out.push(p);
        }
    }
    out
}

fn pairs(t: &DatTable, x: &str, y: &str) -> Option<Vec<(f64, f64)>> {
    let xs = t.column(x)?;
    let ys = t.column(y)?;
    Some(xs.into_iter().zip(ys).collect())
}

fn label(t: &DatTable, fallback: &str) -> String {
    t.meta("classifier")
        .or_else(|| t.meta("strategy"))
        .unwrap_or(fallback)
        .to_string()
}

/// Figures for a set of named `.dat` tables: per-rate accuracy, kappa, d and
/// delta curves for sweep tables, and accuracy-versus-d plus kappa-versus-delta
/// curves for frontier tables. Returns `(file name, svg)` pairs.
pub fn standard_figures(tables: &[(String, DatTable)]) -> Result<Vec<(String, String)>> {
    let sweeps: Vec<&(String, DatTable)> = tables
        .iter()
        .filter(|(_, t)| t.meta("kind") == Some("sweep"))
        .collect();
    let frontiers: Vec<&(String, DatTable)> = tables
        .iter()
        .filter(|(_, t)| t.meta("kind") == Some("frontier"))
        .collect();
    if sweeps.is_empty() && frontiers.is_empty() {
        return Err(Error::Empty("sweep or frontier tables"));
    }
    let mut figures = Vec::new();

    if let Some((_, first)) = sweeps.first() {
        let unit = Some((0.0, 1.0));
        let specs = [
            ("accuracy", "Accuracy", "accuracy"),
            ("kappa", "Cohen's kappa", "kappa"),
            ("discrimination", "Discrimination d", "d"),
            ("delta", "Normalized discrimination", "delta"),
        ];
        for (file, title, col) in specs {
            let mut chart = Chart::new(title, "acceptance rate", col);
            chart.x_range = unit;
            chart.y_range = if col == "accuracy" { unit } else { None };
            for (name, t) in &sweeps {
                if let Some(p) = pairs(t, "pi", col) {
                    chart.series.push(Series::new(label(t, name), p));
                }
            }
            let pis = first.column("pi").unwrap_or_default();
            match col {
                "accuracy" => {
                    let pi0 = first.column("pi_data").and_then(|c| c.first().copied());
                    if let Some(pi0) = pi0 {
                        let r = pis
                            .iter()
                            .map(|&p| (p, pi0 * p + (1.0 - pi0) * (1.0 - p)))
                            .collect();
                        chart.series.push(Series::new("random", r).dashed());
                    }
                }
                "discrimination" | "delta" => {
                    let data_col = if col == "delta" {
                        "delta_data"
                    } else {
                        "d_data"
                    };
                    if let Some(p) = pairs(first, "pi", data_col) {
                        chart.series.push(Series::new("data", p).dashed());
                    }
                }
                _ => {}
            }
            figures.push((format!("{file}.svg"), chart.to_svg()?));
        }
    }

    if !frontiers.is_empty() {
        let mut raw = Chart::new("Oracle accuracy versus discrimination", "d", "accuracy");
        let mut norm = Chart::new(
            "Oracle kappa versus normalized discrimination",
            "delta",
            "kappa",
        );
        for (name, t) in &frontiers {
            if let Some(p) = pairs(t, "d", "accuracy") {
                raw.series.push(Series::new(label(t, name), p));
            }
            if let Some(p) = pairs(t, "delta", "kappa") {
                norm.series.push(Series::new(label(t, name), p));
            }
        }
        figures.push(("frontier_accuracy.svg".into(), raw.to_svg()?));
        figures.push(("frontier_kappa.svg".into(), norm.to_svg()?));
    }
    Ok(figures)
}
