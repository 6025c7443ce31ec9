//! Self-contained SVG line chart of a spectrum table.

use std::fmt::Write;

use dol_core::SpectrumTable;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn spectrum_svg(table: &SpectrumTable<f64>, title: &str) -> String {
    let series = [
        Series {
            label: "Φ(n)",
            color: "#1f77b4",
            values: table.rows.iter().map(|r| r.phi_n).collect(),
        },
        Series {
            label: "Φ(n+1)",
            color: "#2ca02c",
            values: table.rows.iter().map(|r| r.phi_n1).collect(),
        },
        Series {
            label: "E(n)",
            color: "#d62728",
            values: table.rows.iter().map(|r| r.energy).collect(),
        },
    ];
    let n_max = table.rows.last().map_or(1, |r| r.n.max(1)) as f64;
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|s| s.values.iter().copied()));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |n: f64| MARGIN_LEFT + n / n_max * plot_w;
    let py = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        MARGIN_LEFT + plot_w / 2.0
    );
    let (x0, x1, y0, y1) = (px(0.0), px(n_max), py(y_lo), py(y_hi));
    let _ = writeln!(
        out,
        r#"<polyline points="{x0:.2},{y1:.2} {x0:.2},{y0:.2} {x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for k in 0..=table.rows.len().saturating_sub(1) {
        let x = px(k as f64);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{k}</text>"#,
            y0 + 18.0
        );
    }
    for (frac, value) in [(0.0, y_lo), (0.5, (y_lo + y_hi) / 2.0), (1.0, y_hi)] {
        let y = y0 + frac * (y1 - y0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{value:.3e}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">n</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    for (i, s) in series.iter().enumerate() {
        let points: Vec<String> = table
            .rows
            .iter()
            .zip(&s.values)
            .filter(|(_, v)| v.is_finite())
            .map(|(r, &v)| format!("{:.2},{:.2}", px(r.n as f64), py(v)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            points.join(" "),
            s.color
        );
        let ly = MARGIN_TOP + 20.0 + 22.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 20.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#,
            lx + 24.0,
            s.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            s.label
        );
    }
    out.push_str("</svg>\n");
    out
}
