//! Static SVG with log-log axes, one polyline per `(N, engine)` series.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::counting::{CensusResult, Engine};

use super::CliError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22",
];

/// Points with positive counts, grouped by series.
fn series(rows: &[CensusResult]) -> BTreeMap<(u32, Engine), Vec<(f64, f64)>> {
    let mut out: BTreeMap<(u32, Engine), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.count > 0) {
        out.entry((r.level, r.engine)).or_default().push(((r.x as f64).log10(), (r.count as f64).log10()));
    }
    for pts in out.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out.retain(|_, pts| pts.len() >= 2);
    out
}

pub fn render_svg(rows: &[CensusResult]) -> Result<String, CliError> {
    let lines = series(rows);
    if lines.is_empty() {
        return Err(CliError::Usage("plot needs a series with at least two positive counts".into()));
    }
    let all = lines.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // axes with a tick per decade
    let _ = writeln!(
        s,
        r#"<path d="M{:.1},{:.1} L{:.1},{:.1} L{:.1},{:.1}" stroke="black" fill="none"/>"#,
        px(x0),
        py(y1),
        px(x0),
        py(y0),
        px(x1),
        py(y0)
    );
    for k in x0 as i64..=x1 as i64 {
        let x = px(k as f64);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{k}</text>"#,
            HEIGHT - MARGIN + 18.0
        );
    }
    for k in y0 as i64..=y1 as i64 {
        let y = py(k as f64);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">1e{k}</text>"#, MARGIN - 6.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">X (naive height bound)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">count</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (i, ((level, engine), pts)) in lines.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
            path.join(" ")
        );
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            MARGIN + 10.0,
            MARGIN + 30.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">N={level} {engine}</text>"#,
            MARGIN + 36.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_plot(rows: &[CensusResult], path: &Path) -> Result<(), CliError> {
    let svg = render_svg(rows)?;
    fs::write(path, svg).map_err(|e| CliError::io(path, e))
}
