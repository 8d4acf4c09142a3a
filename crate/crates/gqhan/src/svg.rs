//! Self-contained SVG plots: training curves, noise-sweep curves and the
//! hard-attention color map.

use std::fmt::Write;

pub const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
];
pub const SELECTED: &str = "#d62728";
pub const UNSELECTED: &str = "#2ca02c";

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed y range, else fitted to the data.
    pub y_range: Option<(f64, f64)>,
}

const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 52.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn render_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let pts = || panel.series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = extent(pts().map(|p| p.0));
    let (y0, y1) = panel.y_range.unwrap_or_else(|| extent(pts().map(|p| p.1)));
    let (pw, ph) = (PANEL_W - 1.5 * MARGIN, PANEL_H - 1.6 * MARGIN);
    let (left, top) = (ox + MARGIN, oy + 0.6 * MARGIN);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        oy + 20.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{left:.1}" y="{top:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#444"/>"##
    );
    for i in 0..=4 {
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r##"<line x1="{left:.1}" y1="{y:.1}" x2="{r:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{tx:.1}" y="{ty:.1}" text-anchor="end" font-size="10">{fy:.3}</text>"##,
            y = sy(fy),
            r = left + pw,
            tx = left - 4.0,
            ty = sy(fy) + 3.0,
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
            sx(fx),
            top + ph + 14.0,
            (fx * 100.0).round() / 100.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
        left + pw / 2.0,
        top + ph + 32.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{x:.1}" y="{y:.1}" text-anchor="middle" font-size="11" transform="rotate(-90 {x:.1} {y:.1})">{}</text>"#,
        escape(&panel.y_label),
        x = ox + 12.0,
        y = top + ph / 2.0,
    );
    for (i, s) in panel.series.iter().enumerate() {
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y.clamp(y0, y1))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.6" points="{}"/>"#,
            s.color,
            path.join(" ")
        );
        let ly = top + 12.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            left + pw - 120.0,
            left + pw - 100.0,
            s.color,
            left + pw - 96.0,
            ly + 3.0,
            escape(&s.name)
        );
    }
}

/// Panels laid out side by side.
pub fn render_panels(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">"#
    );
    out.push('\n');
    out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    out.push('\n');
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut out, p, PANEL_W * i as f64, 0.0);
    }
    out.push_str("</svg>\n");
    out
}

/// One labelled row of angles with their selection flags.
#[derive(Clone, Debug)]
pub struct AttentionRow {
    pub label: String,
    pub cells: Vec<(f64, bool)>,
}

/// A grid with one cell per discrete primitive and one row per parameter
/// set; selected primitives are red, the rest green.
pub fn render_attention_map(rows: &[AttentionRow]) -> String {
    let cols = rows.iter().map(|r| r.cells.len()).max().unwrap_or(0);
    let (cell_w, cell_h, label_w, top) = (64.0, 44.0, 90.0, 30.0);
    let width = label_w + cell_w * cols as f64 + 10.0;
    let height = top + cell_h * rows.len() as f64 + 40.0;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    out.push('\n');
    out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    out.push('\n');
    for c in 0..cols {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">DP{c}</text>"#,
            label_w + cell_w * (c as f64 + 0.5),
            top - 8.0
        );
    }
    for (r, row) in rows.iter().enumerate() {
        let y = top + cell_h * r as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="12">{}</text>"#,
            label_w - 8.0,
            y + cell_h / 2.0 + 4.0,
            escape(&row.label)
        );
        for (c, &(theta, selected)) in row.cells.iter().enumerate() {
            let x = label_w + cell_w * c as f64;
            let fill = if selected { SELECTED } else { UNSELECTED };
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{cell_w:.1}" height="{cell_h:.1}" fill="{fill}" stroke="white"/><text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10" fill="white">{theta:.4}</text>"#,
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 4.0
            );
        }
    }
    let ly = top + cell_h * rows.len() as f64 + 22.0;
    let _ = writeln!(
        out,
        r#"<rect x="{label_w:.1}" y="{:.1}" width="12" height="12" fill="{SELECTED}"/><text x="{:.1}" y="{ly:.1}" font-size="11">selected (score 1)</text><rect x="{:.1}" y="{:.1}" width="12" height="12" fill="{UNSELECTED}"/><text x="{:.1}" y="{ly:.1}" font-size="11">unselected (score 0)</text>"#,
        ly - 10.0,
        label_w + 16.0,
        label_w + 150.0,
        ly - 10.0,
        label_w + 166.0,
    );
    out.push_str("</svg>\n");
    out
}
