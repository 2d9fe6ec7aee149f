//! Minimal static SVG line charts: axes, ticks, legend, dashed reference
//! lines. No external renderer; the CSV files are the quantitative
//! contract, these are for visual comparison only.

use std::fmt::Write as _;

/// Default curve palette (black, red, blue, green, purple).
pub const PALETTE: [&str; 5] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: String,
    /// Samples in data coordinates; non-finite `y` values split the line.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Horizontal dashed reference lines, drawn in gray with a small label.
    pub ref_lines: Vec<(f64, String)>,
    pub show_legend: bool,
}

struct Bounds {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

fn data_bounds(panel: &Panel) -> Bounds {
    let mut b = Bounds {
        x_min: f64::INFINITY,
        x_max: f64::NEG_INFINITY,
        y_min: f64::INFINITY,
        y_max: f64::NEG_INFINITY,
    };
    for s in &panel.series {
        for &(x, y) in &s.points {
            if x.is_finite() {
                b.x_min = b.x_min.min(x);
                b.x_max = b.x_max.max(x);
            }
            if y.is_finite() {
                b.y_min = b.y_min.min(y);
                b.y_max = b.y_max.max(y);
            }
        }
    }
    for &(y, _) in &panel.ref_lines {
        b.y_min = b.y_min.min(y);
        b.y_max = b.y_max.max(y);
    }
    if !b.x_min.is_finite() || b.x_min == b.x_max {
        b.x_min -= 0.5;
        b.x_max += 0.5;
    }
    if !b.y_min.is_finite() || b.y_min == b.y_max {
        b.y_min -= 0.5;
        b.y_max += 0.5;
    }
    let pad = 0.05 * (b.y_max - b.y_min);
    b.y_min -= pad;
    b.y_max += pad;
    b
}

/// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` ticks.
fn nice_step(range: f64, target: usize) -> f64 {
    let raw = range / target as f64;
    let mag = 10f64.powf(raw.abs().log10().floor());
    let norm = raw / mag;
    let factor = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn ticks(min: f64, max: f64) -> (f64, Vec<f64>) {
    let step = nice_step(max - min, 5);
    let mut v = Vec::new();
    let mut t = (min / step).ceil() * step;
    while t <= max + 1e-9 * step {
        v.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    (step, v)
}

fn fmt_tick(value: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{value:.decimals$}")
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Render one panel into the SVG body, mapped onto the pixel rectangle
/// `(px, py, pw, ph)`.
fn render_panel(out: &mut String, panel: &Panel, px: f64, py: f64, pw: f64, ph: f64) {
    let b = data_bounds(panel);
    let sx = |x: f64| px + (x - b.x_min) / (b.x_max - b.x_min) * pw;
    let sy = |y: f64| py + ph - (y - b.y_min) / (b.y_max - b.y_min) * ph;

    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333" stroke-width="1"/>"##,
        fmt_coord(px),
        fmt_coord(py),
        fmt_coord(pw),
        fmt_coord(ph)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14" font-family="sans-serif">{}</text>"#,
        fmt_coord(px + pw / 2.0),
        fmt_coord(py - 8.0),
        panel.title
    );

    // Axis ticks and labels.
    let (x_step, x_ticks) = ticks(b.x_min, b.x_max);
    for t in &x_ticks {
        let x = sx(*t);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#333" stroke-width="1"/>"##,
            x = fmt_coord(x),
            y0 = fmt_coord(py + ph),
            y1 = fmt_coord(py + ph + 4.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="11" font-family="sans-serif">{}</text>"#,
            fmt_coord(x),
            fmt_coord(py + ph + 16.0),
            fmt_tick(*t, x_step)
        );
    }
    let (y_step, y_ticks) = ticks(b.y_min, b.y_max);
    for t in &y_ticks {
        let y = sy(*t);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#333" stroke-width="1"/>"##,
            x0 = fmt_coord(px - 4.0),
            x1 = fmt_coord(px),
            y = fmt_coord(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" font-size="11" font-family="sans-serif">{}</text>"#,
            fmt_coord(px - 7.0),
            fmt_coord(y + 4.0),
            fmt_tick(*t, y_step)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12" font-family="sans-serif">{}</text>"#,
        fmt_coord(px + pw / 2.0),
        fmt_coord(py + ph + 34.0),
        panel.x_label
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 {x} {y})">{label}</text>"#,
        x = fmt_coord(px - 44.0),
        y = fmt_coord(py + ph / 2.0),
        label = panel.y_label
    );

    // Dashed reference lines.
    for (y_ref, label) in &panel.ref_lines {
        let y = sy(*y_ref);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#888" stroke-width="1" stroke-dasharray="6 4"/>"##,
            x0 = fmt_coord(px),
            x1 = fmt_coord(px + pw),
            y = fmt_coord(y)
        );
        if !label.is_empty() {
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" text-anchor="start" font-size="10" font-family="sans-serif" fill="#888">{}</text>"##,
                fmt_coord(px + pw + 3.0),
                fmt_coord(y + 3.0),
                label
            );
        }
    }

    // Data series; non-finite samples split the polyline.
    for s in &panel.series {
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, out: &mut String| {
            if seg.len() >= 2 {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                    s.color,
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                segment.push(format!("{},{}", fmt_coord(sx(x)), fmt_coord(sy(y))));
            } else {
                flush(&mut segment, out);
            }
        }
        flush(&mut segment, out);
    }

    if panel.show_legend && !panel.series.is_empty() {
        let lx = px + pw - 150.0;
        let mut ly = py + 12.0;
        for s in &panel.series {
            let _ = writeln!(
                out,
                r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="{c}" stroke-width="1.5"/>"#,
                x0 = fmt_coord(lx),
                x1 = fmt_coord(lx + 22.0),
                y = fmt_coord(ly),
                c = s.color
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="start" font-size="11" font-family="sans-serif">{}</text>"#,
                fmt_coord(lx + 28.0),
                fmt_coord(ly + 4.0),
                s.label
            );
            ly += 16.0;
        }
    }
}

/// Render a figure of stacked panels (heights in the given proportions)
/// into a complete SVG document.
pub fn render_figure(panels: &[(Panel, f64)]) -> String {
    let width = 720.0;
    let height = 480.0;
    let (left, right, top, bottom) = (72.0, 46.0, 30.0, 50.0);
    let gap = 54.0;
    let total_weight: f64 = panels.iter().map(|(_, w)| w).sum();
    let usable = height - top - bottom - gap * (panels.len().saturating_sub(1)) as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" width="{width}" height="{height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let mut y = top;
    for (panel, weight) in panels {
        let ph = usable * weight / total_weight;
        render_panel(&mut out, panel, left, y, width - left - right, ph);
        y += ph + gap;
    }
    let _ = writeln!(out, "</svg>");
    out
}
