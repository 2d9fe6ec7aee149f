//! Deterministic CSV output: `#`-prefixed header comments recording the
//! full parameter set, fixed column names, floats at 12 significant
//! digits. Identical inputs produce byte-identical files.

use std::fmt::Write as _;

/// 12 significant digits in scientific notation. Negative zero is
/// normalized so arithmetically equal values always format identically.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// One output cell: masked values (undefined rates) print as `nan`.
pub fn format_cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format_float(v),
        _ => "nan".to_string(),
    }
}

/// Render a full CSV document: comment block, column header, rows.
pub fn render_csv(comments: &[String], columns: &[&str], rows: &[Vec<Option<f64>>]) -> String {
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let rendered: Vec<String> = row.iter().map(|&v| format_cell(v)).collect();
        let _ = writeln!(out, "{}", rendered.join(","));
    }
    out
}
