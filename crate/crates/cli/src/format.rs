//! Display rounding and plain-text table layout.

/// Rounds half-up to `precision` decimals (ties move towards +inf).
pub fn round_half_up(x: f64, precision: usize) -> f64 {
    let scale = 10f64.powi(precision as i32);
    (x * scale + 0.5).floor() / scale
}

/// `x` rounded half-up and printed with exactly `precision` decimals.
pub fn fixed(x: f64, precision: usize) -> String {
    // `+ 0.0` folds a negative zero into positive zero
    format!("{:.*}", precision, round_half_up(x, precision) + 0.0)
}

/// Right-aligned columns separated by two spaces.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line =
        |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
