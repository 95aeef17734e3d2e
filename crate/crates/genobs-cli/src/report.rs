//! Plain-text report formatting. Everything is pinned to 15 fixed decimals
//! so reports are byte-stable across runs and platforms; the golden-file
//! tests depend on that.

use genobs::matrix::ComplexMatrix;

/// Fixed 15-decimal rendering; values that round to zero lose their sign.
pub fn fmt15(x: f64) -> String {
    let s = format!("{x:.15}");
    if s.starts_with('-') && s.bytes().all(|b| matches!(b, b'-' | b'0' | b'.')) {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn fmt_complex(z: num_complex::Complex64) -> String {
    format!("({}, {})", fmt15(z.re), fmt15(z.im))
}

pub fn matrix_lines(m: &ComplexMatrix) -> Vec<String> {
    (0..m.dim())
        .map(|i| {
            let cells: Vec<String> = (0..m.dim()).map(|j| fmt_complex(m.get(i, j))).collect();
            format!("[ {} ]", cells.join(" "))
        })
        .collect()
}

pub fn real_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| fmt15(v))
        .collect::<Vec<_>>()
        .join(" ")
}
