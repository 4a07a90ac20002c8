//! Text formats shared by the library and the command line.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Fixed 17-significant-digit scientific notation (lossless for `f64`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Nested arrays of `[re, im]` pairs, one inner array per row.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &DMatrix<Complex64>) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<DMatrix<Complex64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(invalid("matrix", "empty matrix"));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(invalid("matrix", "rows have different lengths"));
    }
    if rows.iter().flatten().flatten().any(|v| !v.is_finite()) {
        return Err(invalid("matrix", "entries must be finite"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_f64(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = DMatrix::from_fn(2, 3, |i, j| Complex64::new(i as f64, -(j as f64) / 3.0));
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
        assert!(matrix_from_json(&vec![vec![[1.0, 0.0]], vec![]]).is_err());
    }
}
