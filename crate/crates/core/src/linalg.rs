//! Small dense helpers on top of faer.

use faer::{c64, Mat};

use crate::{Error, Result};

pub type CMat = Mat<c64>;

pub fn zeros(n: usize, m: usize) -> CMat {
    Mat::zeros(n, m)
}

pub fn from_real(a: &Mat<f64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| c64::new(a[(i, j)], 0.0))
}

pub fn real_part(a: &CMat) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re)
}

pub fn conj(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

/// True when every imaginary part is at most `tol` in magnitude.
pub fn is_real(a: &CMat, tol: f64) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].im.abs() <= tol))
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// max |a_ij - conj(a_ji)|
pub fn hermitian_residual(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut r = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            r = r.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    r
}

/// max |a_ij - a_ji|
pub fn symmetric_residual(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut r = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            r = r.max((a[(i, j)] - a[(j, i)]).norm());
        }
    }
    r
}

pub fn hermitian_part(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        (a[(i, j)] + a[(j, i)].conj()) * 0.5
    })
}

pub fn symmetric_part(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)]) * 0.5)
}

pub fn submatrix(a: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

pub fn check_square(a: &CMat, n: usize, what: &str) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected {n}x{n}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Singular values in descending order, min(m, n) of them.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    let s = if is_real(a, 0.0) {
        real_part(a).singular_values()
    } else {
        a.singular_values()
    }
    .map_err(|e| Error::NumericalFailure(format!("svd: {e:?}")))?;
    let mut s: Vec<f64> = s.into_iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Thin SVD: (U, sigma, V) with a = U diag(sigma) V^dagger, sigma descending.
pub fn thin_svd(a: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let svd = a
        .thin_svd()
        .map_err(|e| Error::NumericalFailure(format!("svd: {e:?}")))?;
    let k = a.nrows().min(a.ncols());
    let s: Vec<f64> = (0..k)
        .map(|i| svd.S().column_vector()[i].re.max(0.0))
        .collect();
    Ok((svd.U().to_owned(), s, svd.V().to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_of_hermitian_matrix_vanish() {
        let a = Mat::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new(i as f64, 0.0)
            } else if i < j {
                c64::new(1.0, (i + j) as f64)
            } else {
                c64::new(1.0, -((i + j) as f64))
            }
        });
        assert_eq!(hermitian_residual(&a), 0.0);
        assert!(symmetric_residual(&a) > 1.0);
    }

    #[test]
    fn svd_of_diagonal_is_sorted_abs() {
        let a = Mat::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new([-1.0, 3.0, 2.0][i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let s = singular_values(&a).unwrap();
        assert!(
            (s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14
        );
    }

    #[test]
    fn empty_svd() {
        assert!(singular_values(&zeros(0, 4)).unwrap().is_empty());
    }
}
