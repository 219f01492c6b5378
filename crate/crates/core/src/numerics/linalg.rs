//! Singular values of small dense complex matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration limit for [`top_singular_value`].
pub const POWER_MAX_ITER: usize = 20_000;

const BLOCK: usize = 4;

/// Largest singular value by block power iteration on `M*M`.
///
/// The first start column is the normalized all-ones vector; the remaining
/// columns are fixed cosine perturbations so that the block cannot be
/// orthogonal to the dominant singular subspace by accident (the all-ones
/// vector alone is, for instance, for any antisymmetric Toeplitz matrix).
/// The estimate is the largest Ritz value of the block.
pub fn top_singular_value(m: &DMatrix<Complex64>) -> Result<f64> {
    check_finite(m)?;
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return Ok(0.0);
    }
    let b = BLOCK.min(n);
    let mut v = DMatrix::<Complex64>::from_fn(n, b, |i, c| {
        if c == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            let x = (i as f64 + 0.5) * (c as f64) * 0.618_033_988_749_895;
            Complex64::new((std::f64::consts::TAU * x).cos(), 0.0)
        }
    });
    v = orthonormalize(v);

    let mut prev = f64::NAN;
    let mut stable = 0;
    for _ in 0..POWER_MAX_ITER {
        let mv = m * &v;
        let gram = mv.adjoint() * &mv;
        let sigma = top_eigenvalue(&gram).max(0.0).sqrt();
        if sigma == 0.0 {
            return Ok(0.0);
        }
        if (sigma - prev).abs() <= 1e-15 * sigma {
            stable += 1;
            if stable >= 3 {
                return Ok(sigma);
            }
        } else {
            stable = 0;
        }
        prev = sigma;
        v = orthonormalize(m.adjoint() * mv);
    }
    Err(Error::no_conv(
        "top_singular_value",
        format!("power iteration did not stabilize in {POWER_MAX_ITER} steps (last {prev:.15e})"),
    ))
}

/// All singular values in nonincreasing order (dense SVD).
pub fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_finite(m)?;
    if m.ncols() == 0 || m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::no_conv("singular_values", "SVD iteration limit reached"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn check_finite(m: &DMatrix<Complex64>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("matrix has non-finite entries"))
    }
}

fn top_eigenvalue(h: &DMatrix<Complex64>) -> f64 {
    let h = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

// Modified Gram-Schmidt; columns that collapse are replaced by unit vectors.
fn orthonormalize(mut v: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (n, b) = v.shape();
    for c in 0..b {
        for _pass in 0..2 {
            for p in 0..c {
                let proj = v.column(p).dotc(&v.column(c));
                let col_p = v.column(p).clone_owned();
                let mut col = v.column_mut(c);
                col -= col_p * proj;
            }
        }
        let norm = v.column(c).norm();
        if norm > 1e-300 {
            v.column_mut(c).unscale_mut(norm);
        } else {
            let mut col = v.column_mut(c);
            col.fill(Complex64::new(0.0, 0.0));
            col[c % n] = Complex64::new(1.0, 0.0);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn identity() {
        let m = DMatrix::<Complex64>::identity(3, 3);
        assert!((top_singular_value(&m).unwrap() - 1.0).abs() < 1e-14);
        let s = singular_values(&m).unwrap();
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_profile() {
        let m = real(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14 && s[2].abs() < 1e-14);
        assert!((top_singular_value(&m).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ones_orthogonal_to_top_vector() {
        // antisymmetric: M·1 = 0, the all-ones seed alone would stall at 0
        let m = real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!((top_singular_value(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(top_singular_value(&DMatrix::zeros(4, 4)).unwrap(), 0.0);
        assert!(singular_values(&DMatrix::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn rejects_nan() {
        let m = real(1, 1, &[f64::NAN]);
        assert!(top_singular_value(&m).is_err());
    }
}
