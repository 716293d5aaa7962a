//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Eigenvalues from the complex Schur form (diagonal of the triangular factor).
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn solve_least_squares(a: &CMatrix, b: &nalgebra::DVector<Complex64>) -> Result<nalgebra::DVector<Complex64>> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-12)
        .map_err(|_| Error::Singular)
}

/// `0_s (+) I_{n-s}`.
pub fn tail_projection(n: usize, s: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j && i >= s {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Basis adapted to an idempotent `p` with `s` zero eigenvalues: the first `s`
/// columns span the kernel, the last `n - s` columns span the range.
///
/// Nonzero singular values of an idempotent are at least `1`, so the split
/// threshold `1/2` separates kernel from range robustly.
pub fn idempotent_basis(p: &CMatrix, s: usize) -> Result<CMatrix> {
    let n = p.nrows();
    let svd = p.clone().svd(true, true);
    let u = svd.u.as_ref().ok_or(Error::Singular)?;
    let v_t = svd.v_t.as_ref().ok_or(Error::Singular)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let rank = svd.singular_values.iter().filter(|&&x| x > 0.5).count();
    if rank != n - s {
        return Err(Error::NotIdempotent {
            eigenvalue: format!("rank {rank} inconsistent with {} unit eigenvalues", n - s),
        });
    }
    let mut basis = CMatrix::zeros(n, n);
    // smallest singular values -> kernel (rows of V^H, conjugated)
    for (col, &idx) in order.iter().take(s).enumerate() {
        for r in 0..n {
            basis[(r, col)] = v_t[(idx, r)].conj();
        }
    }
    for (offset, &idx) in order.iter().skip(s).enumerate() {
        for r in 0..n {
            basis[(r, s + offset)] = u[(r, idx)];
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(1.0, 2.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let mut ev = eigenvalues(&m);
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn oblique_projection_basis() {
        // P = [[0, 1], [0, 1]] is idempotent with kernel e1 and range (1, 1)
        let p = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(frobenius_norm(&(&p * &p - &p)) < 1e-15);
        let v = idempotent_basis(&p, 1).unwrap();
        let vinv = inverse(&v).unwrap();
        let d = &vinv * &p * &v;
        assert!(frobenius_norm(&(d - tail_projection(2, 1))) < 1e-12);
    }

    #[test]
    fn least_squares_handles_singular() {
        let a = CMatrix::from_row_slice(2, 2, &[c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let b = nalgebra::DVector::from_column_slice(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let x = solve_least_squares(&a, &b).unwrap();
        assert!((x[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!(x[1].norm() < 1e-12);
    }
}
