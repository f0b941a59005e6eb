//! Floating-point pieces: conversions from exact matrices, entrywise norms,
//! and the cyclic Jacobi eigensolver for real symmetric matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matgrp::Matrix;
use crate::ring::{LaurentPoly, Scalar};

pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const JACOBI_TOL: f64 = 1e-12;

pub fn to_complex(m: &Matrix<Scalar>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j).to_complex())
}

/// Real parts only; callers check the matrix is real.
pub fn to_real(m: &Matrix<Scalar>) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j).to_complex().re)
}

/// Constant-entry Laurent matrix to scalars; panics on non-constant input.
pub(crate) fn constants(m: &Matrix<LaurentPoly>) -> Matrix<Scalar> {
    m.to_scalar().expect("constant entries")
}

pub fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn max_abs_complex(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `‖QᵀQ - I‖∞` (entrywise max).
pub fn orthogonality_defect(q: &DMatrix<f64>) -> f64 {
    let n = q.nrows();
    max_abs_real(&(q.transpose() * q - DMatrix::identity(n, n)))
}

/// `‖QᴴQ - I‖∞` (entrywise max).
pub fn unitarity_defect(q: &DMatrix<Complex64>) -> f64 {
    let n = q.nrows();
    max_abs_complex(&(q.adjoint() * q - DMatrix::identity(n, n)))
}

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
///
/// Stops once the off-diagonal Frobenius norm is at most
/// `tol * max(1, ‖A‖_F)`; fails after `max_sweeps` sweeps.
pub fn jacobi_eigen(a: &DMatrix<f64>, tol: f64, max_sweeps: usize) -> Result<SymmetricEigen> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix expected");
    // inputs symmetric only up to rounding are averaged first
    let mut a = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(1.0);
    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tol * scale {
        if sweeps == max_sweeps {
            return Err(Error::ConvergenceFailure(max_sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- JᵀAJ acting on rows/columns p and q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// `V f(Λ) Vᵀ` for a symmetric matrix.
pub fn symmetric_function(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let eig = jacobi_eigen(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)?;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&x| f(x)),
    ));
    let m = &eig.vectors * d * eig.vectors.transpose();
    Ok((&m + m.transpose()) * 0.5)
}

/// Principal square root of a symmetric positive definite matrix.
pub fn spd_sqrt(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    symmetric_function(a, |x| x.max(0.0).sqrt())
}

/// Real `2n x 2n` form `[[Re, -Im], [Im, Re]]` of a complex matrix.
pub fn realify(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`realify`], averaging the two copies of each block so that
/// rounding noise off the complex structure is projected away.
pub fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(
            0.5 * (m[(i, j)] + m[(i + n, j + n)]),
            0.5 * (m[(i + n, j)] - m[(i, j + n)]),
        )
    })
}

/// Principal square root of a Hermitian positive definite matrix, computed
/// through its real form.
pub fn hpd_sqrt(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let r = complexify(&spd_sqrt(&realify(h))?);
    Ok((&r + r.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Leading principal minors of a real matrix, by floating-point LU.
pub fn leading_minors(a: &DMatrix<f64>) -> Vec<f64> {
    (1..=a.nrows())
        .map(|k| a.view((0, 0), (k, k)).into_owned().determinant())
        .collect()
}
