use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::numeric::{self, fmt_f64};
use crate::error::{Error, Result};
use crate::matgrp::{GroupElement, Matrix, Model};
use crate::ring::{ExactDiv, LaurentPoly, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn parse(s: &str) -> Result<Side> {
        match s {
            "+" | "plus" => Ok(Side::Plus),
            "-" | "minus" => Ok(Side::Minus),
            other => Err(Error::Parse(format!("unknown side {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IwasawaFactors {
    pub side: Side,
    /// Unitary factor, numeric.
    pub k: DMatrix<Complex64>,
    /// Exact positive diagonal with product 1.
    pub a_squared: GroupElement,
    /// Exact unitriangular factor, upper for `Side::Plus`, lower for `Side::Minus`.
    pub u: GroupElement,
    /// `‖k a u - g‖∞`
    pub residual: f64,
    /// `‖k* k - I‖∞`
    pub orthogonality: f64,
    pub tol: f64,
}

impl IwasawaFactors {
    pub fn verified(&self) -> bool {
        self.residual <= self.tol && self.orthogonality <= self.tol
    }

    /// Entrywise float square roots of `a_squared`.
    pub fn a(&self) -> Vec<f64> {
        self.a_squared
            .matrix()
            .diagonal_entries()
            .iter()
            .map(|d| d.coeff(0).to_complex().re.sqrt())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side.name(),
            "k": complex_matrix_json(&self.k),
            "a_squared": self.a_squared.to_json(),
            "a": self.a().into_iter().map(fmt_f64).collect::<Vec<_>>(),
            "u": self.u.to_json(),
            "residual": fmt_f64(self.residual),
            "orthogonality": fmt_f64(self.orthogonality),
        })
    }
}

pub(crate) fn complex_matrix_json(m: &DMatrix<Complex64>) -> Value {
    let real = m.iter().all(|z| z.im == 0.0);
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    if real {
                        json!(fmt_f64(z.re))
                    } else {
                        json!([fmt_f64(z.re), fmt_f64(z.im)])
                    }
                })
                .collect()
        })
        .collect();
    Value::Array(rows)
}

/// `H = u* D u` for Hermitian positive definite `H`, with `u` upper
/// unitriangular and `D` diagonal. No square roots are taken.
///
/// Returns the index of the first non-positive pivot on failure.
pub fn ldl_hermitian(h: &Matrix<Scalar>) -> std::result::Result<(Matrix<Scalar>, Vec<Scalar>), usize> {
    let n = h.n();
    // l is the lower factor u*, stored densely.
    let mut l = Matrix::<Scalar>::identity(n);
    let mut d: Vec<Scalar> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = h.get(j, j).clone();
        for k in 0..j {
            let ljk = l.get(j, k);
            dj = dj.minus(&ljk.times(&ljk.sigma()).times(&d[k]));
        }
        if !dj.is_positive_real() {
            return Err(j);
        }
        for i in j + 1..n {
            let mut s = h.get(i, j).clone();
            for k in 0..j {
                s = s.minus(&l.get(i, k).times(&l.get(j, k).sigma()).times(&d[k]));
            }
            l.set(i, j, s.exact_div(&dj).expect("positive pivot"));
        }
        d.push(dj);
    }
    Ok((l.adjoint(), d))
}

fn reversal(n: usize) -> Matrix<Scalar> {
    Matrix::from_fn(n, |i, j| if i + j + 1 == n { Scalar::one() } else { Scalar::zero() })
}

/// Refined Iwasawa decomposition `g = k a u` in the spherical model.
///
/// `a^2` and `u` come from an exact root-free factorization of `g* g`, where
/// `*` is transpose composed with `σ`. Only `k = g u^{-1} a^{-1}` is numeric.
pub fn iwasawa(g: &GroupElement, side: Side, tol: f64) -> Result<IwasawaFactors> {
    if g.model() != Model::Spherical {
        return Err(Error::ModelMismatch {
            expected: Model::Spherical.name().into(),
            found: g.model().name().into(),
        });
    }
    let ring = g.ring();
    let n = g.n();
    let gs = numeric::constants(g.matrix());
    let h = gs.adjoint().mul(&gs);
    let (u, d) = match side {
        Side::Plus => ldl_hermitian(&h).map_err(pivot_error)?,
        Side::Minus => {
            let j = reversal(n);
            let (w, d) = ldl_hermitian(&j.mul(&h).mul(&j)).map_err(pivot_error)?;
            (j.mul(&w).mul(&j), d.into_iter().rev().collect())
        }
    };
    let u_inv = u.inverse().expect("unitriangular");
    let a: Vec<f64> = d.iter().map(|x| x.to_complex().re.sqrt()).collect();
    let a_inv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        a.iter().map(|x| Complex64::new(1.0 / x, 0.0)),
    ));
    let a_num = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        a.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let g_num = numeric::to_complex(&gs);
    let u_num = numeric::to_complex(&u);
    let k = &g_num * numeric::to_complex(&u_inv) * a_inv;
    let residual = numeric::max_abs_complex(&(&k * &a_num * &u_num - &g_num));
    let orthogonality = numeric::unitarity_defect(&k);
    let a_squared = GroupElement::diagonal(d.into_iter().map(LaurentPoly::constant).collect(), ring)?;
    Ok(IwasawaFactors {
        side,
        k,
        a_squared,
        u: GroupElement::from_scalar(&u, ring)?,
        residual,
        orthogonality,
        tol,
    })
}

fn pivot_error(j: usize) -> Error {
    Error::Internal(format!("g*g has non-positive pivot at index {j}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use crate::sample::Sampler;

    fn elem(rows: &[&[Scalar]], ring: RingSpec) -> GroupElement {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        GroupElement::from_scalar(&m, ring).unwrap()
    }

    #[test]
    fn lower_unipotent_example() {
        let i = Scalar::int;
        let g = elem(&[&[i(1), i(0)], &[i(1), i(1)]], RingSpec::Q);
        let f = iwasawa(&g, Side::Plus, 1e-10).unwrap();
        assert_eq!(
            f.a_squared.matrix().diagonal_entries(),
            vec![LaurentPoly::int(2), LaurentPoly::constant(Scalar::frac(1, 2))]
        );
        assert_eq!(f.u, elem(&[&[i(1), Scalar::frac(1, 2)], &[i(0), i(1)]], RingSpec::Q));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [[r, -r], [r, r]];
        for (a, row) in expected.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                assert!((f.k[(a, b)].re - x).abs() < 1e-15);
            }
        }
        assert!(f.verified());
    }

    #[test]
    fn trivial_cases() {
        let i = Scalar::int;
        let id = GroupElement::identity(3, RingSpec::Q);
        let f = iwasawa(&id, Side::Plus, 1e-12).unwrap();
        assert!(f.a_squared.is_identity() && f.u.is_identity());
        let g = elem(&[&[i(1), i(1)], &[i(0), i(1)]], RingSpec::Q);
        let f = iwasawa(&g, Side::Plus, 1e-12).unwrap();
        assert_eq!(f.u, g);
        assert!(f.a_squared.is_identity());
        assert!(numeric::max_abs_complex(&(f.k - DMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn both_sides_recompose() {
        let mut s = Sampler::new(3);
        for ring in [RingSpec::Q, RingSpec::QI] {
            for _ in 0..20 {
                let g = s.group_element(ring, 3);
                let p = iwasawa(&g, Side::Plus, 1e-9).unwrap();
                assert!(p.u.matrix().is_upper_triangular() && p.u.matrix().has_unit_diagonal());
                assert!(p.verified(), "{} {}", p.residual, p.orthogonality);
                let m = iwasawa(&g, Side::Minus, 1e-9).unwrap();
                assert!(m.u.matrix().is_lower_triangular() && m.u.matrix().has_unit_diagonal());
                assert!(m.verified(), "{} {}", m.residual, m.orthogonality);
                assert!(p.a_squared.det().is_one());
            }
        }
    }

    #[test]
    fn affine_input_rejected() {
        let g = GroupElement::identity(2, RingSpec::LAURENT_Q);
        assert!(matches!(
            iwasawa(&g, Side::Plus, 1e-10),
            Err(Error::ModelMismatch { .. })
        ));
    }
}
