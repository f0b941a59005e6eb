use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use super::numeric::{self, fmt_f64, jacobi_eigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
use crate::error::{Error, Result};
use crate::involution::{is_member, SubsetTag, ThetaSpec};
use crate::matgrp::GroupElement;
use crate::ring::RingSpec;

pub(crate) fn real_matrix_json(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| json!(fmt_f64(m[(i, j)]))).collect())
            .collect(),
    )
}

fn require_rational(g: &GroupElement) -> Result<DMatrix<f64>> {
    if g.ring() != RingSpec::Q {
        return Err(Error::RingMismatch(RingSpec::Q.name().into(), g.ring().name().into()));
    }
    Ok(numeric::to_real(&numeric::constants(g.matrix())))
}

#[derive(Clone, Debug)]
pub struct CartanFactors {
    pub k1: DMatrix<f64>,
    /// Singular values, descending.
    pub a: Vec<f64>,
    pub k2: DMatrix<f64>,
    pub residual: f64,
    pub orthogonality: f64,
    pub sweeps: usize,
    pub tol: f64,
}

impl CartanFactors {
    pub fn a_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(self.a.clone()))
    }

    pub fn verified(&self) -> bool {
        self.residual <= self.tol && self.orthogonality <= self.tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k1": real_matrix_json(&self.k1),
            "a": self.a.iter().copied().map(fmt_f64).collect::<Vec<_>>(),
            "k2": real_matrix_json(&self.k2),
            "residual": fmt_f64(self.residual),
            "orthogonality": fmt_f64(self.orthogonality),
            "sweeps": self.sweeps,
        })
    }
}

/// `g = k1 a k2` with `k1, k2 ∈ SO(n)` and `a` positive diagonal, descending.
pub fn cartan(g: &GroupElement, tol: f64) -> Result<CartanFactors> {
    let gm = require_rational(g)?;
    let n = gm.nrows();
    let eig = jacobi_eigen(&(gm.transpose() * &gm), JACOBI_TOL, JACOBI_MAX_SWEEPS)?;
    let mut v = eig.vectors;
    if v.determinant() < 0.0 {
        // flip one column so that k2 (and then k1) has determinant +1
        v.column_mut(n - 1).neg_mut();
    }
    let a: Vec<f64> = eig.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    let a_inv = DMatrix::from_diagonal(&DVector::from_iterator(n, a.iter().map(|x| 1.0 / x)));
    let k2 = v.transpose();
    let k1 = &gm * &v * a_inv;
    let a_m = DMatrix::from_diagonal(&DVector::from_vec(a.clone()));
    let residual = numeric::max_abs_real(&(&k1 * a_m * &k2 - &gm));
    let orthogonality = numeric::orthogonality_defect(&k1).max(numeric::orthogonality_defect(&k2));
    Ok(CartanFactors {
        k1,
        a,
        k2,
        residual,
        orthogonality,
        sweeps: eig.sweeps,
        tol,
    })
}

#[derive(Clone, Debug)]
pub struct PolarFactors {
    /// Symmetric positive definite, `p = sqrt(g gᵀ)`.
    pub p: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub residual: f64,
    pub orthogonality: f64,
    pub p_det: f64,
    pub p_leading_minors: Vec<f64>,
    pub tol: f64,
}

impl PolarFactors {
    pub fn is_spd(&self) -> bool {
        let sym = numeric::max_abs_real(&(self.p.transpose() - &self.p));
        sym <= self.tol && self.p_leading_minors.iter().all(|&m| m > 0.0)
    }

    pub fn verified(&self) -> bool {
        self.residual <= self.tol
            && self.orthogonality <= self.tol
            && self.is_spd()
            && (self.p_det - 1.0).abs() <= self.tol.max(1e-8)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": real_matrix_json(&self.p),
            "k": real_matrix_json(&self.k),
            "residual": fmt_f64(self.residual),
            "orthogonality": fmt_f64(self.orthogonality),
            "p_det": fmt_f64(self.p_det),
            "p_leading_minors": self.p_leading_minors.iter().copied().map(fmt_f64).collect::<Vec<_>>(),
            "spd": self.is_spd(),
        })
    }
}

/// `g = p k` with `p` symmetric positive definite and `k` orthogonal.
pub fn polar(g: &GroupElement, tol: f64) -> Result<PolarFactors> {
    let gm = require_rational(g)?;
    let ggt = &gm * gm.transpose();
    let p = numeric::spd_sqrt(&ggt)?;
    let p_inv = numeric::symmetric_function(&ggt, |x| 1.0 / x.sqrt())?;
    let k = &p_inv * &gm;
    let residual = numeric::max_abs_real(&(&p * &k - &gm));
    let orthogonality = numeric::orthogonality_defect(&k);
    Ok(PolarFactors {
        p_det: p.determinant(),
        p_leading_minors: numeric::leading_minors(&p),
        p,
        k,
        residual,
        orthogonality,
        tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KakLetter {
    K,
    A,
}

#[derive(Clone, Debug)]
pub struct KakWord {
    pub letters: Vec<KakLetter>,
    pub factors: Vec<DMatrix<f64>>,
    /// Number of `KAK` blocks used.
    pub blocks: usize,
    pub residual: f64,
    pub tol: f64,
}

impl KakWord {
    pub fn word(&self) -> String {
        self.letters
            .iter()
            .map(|l| match l {
                KakLetter::K => "K",
                KakLetter::A => "A",
            })
            .collect()
    }

    pub fn verified(&self) -> bool {
        self.residual <= self.tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.letters.iter().map(|l| format!("{l:?}")).collect::<Vec<_>>(),
            "length": self.blocks,
            "factors": self.factors.iter().map(real_matrix_json).collect::<Vec<_>>(),
            "residual": fmt_f64(self.residual),
        })
    }
}

/// Writes `g` as an alternating product of `K` and `A` factors.
///
/// In the spherical model one Cartan block suffices; factors already in
/// `A` or `K` are reported as single letters.
pub fn kak_word(g: &GroupElement, tol: f64) -> Result<KakWord> {
    let gm = require_rational(g)?;
    let spec = ThetaSpec::for_element(g);
    let (letters, factors) = if is_member(spec, SubsetTag::A, g)? {
        (vec![KakLetter::A], vec![gm.clone()])
    } else if is_member(spec, SubsetTag::K, g)? {
        (vec![KakLetter::K], vec![gm.clone()])
    } else {
        let c = cartan(g, tol)?;
        let a = c.a_matrix();
        (vec![KakLetter::K, KakLetter::A, KakLetter::K], vec![c.k1, a, c.k2])
    };
    let n = gm.nrows();
    let product = factors.iter().fold(DMatrix::identity(n, n), |acc, f| acc * f);
    Ok(KakWord {
        letters,
        factors,
        blocks: 1,
        residual: numeric::max_abs_real(&(product - gm)),
        tol,
    })
}
