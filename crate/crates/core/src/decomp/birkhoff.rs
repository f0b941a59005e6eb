use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matgrp::{GroupElement, Matrix, Model};
use crate::ring::{ExactDiv, LaurentPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffFactors {
    pub u_plus: GroupElement,
    pub t: GroupElement,
    pub u_minus: GroupElement,
}

impl BirkhoffFactors {
    pub fn recompose(&self) -> GroupElement {
        self.u_plus
            .mul(&self.t)
            .and_then(|x| x.mul(&self.u_minus))
            .expect("factors share a ring")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "u_plus": self.u_plus.to_json(),
            "t": self.t.to_json(),
            "u_minus": self.u_minus.to_json(),
        })
    }
}

/// `g = u_+ t u_-` with `u_+` upper and `u_-` lower unitriangular.
///
/// Eliminates from the bottom-right corner, so the pivots are ratios of
/// trailing principal minors. Every pivot must be a unit of the ring:
/// nonzero over a field, a monomial over a Laurent ring.
/// `OutsideBigCell(k)` names the first trailing minor (of size `k`) whose
/// pivot fails. Laurent inputs are refused unless `allow_laurent` is set.
pub fn birkhoff(g: &GroupElement, allow_laurent: bool) -> Result<BirkhoffFactors> {
    if g.model() == Model::Affine && !allow_laurent {
        return Err(Error::ModelMismatch {
            expected: Model::Spherical.name().into(),
            found: Model::Affine.name().into(),
        });
    }
    let n = g.n();
    let ring = g.ring();
    let mut a = g.matrix().clone();
    let mut up = Matrix::<LaurentPoly>::identity(n);
    let mut lo = Matrix::<LaurentPoly>::identity(n);
    let mut t = vec![LaurentPoly::zero(); n];
    for k in (0..n).rev() {
        let p = a.get(k, k).clone();
        let p_inv = p.unit_inverse().ok_or(Error::OutsideBigCell(n - k))?;
        for i in 0..k {
            up.set(i, k, a.get(i, k).times(&p_inv));
            lo.set(k, i, a.get(k, i).times(&p_inv));
        }
        for i in 0..k {
            for j in 0..k {
                let v = a.get(i, j).minus(&a.get(i, k).times(a.get(k, j)).times(&p_inv));
                a.set(i, j, v);
            }
        }
        t[k] = p;
    }
    Ok(BirkhoffFactors {
        u_plus: GroupElement::new(up, ring)?,
        t: GroupElement::diagonal(t, ring)?,
        u_minus: GroupElement::new(lo, ring)?,
    })
}

/// Same factorization by a different route: conjugate by the reversal
/// permutation `J`, run the textbook leading-minor LDU `J g J = L D U`, and
/// map back via `g = (J L J)(J D J)(J U J)`.
pub fn birkhoff_by_reversal(g: &GroupElement) -> Result<BirkhoffFactors> {
    let n = g.n();
    let ring = g.ring();
    let rev = |m: &Matrix<LaurentPoly>| Matrix::from_fn(n, |i, j| m.get(n - 1 - i, n - 1 - j).clone());
    let mut a = rev(g.matrix());
    let mut l = Matrix::<LaurentPoly>::identity(n);
    let mut d = vec![LaurentPoly::zero(); n];
    for k in 0..n {
        let p = a.get(k, k).clone();
        if !p.is_unit() {
            return Err(Error::OutsideBigCell(k + 1));
        }
        for i in k + 1..n {
            let f = a.get(i, k).exact_div(&p).expect("unit pivot");
            for j in k..n {
                let v = a.get(i, j).minus(&f.times(a.get(k, j)));
                a.set(i, j, v);
            }
            l.set(i, k, f);
        }
        d[k] = p;
    }
    // a is now D U; peel off D.
    let u = Matrix::from_fn(n, |i, j| a.get(i, j).exact_div(&d[i]).expect("unit pivot"));
    Ok(BirkhoffFactors {
        u_plus: GroupElement::new(rev(&l), ring)?,
        t: GroupElement::diagonal(d.into_iter().rev().collect(), ring)?,
        u_minus: GroupElement::new(rev(&u), ring)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::hole_witness;
    use crate::ring::{RingSpec, Scalar};
    use crate::sample::Sampler;

    #[test]
    fn diagonal_is_its_own_torus_part() {
        let g = GroupElement::diagonal(
            vec![LaurentPoly::int(3), LaurentPoly::constant(Scalar::frac(1, 3))],
            RingSpec::Q,
        )
        .unwrap();
        let f = birkhoff(&g, false).unwrap();
        assert!(f.u_plus.is_identity() && f.u_minus.is_identity());
        assert_eq!(f.t, g);
    }

    #[test]
    fn antidiagonal_outside_big_cell() {
        let m = Matrix::from_rows(vec![
            vec![LaurentPoly::zero(), LaurentPoly::one()],
            vec![LaurentPoly::int(-1), LaurentPoly::zero()],
        ])
        .unwrap();
        let g = GroupElement::new(m, RingSpec::Q).unwrap();
        assert_eq!(birkhoff(&g, false), Err(Error::OutsideBigCell(1)));
        assert_eq!(birkhoff_by_reversal(&g), Err(Error::OutsideBigCell(1)));
    }

    #[test]
    fn hole_v_factors_through_u() {
        let h = hole_witness(1).unwrap();
        let f = birkhoff(&h.v, true).unwrap();
        assert_eq!(f.u_plus, h.u);
        assert!(f.t.is_identity());
        assert_eq!(f.recompose(), h.v);
        assert!(matches!(birkhoff(&h.v, false), Err(Error::ModelMismatch { .. })));
    }

    #[test]
    fn laurent_non_unit_pivot() {
        // [[1, 0], [1 + t, 1]]·[[1, 1], [0, 1]] has bottom-right entry 2 + t.
        let m = Matrix::from_rows(vec![
            vec![LaurentPoly::one(), LaurentPoly::one()],
            vec![
                LaurentPoly::from_int_terms(&[(0, 1), (1, 1)]),
                LaurentPoly::from_int_terms(&[(0, 2), (1, 1)]),
            ],
        ])
        .unwrap();
        let g = GroupElement::new(m, RingSpec::LAURENT_Q).unwrap();
        assert_eq!(birkhoff(&g, true), Err(Error::OutsideBigCell(1)));
    }

    #[test]
    fn two_routes_agree_and_recompose() {
        let mut s = Sampler::new(11);
        for ring in [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q] {
            for n in 2..=4 {
                for _ in 0..15 {
                    let g = s.group_element(ring, n);
                    let a = birkhoff(&g, true);
                    let b = birkhoff_by_reversal(&g);
                    assert_eq!(a, b);
                    if let Ok(f) = a {
                        assert_eq!(f.recompose(), g);
                        assert!(f.u_plus.matrix().is_upper_triangular());
                        assert!(f.u_minus.matrix().is_lower_triangular());
                    }
                }
            }
        }
    }
}
