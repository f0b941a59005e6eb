//! Affine-model certificates: the diagonalizability test, the exact `SL_2`
//! square-root decision, nucleus membership, and the Hole witness.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::iwasawa::complex_matrix_json;
use super::numeric::{self, fmt_f64};
use crate::error::{Error, Result};
use crate::involution::{is_member, tau, theta, SubsetTag, ThetaSpec};
use crate::matgrp::{chevalley_generator, GroupElement, Matrix, Model};
use crate::ring::{rational_roots, ExactDiv, LaurentPoly, Poly, Ring, RingSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagVerdict {
    DiagonalizableNecessaryPass,
    NotDiagonalizable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagReason {
    NonconstantCharpolyCoeff,
    NoSplitOverF,
    Splits,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagCertificate {
    pub verdict: DiagVerdict,
    pub reason: DiagReason,
    pub charpoly: Poly<LaurentPoly>,
    /// `(k, c_k)`: the first coefficient of `λ^k` that is not constant.
    pub obstruction: Option<(usize, LaurentPoly)>,
    /// Roots in the base field with multiplicity, when the charpoly is constant.
    pub roots: Vec<Scalar>,
}

impl DiagCertificate {
    /// The obstruction as a conjugation invariant: `e_{n-k} = (-1)^{n-k} c_k`,
    /// the elementary symmetric function of the eigenvalues (the trace for `k = n - 1`).
    pub fn obstruction_invariant(&self) -> Option<LaurentPoly> {
        let (k, c) = self.obstruction.as_ref()?;
        let n = self.charpoly.coeffs().len() - 1;
        Some(if (n - k).is_multiple_of(2) {
            c.clone()
        } else {
            c.negated()
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "reason": self.reason,
            "charpoly": self.charpoly.to_json(),
            "charpoly_text": self.charpoly.to_string(),
            "obstruction": self.obstruction.as_ref().map(|(k, c)| {
                let e = self.obstruction_invariant().expect("obstruction present");
                json!({
                    "degree": k,
                    "coefficient": c.to_json(),
                    "text": c.to_string(),
                    "invariant": e.to_json(),
                    "invariant_text": e.to_string(),
                })
            }),
            "roots": self.roots.iter().map(Scalar::encode).collect::<Vec<_>>(),
        })
    }
}

/// Necessary condition for `g` to be conjugate into `T`: the characteristic
/// polynomial must have constant coefficients and split over the base field.
pub fn diag_test(g: &GroupElement) -> DiagCertificate {
    let charpoly = g.charpoly();
    let nonconstant = charpoly.coeffs().iter().enumerate().find(|(_, c)| !c.is_constant());
    if let Some((k, c)) = nonconstant {
        return DiagCertificate {
            verdict: DiagVerdict::NotDiagonalizable,
            reason: DiagReason::NonconstantCharpolyCoeff,
            obstruction: Some((k, c.clone())),
            charpoly,
            roots: Vec::new(),
        };
    }
    let constant = charpoly.constant_coefficients().expect("checked constant");
    let roots = rational_roots(&constant, g.ring().is_gaussian()).expect("monic charpoly");
    let splits = Some(roots.len()) == constant.degree();
    DiagCertificate {
        verdict: if splits {
            DiagVerdict::DiagonalizableNecessaryPass
        } else {
            DiagVerdict::NotDiagonalizable
        },
        reason: if splits {
            DiagReason::Splits
        } else {
            DiagReason::NoSplitOverF
        },
        charpoly,
        obstruction: None,
        roots,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SqrtVerdict {
    RootFound,
    NoRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SqrtObstruction {
    /// `tr(v) + 2` has no square root in the ring.
    TraceNotSquare,
    /// Neither `(v + I)/s` nor `(v + I)/(-s)` has entries in the ring.
    NotDivisible,
    /// A root exists but none lies in `Q`.
    RootNotSymmetric,
    /// `tr(v) = -2`: a root would have trace 0, forcing `v = -I`, whose
    /// square roots are never `θ`-symmetric.
    ZeroTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqrtCertificate {
    pub verdict: SqrtVerdict,
    pub root: Option<GroupElement>,
    /// `tr(v) + 2`, the value whose square root is the trace of any root.
    pub obstruction: Option<LaurentPoly>,
    pub reason: Option<SqrtObstruction>,
}

impl SqrtCertificate {
    fn no_root(trace_plus_two: LaurentPoly, reason: SqrtObstruction) -> Self {
        SqrtCertificate {
            verdict: SqrtVerdict::NoRoot,
            root: None,
            obstruction: Some(trace_plus_two),
            reason: Some(reason),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "root": self.root.as_ref().map(GroupElement::to_json),
            "obstruction": self.obstruction.as_ref().map(LaurentPoly::to_json),
            "obstruction_text": self.obstruction.as_ref().map(LaurentPoly::to_string),
            "reason": self.reason,
        })
    }
}

/// Decides whether `v ∈ Q ∩ SL_2` has a square root in `Q`.
///
/// Any `h ∈ SL_2` with `h^2 = v` satisfies `v + I = tr(h) h` and
/// `tr(h)^2 = tr(v) + 2`, so both candidate roots are determined by the
/// square roots `±s` of `tr(v) + 2`.
pub fn sl2_sqrt(v: &GroupElement) -> Result<SqrtCertificate> {
    if v.n() != 2 {
        return Err(Error::BadDimension(format!(
            "sl2_sqrt needs a 2x2 matrix, got {0}x{0}",
            v.n()
        )));
    }
    let spec = ThetaSpec::for_element(v);
    if !is_member(spec, SubsetTag::Q, v)? {
        return Err(Error::NotSymmetric);
    }
    let ring = v.ring();
    let trace_plus_two = v.matrix().trace().plus(&LaurentPoly::int(2));
    if trace_plus_two.is_zero() {
        return Ok(SqrtCertificate::no_root(trace_plus_two, SqrtObstruction::ZeroTrace));
    }
    let Some(s) = trace_plus_two.sqrt(ring.is_gaussian()) else {
        return Ok(SqrtCertificate::no_root(
            trace_plus_two,
            SqrtObstruction::TraceNotSquare,
        ));
    };
    let v_plus_i = v.matrix().add(&Matrix::identity(2));
    let mut divisible = false;
    for s in [s.clone(), s.negated()] {
        let entries: Option<Vec<LaurentPoly>> = v_plus_i.entries().map(|x| x.exact_div(&s)).collect();
        let Some(entries) = entries else { continue };
        let h = Matrix::from_fn(2, |i, j| entries[2 * i + j].clone());
        if !entries.iter().all(|x| ring.contains(x)) || !h.det().is_one() {
            continue;
        }
        divisible = true;
        let h = GroupElement::new(h, ring)?;
        if is_member(spec, SubsetTag::Q, &h)? && theta(spec, &h)? == h.inverse() {
            debug_assert_eq!(h.mul(&h)?, *v);
            return Ok(SqrtCertificate {
                verdict: SqrtVerdict::RootFound,
                root: Some(h),
                obstruction: None,
                reason: None,
            });
        }
    }
    let reason = if divisible {
        SqrtObstruction::RootNotSymmetric
    } else {
        SqrtObstruction::NotDivisible
    };
    Ok(SqrtCertificate::no_root(trace_plus_two, reason))
}

pub const DEFAULT_CHAIN_DEPTH: usize = 8;
pub const CHAIN_RELATIVE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NucleusVerdict {
    InNucleus,
    NotInNucleus,
    /// Diagonalizability passes but `v` is not constant, so no root chain
    /// is available to confirm membership.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct RootLevel {
    pub matrix: DMatrix<Complex64>,
    /// `‖h_j^2 - h_{j-1}‖∞`
    pub residual: f64,
    /// `1e-8 · ‖h_{j-1}‖∞`
    pub bound: f64,
}

impl RootLevel {
    pub fn passes(&self) -> bool {
        self.residual <= self.bound
    }
}

#[derive(Clone, Debug)]
pub struct NucleusCertificate {
    pub verdict: NucleusVerdict,
    pub model: Model,
    pub preimage: GroupElement,
    pub chain: Vec<RootLevel>,
    pub diag: Option<DiagCertificate>,
    pub sqrt: Option<SqrtCertificate>,
    /// For affine `n = 2`: whether the diagonalizability and square-root
    /// routes give the same answer.
    pub routes_agree: Option<bool>,
}

impl NucleusCertificate {
    pub fn chain_passes(&self) -> bool {
        self.chain.iter().all(RootLevel::passes)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "model": self.model,
            "preimage": self.preimage.to_json(),
            "chain": self.chain.iter().map(|l| json!({
                "root": complex_matrix_json(&l.matrix),
                "residual": fmt_f64(l.residual),
                "bound": fmt_f64(l.bound),
            })).collect::<Vec<_>>(),
            "diag_test": self.diag.as_ref().map(DiagCertificate::to_json),
            "sl2_sqrt": self.sqrt.as_ref().map(SqrtCertificate::to_json),
            "routes_agree": self.routes_agree,
        })
    }
}

/// Iterated principal square roots `h_1, ..., h_depth` of a constant
/// element of `τ(G)` (Hermitian positive definite), each with its residual.
pub fn sqrt_chain(v: &Matrix<Scalar>, depth: usize) -> Result<Vec<RootLevel>> {
    let mut prev = numeric::to_complex(v);
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let h = numeric::hpd_sqrt(&prev)?;
        let residual = numeric::max_abs_complex(&(&h * &h - &prev));
        let bound = CHAIN_RELATIVE_TOL * numeric::max_abs_complex(&prev);
        out.push(RootLevel {
            matrix: h.clone(),
            residual,
            bound,
        });
        prev = h;
    }
    Ok(out)
}

/// Decides whether `v = τ(g)` lies in the nucleus of `τ(G)`.
///
/// Spherical: a numeric chain of `depth` square roots. Affine: the
/// diagonalizability test, and for `n = 2` also the exact square-root
/// decision; either negative answer excludes `v`.
pub fn nucleus_member(v: &GroupElement, preimage: &GroupElement, depth: usize) -> Result<NucleusCertificate> {
    let spec = ThetaSpec::for_element(v);
    if preimage.ring() != v.ring() || tau(spec, preimage)? != *v {
        return Err(Error::NotInTauG);
    }
    let mut cert = NucleusCertificate {
        verdict: NucleusVerdict::Inconclusive,
        model: v.model(),
        preimage: preimage.clone(),
        chain: Vec::new(),
        diag: None,
        sqrt: None,
        routes_agree: None,
    };
    let mut excluded = false;
    if v.model() == Model::Affine {
        let diag = diag_test(v);
        let diag_no = diag.verdict == DiagVerdict::NotDiagonalizable;
        if v.n() == 2 {
            let sqrt = sl2_sqrt(v)?;
            let sqrt_no = sqrt.verdict == SqrtVerdict::NoRoot;
            cert.routes_agree = Some(diag_no == sqrt_no);
            excluded |= sqrt_no;
            cert.sqrt = Some(sqrt);
        }
        excluded |= diag_no;
        cert.diag = Some(diag);
    }
    if excluded {
        cert.verdict = NucleusVerdict::NotInNucleus;
        return Ok(cert);
    }
    if let Some(c) = v.matrix().to_scalar() {
        cert.chain = sqrt_chain(&c, depth)?;
        if cert.chain_passes() {
            cert.verdict = NucleusVerdict::InNucleus;
        }
    }
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct HoleWitness {
    pub n: usize,
    pub u: GroupElement,
    pub v: GroupElement,
    pub charpoly: Poly<LaurentPoly>,
}

impl HoleWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "dimension": self.n + 1,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "charpoly": self.charpoly.to_json(),
            "charpoly_text": self.charpoly.to_string(),
        })
    }
}

/// `(λ^2 - (t + 4 + t^{-1})λ + 1)(λ - 1)^{n-1}`, built directly from its
/// factors.
pub fn hole_closed_form(n: usize) -> Poly<LaurentPoly> {
    let quadratic = Poly::new(vec![
        LaurentPoly::one(),
        LaurentPoly::from_int_terms(&[(-1, -1), (0, -4), (1, -1)]),
        LaurentPoly::one(),
    ]);
    let linear = Poly::linear(LaurentPoly::one());
    quadratic.times(&linear.pow(n as u32 - 1))
}

/// The witness `u = I + (1 + t) E_12` in `SL_{n+1}(F[t, t^{-1}])`, its twist
/// `v = τ(u)`, and the characteristic polynomial of `v`, which is checked
/// against [`hole_closed_form`].
pub fn hole_witness(n: usize) -> Result<HoleWitness> {
    hole_witness_in(n, RingSpec::LAURENT_Q)
}

pub fn hole_witness_in(n: usize, ring: RingSpec) -> Result<HoleWitness> {
    if n == 0 {
        return Err(Error::BadDimension("the Hole witness needs n >= 1".into()));
    }
    if !ring.is_laurent() {
        return Err(Error::RingMismatch(
            RingSpec::LAURENT_Q.name().into(),
            ring.name().into(),
        ));
    }
    let u = chevalley_generator(ring, n + 1, 1, 2, 0, Scalar::one())?.mul(&chevalley_generator(
        ring,
        n + 1,
        1,
        2,
        1,
        Scalar::one(),
    )?)?;
    let v = tau(ThetaSpec::for_ring(ring), &u)?;
    let charpoly = v.charpoly();
    if charpoly != hole_closed_form(n) {
        return Err(Error::Internal(format!("Hole charpoly mismatch: {charpoly}")));
    }
    Ok(HoleWitness { n, u, v, charpoly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    fn l(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    fn diag(entries: Vec<LaurentPoly>, ring: RingSpec) -> GroupElement {
        GroupElement::diagonal(entries, ring).unwrap()
    }

    #[test]
    fn hole_matrix_matches_hand_computation() {
        let h = hole_witness(1).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![l(&[(-1, 1), (0, 3), (1, 1)]), l(&[(0, 1), (1, 1)])],
            vec![l(&[(-1, 1), (0, 1)]), LaurentPoly::one()],
        ])
        .unwrap();
        assert_eq!(*h.v.matrix(), expected);
        assert_eq!(h.v.matrix().trace(), l(&[(-1, 1), (0, 4), (1, 1)]));
    }

    #[test]
    fn hole_charpoly_for_several_n() {
        for n in 1..=5 {
            let h = hole_witness(n).unwrap();
            assert_eq!(h.v.n(), n + 1);
            assert_eq!(h.charpoly, h.v.matrix().charpoly_cofactor());
        }
        assert!(matches!(hole_witness(0), Err(Error::BadDimension(_))));
        assert!(hole_witness_in(2, RingSpec::LAURENT_QI).is_ok());
    }

    #[test]
    fn diag_test_examples() {
        let h = hole_witness(1).unwrap();
        let c = diag_test(&h.v);
        assert_eq!(c.verdict, DiagVerdict::NotDiagonalizable);
        assert_eq!(c.reason, DiagReason::NonconstantCharpolyCoeff);
        let (k, coeff) = c.obstruction.clone().unwrap();
        assert_eq!((k, coeff.negated()), (1, l(&[(-1, 1), (0, 4), (1, 1)])));
        assert_eq!(c.obstruction_invariant(), Some(l(&[(-1, 1), (0, 4), (1, 1)])));

        let t = diag(vec![LaurentPoly::t(), LaurentPoly::t_pow(-1)], RingSpec::LAURENT_Q);
        let c = diag_test(&t);
        assert_eq!(c.reason, DiagReason::NonconstantCharpolyCoeff);
        assert_eq!(c.obstruction.unwrap().1, l(&[(-1, -1), (1, -1)]));

        let d = diag(
            vec![LaurentPoly::int(2), LaurentPoly::constant(Scalar::frac(1, 2))],
            RingSpec::LAURENT_Q,
        );
        let c = diag_test(&d);
        assert_eq!(c.verdict, DiagVerdict::DiagonalizableNecessaryPass);
        assert_eq!(c.roots, vec![Scalar::frac(1, 2), Scalar::int(2)]);
    }

    #[test]
    fn diag_test_no_split() {
        // rotation by a rational angle: eigenvalues (3 ± 4i)/5
        let m = Matrix::from_rows(vec![
            vec![
                LaurentPoly::constant(Scalar::frac(3, 5)),
                LaurentPoly::constant(Scalar::frac(4, 5)),
            ],
            vec![
                LaurentPoly::constant(Scalar::frac(-4, 5)),
                LaurentPoly::constant(Scalar::frac(3, 5)),
            ],
        ])
        .unwrap();
        let g = GroupElement::new(m.clone(), RingSpec::LAURENT_Q).unwrap();
        assert_eq!(diag_test(&g).reason, DiagReason::NoSplitOverF);
        let g = GroupElement::new(m, RingSpec::LAURENT_QI).unwrap();
        assert_eq!(diag_test(&g).reason, DiagReason::Splits);
    }

    #[test]
    fn sqrt_examples() {
        let h = hole_witness(1).unwrap();
        let c = sl2_sqrt(&h.v).unwrap();
        assert_eq!(c.verdict, SqrtVerdict::NoRoot);
        assert_eq!(c.obstruction, Some(l(&[(-1, 1), (0, 6), (1, 1)])));
        assert_eq!(c.reason, Some(SqrtObstruction::TraceNotSquare));

        let v = diag(
            vec![LaurentPoly::int(4), LaurentPoly::constant(Scalar::frac(1, 4))],
            RingSpec::LAURENT_Q,
        );
        let c = sl2_sqrt(&v).unwrap();
        let expected = diag(
            vec![LaurentPoly::int(2), LaurentPoly::constant(Scalar::frac(1, 2))],
            RingSpec::LAURENT_Q,
        );
        assert_eq!(c.root, Some(expected));

        let c = sl2_sqrt(&GroupElement::identity(2, RingSpec::Q)).unwrap();
        assert!(c.root.unwrap().is_identity());
    }

    #[test]
    fn sqrt_degenerate_and_errors() {
        let minus = diag(vec![LaurentPoly::int(-1), LaurentPoly::int(-1)], RingSpec::Q);
        let c = sl2_sqrt(&minus).unwrap();
        assert_eq!(c.reason, Some(SqrtObstruction::ZeroTrace));
        assert!(matches!(
            sl2_sqrt(&GroupElement::identity(3, RingSpec::Q)),
            Err(Error::BadDimension(_))
        ));
        let u = hole_witness(1).unwrap().u;
        assert_eq!(sl2_sqrt(&u), Err(Error::NotSymmetric));
    }

    #[test]
    fn sqrt_of_squares_is_found() {
        // v = τ(g)^2 = τ(τ(g)) always has the root τ(g) in Q
        let mut s = Sampler::new(9);
        for ring in [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q, RingSpec::LAURENT_QI] {
            for _ in 0..20 {
                let g = s.group_element(ring, 2);
                let h = tau(ThetaSpec::for_ring(ring), &g).unwrap();
                let v = h.mul(&h).unwrap();
                let c = sl2_sqrt(&v).unwrap();
                assert_eq!(c.verdict, SqrtVerdict::RootFound, "{v}");
                let r = c.root.unwrap();
                assert_eq!(r.mul(&r).unwrap(), v);
            }
        }
    }

    #[test]
    fn nucleus_examples() {
        let g = diag(
            vec![LaurentPoly::int(4), LaurentPoly::constant(Scalar::frac(1, 4))],
            RingSpec::Q,
        );
        let v = tau(ThetaSpec::for_ring(RingSpec::Q), &g).unwrap();
        let c = nucleus_member(&v, &g, DEFAULT_CHAIN_DEPTH).unwrap();
        assert_eq!(c.verdict, NucleusVerdict::InNucleus);
        assert_eq!(c.chain.len(), 8);
        assert!((c.chain[0].matrix[(0, 0)].re - 4.0).abs() < 1e-14);
        assert!((c.chain[1].matrix[(0, 0)].re - 2.0).abs() < 1e-14);

        let h = hole_witness(1).unwrap();
        let c = nucleus_member(&h.v, &h.u, DEFAULT_CHAIN_DEPTH).unwrap();
        assert_eq!(c.verdict, NucleusVerdict::NotInNucleus);
        assert_eq!(c.routes_agree, Some(true));

        let id = GroupElement::identity(3, RingSpec::LAURENT_Q);
        let c = nucleus_member(&id, &id, DEFAULT_CHAIN_DEPTH).unwrap();
        assert_eq!(c.verdict, NucleusVerdict::InNucleus);

        assert_eq!(nucleus_member(&h.v, &h.v, 2).unwrap_err(), Error::NotInTauG);
    }

    #[test]
    fn gaussian_chain() {
        let mut s = Sampler::new(2);
        for _ in 0..10 {
            let g = s.group_element(RingSpec::QI, 3);
            let v = tau(ThetaSpec::for_ring(RingSpec::QI), &g).unwrap();
            let c = nucleus_member(&v, &g, 8).unwrap();
            assert_eq!(c.verdict, NucleusVerdict::InNucleus);
        }
    }
}
