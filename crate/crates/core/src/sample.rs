//! Seeded generators of test elements: random group elements, torus
//! elements, and nontrivial exact elements of the unitary form `K`.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matgrp::{chevalley_generator, GroupElement, Matrix};
use crate::ring::{LaurentPoly, Ring, RingSpec, Scalar};

/// Primitive Pythagorean triples `(a, b, c)` with `a^2 + b^2 = c^2`.
const PYTHAGOREAN: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// `(a, b, c, e, d)` with `a^2 + b^2 + c^2 + e^2 = d^2`, giving the unitary
/// `[[α, -σ(β)], [β, σ(α)]]` with `α = (a+bi)/d`, `β = (c+ei)/d`.
const FOUR_SQUARES: [(i64, i64, i64, i64, i64); 4] =
    [(1, 2, 2, 0, 3), (2, 3, 6, 0, 7), (1, 2, 2, 4, 5), (2, 4, 5, 6, 9)];

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn rational(&mut self, height: i64) -> BigRational {
        let num = self.rng.gen_range(-height..=height);
        let den = self.rng.gen_range(1..=height);
        BigRational::new(num.into(), den.into())
    }

    /// A scalar with numerators and denominators bounded by `height`.
    pub fn scalar(&mut self, gaussian: bool, height: i64) -> Scalar {
        let re = self.rational(height);
        if gaussian && self.rng.gen_bool(0.5) {
            Scalar::gaussian(re, self.rational(height))
        } else {
            Scalar::real(re)
        }
    }

    pub fn nonzero_scalar(&mut self, gaussian: bool, height: i64) -> Scalar {
        loop {
            let s = self.scalar(gaussian, height);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A Laurent polynomial with up to `terms` terms and exponents in
    /// `[-2, 2]`; constant when `ring` is a field.
    pub fn laurent(&mut self, ring: RingSpec, terms: usize) -> LaurentPoly {
        let count = self.rng.gen_range(0..=terms);
        let mut p = LaurentPoly::zero();
        for _ in 0..count {
            let e = if ring.is_laurent() {
                self.rng.gen_range(-2..=2)
            } else {
                0
            };
            let c = self.scalar(ring.is_gaussian(), 4);
            p = p.plus(&LaurentPoly::monomial(c, e));
        }
        p
    }

    /// A square matrix with independent [`Sampler::laurent`] entries.
    pub fn matrix(&mut self, ring: RingSpec, n: usize) -> Matrix<LaurentPoly> {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let x = self.laurent(ring, 2);
                m.set(i, j, x);
            }
        }
        m
    }

    /// A constant diagonal element with determinant 1.
    pub fn torus_element(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let mut entries: Vec<Scalar> = (0..n - 1).map(|_| self.nonzero_scalar(ring.is_gaussian(), 5)).collect();
        let prod = entries.iter().fold(Scalar::one(), |acc, x| acc.times(x));
        entries.push(prod.inv().expect("product of nonzero scalars"));
        GroupElement::diagonal(entries.into_iter().map(LaurentPoly::constant).collect(), ring)
            .expect("det 1 by construction")
    }

    /// A random root-group generator `I + s t^k E_ij`.
    pub fn generator(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let i = self.rng.gen_range(1..=n);
        let j = loop {
            let j = self.rng.gen_range(1..=n);
            if j != i {
                break j;
            }
        };
        let k = if ring.is_laurent() {
            self.rng.gen_range(-1..=1)
        } else {
            0
        };
        let s = self.nonzero_scalar(ring.is_gaussian(), 3);
        chevalley_generator(ring, n, i, j, k, s).expect("valid generator")
    }

    /// A product of a few root-group generators and a torus element.
    pub fn group_element(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let len = self.rng.gen_range(2..=5);
        let mut g = self.torus_element(ring, n);
        for _ in 0..len {
            let x = self.generator(ring, n);
            g = g.mul(&x).expect("same ring");
        }
        g
    }

    /// Element of `SL_n` over `Q`/`Q(i)` whose entries all have height at most
    /// `bound`: a random small integer matrix with one row divided by its
    /// determinant, retried until the bound holds.
    pub fn bounded_height_element(&mut self, ring: RingSpec, n: usize, bound: i64) -> GroupElement {
        assert!(!ring.is_laurent(), "bounded-height sampling is for field models");
        let entry = 3.min(bound);
        loop {
            let mut m = Matrix::<Scalar>::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let re = self.rng.gen_range(-entry..=entry);
                    let im = if ring.is_gaussian() && self.rng.gen_bool(0.3) {
                        self.rng.gen_range(-1..=1)
                    } else {
                        0
                    };
                    m.set(i, j, Scalar::gaussian_int(re, im));
                }
            }
            let d = m.det_bareiss();
            let Some(dinv) = d.inv() else { continue };
            let row = self.rng.gen_range(0..n);
            for j in 0..n {
                let v = m.get(row, j).times(&dinv);
                m.set(row, j, v);
            }
            let bound_big = bound.into();
            if m.entries().all(|x| x.height() <= bound_big) {
                return GroupElement::from_scalar(&m, ring).expect("det 1 by construction");
            }
        }
    }

    fn rotation_block(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let (a, b, c) = *PYTHAGOREAN.choose(&mut self.rng).expect("nonempty");
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let (i, j) = self.plane(n);
        let mut m = Matrix::<LaurentPoly>::identity(n);
        let cos = LaurentPoly::constant(Scalar::frac(a, c));
        let sin = LaurentPoly::constant(Scalar::frac(sign * b, c));
        m.set(i, i, cos.clone());
        m.set(j, j, cos);
        m.set(i, j, sin.clone());
        m.set(j, i, sin.negated());
        GroupElement::new(m, ring).expect("rotation has det 1")
    }

    fn unitary_block(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let (a, b, c, e, d) = *FOUR_SQUARES.choose(&mut self.rng).expect("nonempty");
        let alpha = Scalar::gaussian(
            BigRational::new(a.into(), d.into()),
            BigRational::new(b.into(), d.into()),
        );
        let beta = Scalar::gaussian(
            BigRational::new(c.into(), d.into()),
            BigRational::new(e.into(), d.into()),
        );
        let (i, j) = self.plane(n);
        let mut m = Matrix::<LaurentPoly>::identity(n);
        m.set(i, i, LaurentPoly::constant(alpha.clone()));
        m.set(i, j, LaurentPoly::constant(beta.sigma().negated()));
        m.set(j, i, LaurentPoly::constant(beta));
        m.set(j, j, LaurentPoly::constant(alpha.sigma()));
        GroupElement::new(m, ring).expect("unitary has det 1")
    }

    fn plane(&mut self, n: usize) -> (usize, usize) {
        let i = self.rng.gen_range(0..n);
        let j = loop {
            let j = self.rng.gen_range(0..n);
            if j != i {
                break j;
            }
        };
        (i, j)
    }

    /// A signed permutation matrix with determinant 1.
    fn signed_permutation(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        let mut signs: Vec<i64> = (0..n).map(|_| if self.rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let mut m = Matrix::<LaurentPoly>::zeros(n);
        for (i, &p) in perm.iter().enumerate() {
            m.set(i, p, LaurentPoly::int(signs[i]));
        }
        if !m.det().is_one() {
            signs[0] = -signs[0];
            m.set(0, perm[0], LaurentPoly::int(signs[0]));
        }
        GroupElement::new(m, ring).expect("sign fixed to det 1")
    }

    /// `diag(..., t^k, ..., t^{-k}, ...)`, which `θ` fixes in the affine model.
    fn loop_torus(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let k = self.rng.gen_range(1..=2);
        let (i, j) = self.plane(n);
        let mut entries = vec![LaurentPoly::one(); n];
        entries[i] = LaurentPoly::t_pow(k);
        entries[j] = LaurentPoly::t_pow(-k);
        GroupElement::diagonal(entries, ring).expect("det 1")
    }

    /// A nontrivial exact element of `K`.
    ///
    /// Products of rational rotations and signed permutations; over `Q(i)`
    /// also rational unitaries; in the affine model also `diag(t^k, t^{-k})`.
    pub fn k_element(&mut self, ring: RingSpec, n: usize) -> GroupElement {
        let len = self.rng.gen_range(1..=3);
        let mut g = self.signed_permutation(ring, n);
        for _ in 0..len {
            let choice = self.rng.gen_range(0..4);
            let x = match choice {
                1 if ring.is_gaussian() => self.unitary_block(ring, n),
                2 if ring.is_laurent() => self.loop_torus(ring, n),
                3 => self.signed_permutation(ring, n),
                _ => self.rotation_block(ring, n),
            };
            g = g.mul(&x).expect("same ring");
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::{is_member, SubsetTag, ThetaSpec};

    const RINGS: [RingSpec; 4] = [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q, RingSpec::LAURENT_QI];

    #[test]
    fn k_elements_are_fixed_by_theta() {
        let mut s = Sampler::new(7);
        for ring in RINGS {
            for n in 2..=4 {
                for _ in 0..10 {
                    let k = s.k_element(ring, n);
                    assert!(is_member(ThetaSpec::for_ring(ring), SubsetTag::K, &k).unwrap(), "{k:?}");
                }
            }
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = Sampler::new(42).group_element(RingSpec::LAURENT_Q, 3);
        let b = Sampler::new(42).group_element(RingSpec::LAURENT_Q, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn bounded_height() {
        let mut s = Sampler::new(1);
        for _ in 0..20 {
            let g = s.bounded_height_element(RingSpec::Q, 3, 10);
            assert!(g.det().is_one());
            assert!(g.matrix().entries().all(|p| p.coeff(0).height() <= 10.into()));
        }
    }
}
