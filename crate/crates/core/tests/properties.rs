#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use kmdecomp::coxeter::{Gcm, WeylElement};
use kmdecomp::dynkin::min_spherical_cover;
use kmdecomp::involution::{is_member, tau, theta, SubsetTag, ThetaSpec};
use kmdecomp::matgrp::{chevalley_generator, GroupElement, Matrix};
use kmdecomp::ring::{rational_roots, LaurentPoly, Poly, Ring, RingSpec, Scalar};
use proptest::prelude::*;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -5i64..=5, -2i64..=2), 0..5).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(e, re, im)| (e, Scalar::gaussian_int(re, im))))
    })
}

fn ring() -> impl Strategy<Value = RingSpec> {
    prop::sample::select(vec![
        RingSpec::Q,
        RingSpec::QI,
        RingSpec::LAURENT_Q,
        RingSpec::LAURENT_QI,
    ])
}

/// A product of root-group generators `I + c t^k E_ij` in `SL_n`.
fn group_element(ring: RingSpec, n: usize) -> impl Strategy<Value = GroupElement> {
    let k_range = if ring.is_laurent() { -1i64..=1 } else { 0..=0 };
    let im_range = if ring.is_gaussian() { -1i64..=1 } else { 0..=0 };
    prop::collection::vec((0..n, 1..n, k_range, -3i64..=3, im_range), 1..6).prop_map(move |gens| {
        gens.into_iter()
            .fold(GroupElement::identity(n, ring), |g, (i, off, k, re, im)| {
                let j = (i + off) % n;
                let c = if re == 0 && im == 0 {
                    Scalar::one()
                } else {
                    Scalar::gaussian_int(re, im)
                };
                let x = chevalley_generator(ring, n, i + 1, j + 1, k, c).expect("valid generator");
                g.mul(&x).expect("same ring")
            })
    })
}

fn element_with_ring() -> impl Strategy<Value = GroupElement> {
    (ring(), 2usize..=3).prop_flat_map(|(r, n)| group_element(r, n))
}

fn int_matrix(n: usize) -> impl Strategy<Value = Matrix<Scalar>> {
    prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| Matrix::from_fn(n, |i, j| Scalar::int(v[i * n + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sigma_and_rho_are_ring_involutions(x in laurent(), y in laurent()) {
        for f in [LaurentPoly::sigma, LaurentPoly::rho] {
            prop_assert_eq!(f(&x.plus(&y)), f(&x).plus(&f(&y)));
            prop_assert_eq!(f(&x.times(&y)), f(&x).times(&f(&y)));
            prop_assert_eq!(f(&f(&x)), x.clone());
        }
        prop_assert_eq!(x.sigma_rho(), sigma_rho(&x));
    }

    #[test]
    fn laurent_sqrt_of_a_square(q in laurent()) {
        let r = q.times(&q).sqrt(true);
        prop_assert!(r == Some(q.clone()) || r == Some(q.negated()), "sqrt of ({})^2 gave {:?}", q, r);
    }

    #[test]
    fn rational_roots_recovers_planted_roots(
        roots in prop::collection::vec((-6i64..=6, 1i64..=4), 1..5),
        quadratic in any::<bool>(),
    ) {
        let mut planted: Vec<Scalar> = roots.iter().map(|&(p, q)| Scalar::frac(p, q)).collect();
        let mut p = planted.iter().fold(Poly::constant(Scalar::one()), |acc, r| acc.times(&Poly::linear(r.clone())));
        if quadratic {
            // λ^2 + 1 has no rational root.
            p = p.times(&Poly::new(vec![Scalar::one(), Scalar::zero(), Scalar::one()]));
        }
        let mut found = rational_roots(&p, false).unwrap();
        for r in &found {
            prop_assert!(p.eval(r).is_zero());
        }
        planted.sort_by(Scalar::cmp_lex);
        found.sort_by(Scalar::cmp_lex);
        prop_assert_eq!(found, planted);
    }

    #[test]
    fn determinant_routes_agree(m in (1usize..=4).prop_flat_map(int_matrix)) {
        prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        prop_assert_eq!(m.charpoly(), m.charpoly_cofactor());
    }

    #[test]
    fn charpoly_is_conjugation_invariant(g in element_with_ring()) {
        let n = g.n();
        let h = chevalley_generator(g.ring(), n, 1, n, 0, Scalar::int(2)).unwrap();
        let conj = h.mul(&g).unwrap().mul(&h.inverse()).unwrap();
        prop_assert_eq!(conj.charpoly(), g.charpoly());
    }

    #[test]
    fn twist_laws(g in element_with_ring(), h_seed in any::<u64>()) {
        let spec = ThetaSpec::for_element(&g);
        let tg = theta(spec, &g).unwrap();
        prop_assert!(is_theta_of(&tg, &g));
        prop_assert_eq!(theta(spec, &tg).unwrap(), g.clone());

        let mut s = kmdecomp::sample::Sampler::new(h_seed);
        let h = s.group_element(g.ring(), g.n());
        let k = s.k_element(g.ring(), g.n());
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(theta(spec, &gh).unwrap(), tg.mul(&theta(spec, &h).unwrap()).unwrap());

        let v = tau(spec, &g).unwrap();
        prop_assert_eq!(v.matrix(), &tau_by_definition(&g));
        prop_assert!(is_member(spec, SubsetTag::Q, &v).unwrap());
        prop_assert!(is_member(spec, SubsetTag::K, &k).unwrap());
        prop_assert_eq!(tau(spec, &g.mul(&k).unwrap()).unwrap(), v.clone());
        prop_assert_eq!(tau(spec, &v).unwrap(), v.mul(&v).unwrap());
    }

    #[test]
    fn k_meets_borel_in_m(
        g in (prop::sample::select(vec![RingSpec::Q, RingSpec::QI]), 2usize..=3).prop_flat_map(|(r, n)| group_element(r, n)),
        seed in any::<u64>(),
    ) {
        let spec = ThetaSpec::for_element(&g);
        let mut s = kmdecomp::sample::Sampler::new(seed);
        let k = s.k_element(g.ring(), g.n());
        let t = s.torus_element(g.ring(), g.n());
        for x in [g.clone(), k.clone(), k.mul(&t).unwrap(), t] {
            let in_k = is_member(spec, SubsetTag::K, &x).unwrap();
            let in_b = is_member(spec, SubsetTag::BPlus, &x).unwrap();
            prop_assert_eq!(in_k && in_b, is_member(spec, SubsetTag::M, &x).unwrap(), "x = {:?}", x);
        }
    }

    #[test]
    fn element_json_round_trips(g in element_with_ring()) {
        let back = GroupElement::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn coxeter_length_identities(word in prop::collection::vec(0usize..3, 0..12), i in 0usize..3) {
        let gcm = Gcm::affine_a(2);
        let w = WeylElement::from_word(&gcm, &word).unwrap();
        let l = w.length();
        prop_assert!(l <= word.len() && l % 2 == word.len() % 2);
        prop_assert_eq!(w.inverse().length(), l);
        let ws = w.times_generator(i).unwrap().length();
        prop_assert!(ws + 1 == l || ws == l + 1);
        let reduced = w.reduced_word();
        prop_assert_eq!(reduced.len(), l);
        prop_assert_eq!(word_matrix(&gcm, &reduced), word_matrix(&gcm, &word));
    }

    #[test]
    fn coverings_are_optimal_and_monotone(
        n in 2usize..=6,
        bonds in prop::collection::vec(0i64..=4, 15),
    ) {
        let mut rows = vec![vec![0i64; n]; n];
        let mut k = 0;
        for i in 0..n {
            rows[i][i] = 2;
            for j in i + 1..n {
                if bonds[k] > 0 {
                    rows[i][j] = -1;
                    rows[j][i] = -bonds[k];
                }
                k += 1;
            }
        }
        let gcm = Gcm::new(rows).unwrap();
        let cover = min_spherical_cover(&gcm);
        prop_assert_eq!(cover.r(), exhaustive_min_parts(&gcm));
        for part in &cover.partition {
            prop_assert!(finite_by_definition(&gcm, part));
        }
        let sub: Vec<usize> = (0..n - 1).collect();
        prop_assert!(min_spherical_cover(&gcm.induced(&sub)).r() <= cover.r());
    }
}
