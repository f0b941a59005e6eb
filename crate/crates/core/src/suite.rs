//! Self-checks over seeded random data: every module invariant as a named
//! check, and the acceptance criteria with their size and time budgets.

use std::time::Instant;

use num_traits::Signed;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coxeter::{
    enumerate_by_bfs, find_straight_candidate, is_finite_type, is_finite_type_by_minors, is_straight, length, Gcm,
    WeylElement, STRAIGHT_N_MAX,
};
use crate::decomp::{
    birkhoff, birkhoff_by_reversal, cartan, diag_test, hole_closed_form, hole_witness, iwasawa, nucleus_member, polar,
    sl2_sqrt, DiagVerdict, NucleusVerdict, Side, SqrtVerdict, DEFAULT_CHAIN_DEPTH,
};
use crate::dynkin::{connected_diagrams, exhaustive_cover, kuk_bound, min_spherical_cover};
use crate::error::{Error, Result};
use crate::involution::{
    check_theta_on_torus, is_member, is_symmetric_by_definition, tau, theta, SubsetTag, ThetaSpec,
};
use crate::matgrp::{chevalley_generator, GroupElement, Matrix};
use crate::ring::{rational_roots, LaurentPoly, Poly, Ring, RingSpec, Scalar};
use crate::sample::Sampler;

pub const ALL_RINGS: [RingSpec; 4] = [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q, RingSpec::LAURENT_QI];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    /// Wall-clock limit; exceeding it fails the check.
    pub budget_ms: Option<f64>,
}

impl Check {
    pub fn line(&self) -> String {
        let budget = self.budget_ms.map(|b| format!(" / {b:.0} ms")).unwrap_or_default();
        format!(
            "{} {} ({:.1} ms{}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_ms,
            budget,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub kind: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "seed": self.seed,
            "all_passed": self.all_passed(),
            "checks": self.checks,
        })
    }

    /// The report without timings, which is what determinism is about.
    pub fn outcomes(&self) -> Value {
        json!(self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect::<Vec<_>>())
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks.iter().map(Check::line).collect()
    }
}

/// Pass with a summary, or fail with the first counterexample.
type Probe = std::result::Result<String, String>;

macro_rules! require {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Independent sampler stream per check, stable under reordering.
fn stream(seed: u64, name: &str) -> Sampler {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    Sampler::new(seed ^ h)
}

fn run(seed: u64, name: &str, budget_ms: Option<f64>, f: impl FnOnce(&mut Sampler) -> Probe) -> Check {
    let mut s = stream(seed, name);
    let start = Instant::now();
    let outcome = f(&mut s);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = budget_ms {
        if elapsed_ms > b {
            passed = false;
            detail = format!("over time budget; {detail}");
        }
    }
    Check {
        name: name.into(),
        passed,
        detail,
        elapsed_ms,
        budget_ms,
    }
}

type CheckFn = fn(&mut Sampler) -> Probe;

pub const LEMMAS: &[(&str, CheckFn)] = &[
    ("ring_homomorphisms", ring_homomorphisms),
    ("laurent_sqrt_of_square", laurent_sqrt_of_square),
    ("rational_roots_vs_divisors", rational_roots_vs_divisors),
    ("charpoly_ends", charpoly_ends),
    ("charpoly_conjugation_invariant", charpoly_conjugation_invariant),
    ("bareiss_vs_cofactor", bareiss_vs_cofactor),
    ("generator_relations", generator_relations),
    ("theta_homomorphism", |s| theta_homomorphism(s, 500)),
    ("theta_involutive", |s| theta_involutive(s, 500)),
    ("tau_lands_in_q", |s| tau_lands_in_q(s, 500)),
    ("twist_coset_law", |s| twist_coset_law(s, 500)),
    ("twist_squaring", |s| twist_squaring(s, 500)),
    ("theta_on_torus", |s| theta_on_torus(s, 100)),
    ("m_cap_a_trivial", m_cap_a_trivial),
    ("torus_is_m_times_a", torus_is_m_times_a),
    ("k_cap_b_is_m", k_cap_b_is_m),
    ("iwasawa_recompose_deterministic", |s| iwasawa_sl3(s, 200)),
    ("iwasawa_other_rings", iwasawa_other_rings),
    ("birkhoff_routes_agree", birkhoff_routes_agree),
    ("a_is_t_cap_tau_g", a_is_t_cap_tau_g),
    ("hole_falsifier", |_| hole_falsifier()),
    ("tau_squares_on_q", tau_squares_on_q),
    ("sqrt_chain", |s| sqrt_chain_sl3(s, 50)),
    ("cartan_polar", |s| cartan_polar(s, 2, 100)),
    ("cartan_polar_sl3", |s| cartan_polar(s, 3, 50)),
    ("length_vs_bfs", |_| length_vs_bfs()),
    ("length_identities", length_identities),
    ("affine_a1_straight", |_| affine_a1_straight()),
    ("finiteness_routes_agree", |_| finiteness_routes_agree()),
    ("finite_groups_not_straight", |_| finite_groups_not_straight()),
    ("straight_candidates", |_| straight_candidates()),
    ("cover_vs_exhaustive", cover_vs_exhaustive),
    ("cover_monotone", cover_monotone),
    ("json_round_trips", json_round_trips),
    ("sampler_deterministic", sampler_deterministic),
];

/// Every module invariant, each on its own seeded stream.
pub fn lemma_suite(seed: u64) -> SuiteReport {
    SuiteReport {
        kind: "lemmas".into(),
        seed,
        checks: LEMMAS.iter().map(|&(name, f)| run(seed, name, None, f)).collect(),
    }
}

/// The acceptance criteria at their stated sizes and time budgets.
pub fn acceptance_suite(seed: u64) -> SuiteReport {
    let budget = |s: f64| Some(s * 1e3);
    let checks = vec![
        run(seed, "1_hole_reproduction", budget(1.0), |_| hole_reproduction()),
        run(seed, "2_refined_iwasawa", budget(5.0), |s| iwasawa_sl3(s, 200)),
        run(seed, "3_twist_laws", budget(10.0), |s| twist_laws(s, 500)),
        run(seed, "4_torus_lemmas", None, |s| {
            let a = theta_on_torus(s, 100)?;
            let b = m_cap_a_trivial(s)?;
            Ok(format!("{a}; {b}"))
        }),
        run(seed, "5_non_existence_falsifier", budget(1.0), |_| hole_falsifier()),
        run(seed, "6_spherical_nucleus", budget(10.0), |s| sqrt_chain_sl3(s, 50)),
        run(seed, "7_coxeter_engine", budget(5.0), |_| {
            let a = length_vs_bfs()?;
            let b = affine_a1_straight()?;
            Ok(format!("{a}; {b}"))
        }),
        run(seed, "8_spherical_coverings", budget(60.0), |_| spherical_coverings()),
        run(seed, "9_cartan_polar", budget(5.0), |s| cartan_polar(s, 2, 100)),
    ];
    SuiteReport {
        kind: "acceptance".into(),
        seed,
        checks,
    }
}

// ---------------------------------------------------------------- rings

fn ring_homomorphisms(s: &mut Sampler) -> Probe {
    type Map = fn(&LaurentPoly) -> LaurentPoly;
    let maps: [(&str, Map); 2] = [("sigma", LaurentPoly::sigma), ("rho", LaurentPoly::rho)];
    for _ in 0..1000 {
        let x = s.laurent(RingSpec::LAURENT_QI, 4);
        let y = s.laurent(RingSpec::LAURENT_QI, 4);
        for (name, f) in maps {
            require!(f(&x.plus(&y)) == f(&x).plus(&f(&y)), "{name} not additive on {x}, {y}");
            require!(
                f(&x.times(&y)) == f(&x).times(&f(&y)),
                "{name} not multiplicative on {x}, {y}"
            );
            require!(f(&f(&x)) == x, "{name} not an involution on {x}");
        }
    }
    Ok("1000 pairs".into())
}

fn laurent_sqrt_of_square(s: &mut Sampler) -> Probe {
    for k in 0..200 {
        let ring = if k % 2 == 0 {
            RingSpec::LAURENT_Q
        } else {
            RingSpec::LAURENT_QI
        };
        let q = s.laurent(ring, 4);
        if q.is_zero() {
            continue;
        }
        let r = q.times(&q).sqrt(ring.is_gaussian());
        require!(
            r == Some(q.clone()) || r == Some(q.negated()),
            "sqrt of ({q})^2 gave {r:?}"
        );
    }
    Ok("200 squares".into())
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `q^d P(p/q)`, exact.
fn homogeneous_eval(c: &[i64], p: i64, q: i64) -> i128 {
    let d = c.len() - 1;
    c.iter()
        .enumerate()
        .map(|(k, &ck)| ck as i128 * (p as i128).pow(k as u32) * (q as i128).pow((d - k) as u32))
        .sum()
}

/// Rational roots with multiplicity by the rational-root theorem and
/// repeated differentiation.
fn roots_by_divisors(c: &[i64]) -> Vec<Scalar> {
    let mut c = c.to_vec();
    let mut out = Vec::new();
    while c.len() > 1 && c[0] == 0 {
        out.push(Scalar::zero());
        c.remove(0);
    }
    if c.len() == 1 {
        return out;
    }
    let lead = *c.last().expect("nonempty");
    for p in divisors(c[0]) {
        for q in divisors(lead) {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            for p in [p, -p] {
                let mut d = c.clone();
                while d.len() > 1 && homogeneous_eval(&d, p, q) == 0 {
                    out.push(Scalar::frac(p, q));
                    d = (1..d.len()).map(|k| k as i64 * d[k]).collect();
                }
            }
        }
    }
    out.sort_by(Scalar::cmp_lex);
    out
}

fn rational_roots_vs_divisors(s: &mut Sampler) -> Probe {
    let mut with_roots = 0;
    for _ in 0..100 {
        let rng = s.rng();
        let degree = rng.gen_range(1..=5);
        let linear = rng.gen_range(0..=degree);
        let mut c = vec![rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 }];
        for _ in 0..linear {
            c = int_poly_mul(&c, &[rng.gen_range(-4..=4), rng.gen_range(1..=3)]);
        }
        let mut rest: Vec<i64> = (0..=degree - linear).map(|_| rng.gen_range(-5..=5)).collect();
        if let Some(last) = rest.last_mut() {
            if *last == 0 {
                *last = 1;
            }
        }
        c = int_poly_mul(&c, &rest);
        let p = Poly::new(c.iter().map(|&x| Scalar::int(x)).collect());
        let mut got = lib(rational_roots(&p, false))?;
        got.sort_by(Scalar::cmp_lex);
        let want = roots_by_divisors(&c);
        require!(got == want, "roots of {c:?}: got {got:?}, expected {want:?}");
        with_roots += usize::from(!want.is_empty());
    }
    Ok(format!("100 polynomials, {with_roots} with rational roots"))
}

// ---------------------------------------------------------------- matrices

fn charpoly_ends(s: &mut Sampler) -> Probe {
    for ring in ALL_RINGS {
        for _ in 0..25 {
            let n = s.rng().gen_range(2..=4);
            let g = s.group_element(ring, n);
            let cp = g.charpoly();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            require!(cp.leading().is_some_and(LaurentPoly::is_one), "charpoly {cp} not monic");
            require!(
                cp.coeff(0) == LaurentPoly::int(sign),
                "charpoly {cp} has wrong constant term"
            );
        }
    }
    Ok("100 elements".into())
}

fn charpoly_conjugation_invariant(s: &mut Sampler) -> Probe {
    for k in 0..100 {
        let ring = ALL_RINGS[k % 4];
        let n = s.rng().gen_range(2..=3);
        let g = s.group_element(ring, n);
        let h = s.group_element(ring, n);
        let c = lib(h.mul(&g).and_then(|x| x.mul(&h.inverse())))?;
        require!(c.charpoly() == g.charpoly(), "conjugation changed charpoly of {g:?}");
        require!(
            c.charpoly() == c.matrix().charpoly_cofactor(),
            "charpoly routes disagree on {c:?}"
        );
    }
    Ok("100 conjugate pairs".into())
}

fn bareiss_vs_cofactor(s: &mut Sampler) -> Probe {
    for ring in ALL_RINGS {
        for n in 1..=4 {
            for _ in 0..10 {
                let m = s.matrix(ring, n);
                require!(m.det() == m.det_cofactor(), "determinant routes disagree on {m:?}");
            }
        }
    }
    Ok("160 matrices".into())
}

fn generator_relations(s: &mut Sampler) -> Probe {
    let n = 4;
    let mut steinberg = 0;
    for k in 0..200 {
        let ring = ALL_RINGS[k % 4];
        let rng = s.rng();
        let mut pick = || loop {
            let i = rng.gen_range(1..=n);
            let j = rng.gen_range(1..=n);
            if i != j {
                break (i, j);
            }
        };
        let ((i, j), (p, l)) = (pick(), pick());
        let e1 = if ring.is_laurent() {
            s.rng().gen_range(-1..=1)
        } else {
            0
        };
        let e2 = if ring.is_laurent() {
            s.rng().gen_range(-1..=1)
        } else {
            0
        };
        let a = s.nonzero_scalar(ring.is_gaussian(), 3);
        let b = s.nonzero_scalar(ring.is_gaussian(), 3);
        let x = lib(chevalley_generator(ring, n, i, j, e1, a.clone()))?;
        let y = lib(chevalley_generator(ring, n, p, l, e2, b.clone()))?;
        let xy = lib(x.mul(&y))?;
        let commute = xy == lib(y.mul(&x))?;
        require!(
            commute == (j != p && i != l),
            "commutation of x_{i}{j} and x_{p}{l} is wrong"
        );
        if j == p && i != l {
            let comm = lib(xy.mul(&x.inverse()).and_then(|z| z.mul(&y.inverse())))?;
            let want = lib(chevalley_generator(ring, n, i, l, e1 + e2, a.times(&b)))?;
            require!(comm == want, "[x_{i}{j}, x_{j}{l}] is not x_{i}{l}");
            steinberg += 1;
        }
    }
    Ok(format!("200 pairs, {steinberg} commutator identities"))
}

// ---------------------------------------------------------------- involution

fn sample_elements(s: &mut Sampler, ring: RingSpec, count: usize) -> Vec<GroupElement> {
    (0..count)
        .map(|_| {
            let n = s.rng().gen_range(2..=3);
            s.group_element(ring, n)
        })
        .collect()
}

fn theta_homomorphism(s: &mut Sampler, per_model: usize) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for _ in 0..per_model / 2 {
            let n = s.rng().gen_range(2..=3);
            let g = s.group_element(ring, n);
            let h = s.group_element(ring, n);
            let lhs = lib(theta(spec, &lib(g.mul(&h))?))?;
            let rhs = lib(lib(theta(spec, &g))?.mul(&lib(theta(spec, &h))?))?;
            require!(lhs == rhs, "theta(gh) != theta(g)theta(h) for {g:?}, {h:?}");
        }
    }
    Ok(format!("{per_model} pairs per model"))
}

fn theta_involutive(s: &mut Sampler, per_model: usize) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for g in sample_elements(s, ring, per_model / 2) {
            require!(lib(theta(spec, &lib(theta(spec, &g))?))? == g, "theta^2 != id on {g:?}");
        }
    }
    Ok(format!("{per_model} elements per model"))
}

fn tau_lands_in_q(s: &mut Sampler, per_model: usize) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for g in sample_elements(s, ring, per_model / 2) {
            let v = lib(tau(spec, &g))?;
            require!(lib(is_member(spec, SubsetTag::Q, &v))?, "tau({g:?}) not in Q");
            require!(
                lib(is_symmetric_by_definition(spec, &v))?,
                "tau({g:?}) fails theta(v) = v^-1"
            );
        }
    }
    Ok(format!("{per_model} elements per model"))
}

fn twist_coset_law(s: &mut Sampler, per_model: usize) -> Probe {
    let mut same = 0;
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for g in sample_elements(s, ring, per_model / 2) {
            let k = s.k_element(ring, g.n());
            require!(
                lib(tau(spec, &lib(g.mul(&k))?))? == lib(tau(spec, &g))?,
                "tau(gk) != tau(g) for {g:?}"
            );
            // converse on pairs that may or may not share a coset
            let x = if s.rng().gen_bool(0.5) {
                k
            } else {
                s.group_element(ring, g.n())
            };
            let h = lib(g.mul(&x))?;
            let equal = lib(tau(spec, &g))? == lib(tau(spec, &h))?;
            let coset = lib(is_member(spec, SubsetTag::K, &lib(h.inverse().mul(&g))?))?;
            require!(equal == coset, "tau(g) = tau(h) is {equal} but h^-1 g in K is {coset}");
            same += usize::from(equal);
        }
    }
    Ok(format!("{per_model} elements per model, {same} same-coset pairs"))
}

fn twist_squaring(s: &mut Sampler, per_model: usize) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for g in sample_elements(s, ring, per_model / 2) {
            let v = lib(tau(spec, &g))?;
            require!(
                lib(tau(spec, &v))? == lib(v.mul(&v))?,
                "tau(tau(g)) != tau(g)^2 for {g:?}"
            );
        }
    }
    Ok(format!("{per_model} elements per model"))
}

fn twist_laws(s: &mut Sampler, per_model: usize) -> Probe {
    let parts = [
        theta_involutive(s, per_model)?,
        theta_homomorphism(s, per_model)?,
        tau_lands_in_q(s, per_model)?,
        twist_coset_law(s, per_model)?,
        twist_squaring(s, per_model)?,
    ];
    Ok(parts.join("; "))
}

fn theta_on_torus(s: &mut Sampler, count: usize) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for _ in 0..count {
            let n = s.rng().gen_range(1..=4);
            let t = s.torus_element(ring, n);
            require!(
                lib(check_theta_on_torus(spec, &t))?,
                "theta(t) != sigma(t)^-1 for {t:?}"
            );
        }
    }
    Ok(format!("{count} torus elements per ring"))
}

fn m_cap_a_trivial(_: &mut Sampler) -> Probe {
    let mut checked = 0;
    for ring in [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q] {
        let spec = ThetaSpec::for_ring(ring);
        for n in 1..=5 {
            for bits in 0u32..1 << n {
                if bits.count_ones() % 2 == 1 {
                    continue;
                }
                let entries = (0..n)
                    .map(|i| LaurentPoly::int(if bits >> i & 1 == 1 { -1 } else { 1 }))
                    .collect();
                let d = lib(GroupElement::diagonal(entries, ring))?;
                require!(lib(is_member(spec, SubsetTag::M, &d))?, "sign matrix {d:?} not in M");
                let in_a = lib(is_member(spec, SubsetTag::A, &d))?;
                require!(in_a == (bits == 0), "sign matrix {d:?} has A-membership {in_a}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} sign matrices, only the identity in A"))
}

fn torus_is_m_times_a(s: &mut Sampler) -> Probe {
    let spec = ThetaSpec::for_ring(RingSpec::Q);
    for _ in 0..100 {
        let n = s.rng().gen_range(1..=5);
        let t = s.torus_element(RingSpec::Q, n);
        let diag = t.matrix().diagonal_entries();
        let sign = |p: &LaurentPoly| if p.coeff(0).re().is_negative() { -1 } else { 1 };
        let m = lib(GroupElement::diagonal(
            diag.iter().map(|p| LaurentPoly::int(sign(p))).collect(),
            RingSpec::Q,
        ))?;
        let a = lib(GroupElement::diagonal(
            diag.iter().map(|p| p.scale(&Scalar::int(sign(p)))).collect(),
            RingSpec::Q,
        ))?;
        require!(lib(is_member(spec, SubsetTag::M, &m))?, "{m:?} not in M");
        require!(lib(is_member(spec, SubsetTag::A, &a))?, "{a:?} not in A");
        require!(lib(m.mul(&a))? == t, "t != m a for {t:?}");
    }
    Ok("100 torus elements split as m a".into())
}

fn k_cap_b_is_m(_: &mut Sampler) -> Probe {
    let mut members = 0;
    let mut total = 0;
    for ring in [RingSpec::Q, RingSpec::QI] {
        let spec = ThetaSpec::for_ring(ring);
        let mut diag = vec![Scalar::int(1), Scalar::int(-1), Scalar::int(2), Scalar::frac(-1, 2)];
        if ring.is_gaussian() {
            diag.extend([Scalar::i(), Scalar::i().negated(), Scalar::gaussian_int(1, 1)]);
        }
        let upper = [Scalar::zero(), Scalar::int(1), Scalar::frac(-1, 2)];
        for n in 2..=3usize {
            let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let diag_choices = diag.len().pow(n as u32 - 1);
            for dc in 0..diag_choices {
                let mut d: Vec<Scalar> = (0..n - 1)
                    .map(|i| diag[dc / diag.len().pow(i as u32) % diag.len()].clone())
                    .collect();
                let prod = d.iter().fold(Scalar::one(), |acc, x| acc.times(x));
                d.push(prod.inv().expect("nonzero"));
                for uc in 0..upper.len().pow(slots.len() as u32) {
                    let mut m = Matrix::<Scalar>::diagonal(d.clone());
                    for (idx, &(i, j)) in slots.iter().enumerate() {
                        // row i of d u is d_i times row i of u
                        let x = upper[uc / upper.len().pow(idx as u32) % upper.len()].times(&d[i]);
                        m.set(i, j, x);
                    }
                    let b = lib(GroupElement::from_scalar(&m, ring))?;
                    total += 1;
                    if lib(is_member(spec, SubsetTag::K, &b))? {
                        require!(
                            lib(is_member(spec, SubsetTag::M, &b))?,
                            "{b:?} is in K and B but not in M"
                        );
                        members += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{total} upper triangular elements, {members} in K, all in M"))
}

// ---------------------------------------------------------------- decompositions

fn iwasawa_sl3(s: &mut Sampler, count: usize) -> Probe {
    let mut worst = 0f64;
    for k in 0..count {
        let g = s.bounded_height_element(RingSpec::Q, 3, 10);
        let side = if k % 2 == 0 { Side::Plus } else { Side::Minus };
        let f = lib(iwasawa(&g, side, 1e-10))?;
        require!(
            f.verified(),
            "residual {:e}, orthogonality {:e} on {g:?}",
            f.residual,
            f.orthogonality
        );
        let again = lib(iwasawa(&g, side, 1e-10))?;
        require!(
            f.a_squared == again.a_squared && f.u == again.u,
            "repeated run differs on {g:?}"
        );
        worst = worst.max(f.residual).max(f.orthogonality);
    }
    Ok(format!("{count} elements, worst defect {worst:.2e}"))
}

fn iwasawa_other_rings(s: &mut Sampler) -> Probe {
    for ring in [RingSpec::Q, RingSpec::QI] {
        for n in 2..=4 {
            for side in [Side::Plus, Side::Minus] {
                for _ in 0..10 {
                    let g = s.group_element(ring, n);
                    let f = lib(iwasawa(&g, side, 1e-8))?;
                    require!(f.verified(), "iwasawa not verified on {g:?}");
                    require!(
                        lib(is_member(ThetaSpec::for_ring(ring), SubsetTag::A, &f.a_squared))?,
                        "a^2 not in A"
                    );
                    let tag = if side == Side::Plus {
                        SubsetTag::UPlus
                    } else {
                        SubsetTag::UMinus
                    };
                    require!(
                        lib(is_member(ThetaSpec::for_ring(ring), tag, &f.u))?,
                        "u not unipotent on the right side"
                    );
                }
            }
        }
    }
    Ok("120 elements over Q and Q(i)".into())
}

fn birkhoff_routes_agree(s: &mut Sampler) -> Probe {
    let mut ok = 0;
    let mut outside = 0;
    for ring in ALL_RINGS {
        for _ in 0..50 {
            let n = s.rng().gen_range(2..=4);
            let g = s.group_element(ring, n);
            let a = birkhoff(&g, true);
            let b = birkhoff_by_reversal(&g);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    require!(a == b, "routes give different factors for {g:?}");
                    require!(a.recompose() == g, "factors do not recompose {g:?}");
                    ok += 1;
                }
                (Err(Error::OutsideBigCell(x)), Err(Error::OutsideBigCell(y))) => {
                    require!(x == y, "routes blame minors {x} and {y} for {g:?}");
                    outside += 1;
                }
                (a, b) => return Err(format!("routes disagree on {g:?}: {:?} vs {:?}", a.err(), b.err())),
            }
        }
    }
    Ok(format!("{ok} factored, {outside} outside the big cell"))
}

fn a_is_t_cap_tau_g(s: &mut Sampler) -> Probe {
    let spec = ThetaSpec::for_ring(RingSpec::Q);
    let mut diagonal = 0;
    for _ in 0..100 {
        let n = s.rng().gen_range(2..=4);
        let t = s.torus_element(RingSpec::Q, n);
        require!(
            lib(is_member(spec, SubsetTag::A, &lib(tau(spec, &t))?))?,
            "tau({t:?}) not in A"
        );
        for g in [
            lib(t.mul(&s.k_element(RingSpec::Q, n)))?,
            s.group_element(RingSpec::Q, n),
        ] {
            let v = lib(tau(spec, &g))?;
            if v.matrix().is_diagonal() {
                require!(
                    lib(is_member(spec, SubsetTag::A, &v))?,
                    "diagonal tau({g:?}) not positive"
                );
                diagonal += 1;
            }
        }
    }
    Ok(format!("100 torus elements, {diagonal} diagonal twists, all positive"))
}

fn hole_falsifier() -> Probe {
    let w = lib(hole_witness(1))?;
    let d = diag_test(&w.v);
    require!(
        d.verdict == DiagVerdict::NotDiagonalizable,
        "diag_test verdict {:?}",
        d.verdict
    );
    let (k, _) = d.obstruction.clone().ok_or("no obstruction coefficient")?;
    let e = d.obstruction_invariant().ok_or("no obstruction invariant")?;
    let expected = LaurentPoly::from_int_terms(&[(-1, 1), (0, 4), (1, 1)]);
    require!(k == 1 && e == expected, "obstruction at lambda^{k} is {e}");
    let r = lib(sl2_sqrt(&w.v))?;
    require!(r.verdict == SqrtVerdict::NoRoot, "sl2_sqrt verdict {:?}", r.verdict);
    let ob = r.obstruction.clone().ok_or("no sqrt obstruction")?;
    require!(
        ob == LaurentPoly::from_int_terms(&[(-1, 1), (0, 6), (1, 1)]),
        "sqrt obstruction is {ob}"
    );
    let nu = lib(nucleus_member(&w.v, &w.u, DEFAULT_CHAIN_DEPTH))?;
    require!(
        nu.verdict == NucleusVerdict::NotInNucleus,
        "nucleus verdict {:?}",
        nu.verdict
    );
    require!(nu.routes_agree == Some(true), "nucleus routes disagree");
    for n in 2..=5 {
        let w = lib(hole_witness(n))?;
        require!(
            diag_test(&w.v).verdict == DiagVerdict::NotDiagonalizable,
            "n = {n} witness passes diag_test"
        );
    }
    Ok(format!(
        "diag_test obstruction {expected}, sl2_sqrt obstruction {ob}, routes agree"
    ))
}

fn tau_squares_on_q(s: &mut Sampler) -> Probe {
    for ring in ALL_RINGS {
        let spec = ThetaSpec::for_ring(ring);
        for g in sample_elements(s, ring, 100) {
            let v = lib(tau(spec, &g))?;
            require!(lib(tau(spec, &v))? == lib(v.mul(&v))?, "tau(v) != v^2 for v = {v:?}");
        }
    }
    Ok("100 symmetric elements per ring".into())
}

fn sqrt_chain_sl3(s: &mut Sampler, count: usize) -> Probe {
    let spec = ThetaSpec::for_ring(RingSpec::Q);
    let mut worst = 0f64;
    for _ in 0..count {
        let g = s.group_element(RingSpec::Q, 3);
        let v = lib(tau(spec, &g))?;
        let c = lib(nucleus_member(&v, &g, DEFAULT_CHAIN_DEPTH))?;
        require!(
            c.verdict == NucleusVerdict::InNucleus,
            "verdict {:?} for tau({g:?})",
            c.verdict
        );
        require!(
            c.chain.len() == DEFAULT_CHAIN_DEPTH && c.chain_passes(),
            "chain fails for tau({g:?})"
        );
        worst = c
            .chain
            .iter()
            .fold(worst, |w, l| w.max(l.residual / l.bound.max(f64::MIN_POSITIVE)));
    }
    Ok(format!(
        "{count} chains of depth {DEFAULT_CHAIN_DEPTH}, worst residual/bound {worst:.2e}"
    ))
}

fn cartan_polar(s: &mut Sampler, n: usize, count: usize) -> Probe {
    let mut worst = 0f64;
    for _ in 0..count {
        let g = s.group_element(RingSpec::Q, n);
        let c = lib(cartan(&g, 1e-8))?;
        require!(c.verified(), "cartan residual {:e} on {g:?}", c.residual);
        let p = lib(polar(&g, 1e-8))?;
        require!(
            p.verified(),
            "polar fails on {g:?}: residual {:e}, minors {:?}",
            p.residual,
            p.p_leading_minors
        );
        worst = worst.max(c.residual).max(p.residual);
    }
    Ok(format!("{count} elements of SL_{n}(Q), worst residual {worst:.2e}"))
}

// ---------------------------------------------------------------- Coxeter

fn length_vs_bfs() -> Probe {
    for (name, gcm, order) in [
        ("A2", Gcm::type_a(2), 6),
        ("B2", Gcm::type_b(2), 8),
        ("G2", Gcm::type_g2(), 12),
    ] {
        let bfs = enumerate_by_bfs(&gcm, 64);
        require!(bfs.len() == order, "{name} has {} elements", bfs.len());
        for (m, &d) in &bfs {
            let l = length(&WeylElement::from_matrix(&gcm, m.clone()));
            require!(l == d, "{name}: greedy length {l}, BFS length {d}");
        }
    }
    Ok("A2, B2, G2 exhaustive (6, 8, 12 elements)".into())
}

fn affine_a1_straight() -> Probe {
    let gcm = Gcm::affine_a(1);
    let c = lib(WeylElement::from_word(&gcm, &[0, 1]))?;
    for k in 0..=20 {
        let l = length(&c.pow(k));
        require!(l == 2 * k, "length of (s0 s1)^{k} is {l}");
    }
    let p = is_straight(&c, 20);
    require!(
        p.straight && p.lengths == (1..=20).map(|j| 2 * j).collect::<Vec<_>>(),
        "profile {:?}",
        p.lengths
    );
    Ok("l((s0 s1)^k) = 2k for k <= 20".into())
}

fn length_identities(s: &mut Sampler) -> Probe {
    let hyperbolic = lib(Gcm::new(vec![vec![2, -3], vec![-3, 2]]))?;
    let gcms = [Gcm::type_a(3), Gcm::affine_a(2), hyperbolic, Gcm::type_b(3)];
    for gcm in &gcms {
        for _ in 0..40 {
            let len = s.rng().gen_range(0..=12);
            let word: Vec<usize> = (0..len).map(|_| s.rng().gen_range(0..gcm.n())).collect();
            let w = lib(WeylElement::from_word(gcm, &word))?;
            let l = w.length();
            require!(w.inverse().length() == l, "l(w^-1) != l(w) for {word:?}");
            for i in 0..gcm.n() {
                let li = lib(w.times_generator(i))?.length();
                require!(
                    li + 1 == l || li == l + 1,
                    "l(w s_{i}) = {li} vs l(w) = {l} for {word:?}"
                );
            }
        }
    }
    Ok("160 words".into())
}

/// `(a_ij, a_ji)` pairs with product at most 5.
const BONDS: [(i64, i64); 11] = [
    (0, 0),
    (-1, -1),
    (-1, -2),
    (-2, -1),
    (-1, -3),
    (-3, -1),
    (-1, -4),
    (-4, -1),
    (-2, -2),
    (-1, -5),
    (-5, -1),
];

fn finiteness_routes_agree() -> Probe {
    let (mut checked, mut skipped) = (0, 0);
    let mut compare = |rows: Vec<Vec<i64>>| -> std::result::Result<(), String> {
        let gcm = lib(Gcm::new(rows))?;
        match is_finite_type_by_minors(&gcm) {
            Ok(b) => {
                require!(b == is_finite_type(&gcm), "routes disagree on {gcm:?}");
                checked += 1;
            }
            Err(Error::NotSymmetrizable) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
        Ok(())
    };
    for &(a, b) in &BONDS {
        compare(vec![vec![2, a], vec![b, 2]])?;
    }
    for &(a01, a10) in &BONDS {
        for &(a02, a20) in &BONDS {
            for &(a12, a21) in &BONDS {
                compare(vec![vec![2, a01, a02], vec![a10, 2, a12], vec![a20, a21, 2]])?;
            }
        }
    }
    Ok(format!(
        "{checked} symmetrizable matrices agree, {skipped} not symmetrizable"
    ))
}

fn finite_groups_not_straight() -> Probe {
    for gcm in [Gcm::type_a(2), Gcm::type_b(2)] {
        let elements = enumerate_by_bfs(&gcm, 64);
        for m in elements.keys() {
            let w = WeylElement::from_matrix(&gcm, m.clone());
            if w.is_identity() {
                require!(is_straight(&w, 2).degenerate, "identity not flagged degenerate");
                continue;
            }
            require!(
                !is_straight(&w, elements.len()).straight,
                "{gcm:?} has a straight element"
            );
        }
    }
    Ok("A2 and B2 exhaustive".into())
}

fn straight_candidates() -> Probe {
    let a1 = lib(find_straight_candidate(&Gcm::affine_a(1), 4))?.ok_or("none for affine A1")?;
    require!(a1.word() == [0, 1], "affine A1 candidate {:?}", a1.word());
    let a2 = lib(find_straight_candidate(&Gcm::affine_a(2), 4))?.ok_or("none for affine A2")?;
    require!(
        is_straight(&a2, STRAIGHT_N_MAX).straight,
        "affine A2 candidate not straight"
    );
    require!(
        matches!(
            find_straight_candidate(&Gcm::type_a(2), 4),
            Err(Error::PreconditionFailed(_))
        ),
        "finite type accepted"
    );
    Ok(format!("affine A1: {:?}, affine A2: {:?}", a1.word(), a2.word()))
}

// ---------------------------------------------------------------- coverings

/// Random GCM whose bond products lie in `0..=4`.
fn random_gcm(s: &mut Sampler, n: usize) -> Gcm {
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = BONDS[s.rng().gen_range(0..9)];
            rows[i][j] = a;
            rows[j][i] = b;
        }
    }
    Gcm::new(rows).expect("valid by construction")
}

fn check_cover(gcm: &Gcm) -> std::result::Result<usize, String> {
    let c = min_spherical_cover(gcm);
    let e = exhaustive_cover(gcm);
    require!(
        c.r() == e.r(),
        "branch and bound r = {} but exhaustive r = {} on {gcm:?}",
        c.r(),
        e.r()
    );
    require!(c.r() <= gcm.n(), "r exceeds n on {gcm:?}");
    for part in &c.partition {
        require!(
            is_finite_type(&gcm.induced(part)),
            "part {part:?} of {gcm:?} is not spherical"
        );
    }
    Ok(c.r())
}

fn cover_vs_exhaustive(s: &mut Sampler) -> Probe {
    let mut count = 0;
    for n in 1..=4 {
        for gcm in connected_diagrams(n, &[1, 2, 3, 4]) {
            check_cover(&gcm)?;
            count += 1;
        }
    }
    for _ in 0..30 {
        let n = s.rng().gen_range(5..=7);
        check_cover(&random_gcm(s, n))?;
        count += 1;
    }
    Ok(format!("{count} diagrams"))
}

fn cover_monotone(s: &mut Sampler) -> Probe {
    for _ in 0..40 {
        let n = s.rng().gen_range(2..=7);
        let gcm = random_gcm(s, n);
        let r = min_spherical_cover(&gcm).r();
        for v in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            let r2 = min_spherical_cover(&gcm.induced(&rest)).r();
            require!(r2 <= r, "deleting vertex {v} of {gcm:?} raises r from {r} to {r2}");
        }
    }
    Ok("40 diagrams".into())
}

fn spherical_coverings() -> Probe {
    let mut count = 0;
    for n in 1..=5 {
        for gcm in connected_diagrams(n, &[1, 2, 3, 4]) {
            check_cover(&gcm)?;
            count += 1;
        }
    }
    for n in 1..=8 {
        let k = kuk_bound(&Gcm::type_a(n));
        require!(
            k.covering.r() == 1 && k.bound == 2,
            "A_{n} gives r = {}",
            k.covering.r()
        );
    }
    let k = kuk_bound(&Gcm::affine_a(2));
    require!(
        k.covering.r() == 2 && k.bound == 3,
        "affine A2 gives r = {}",
        k.covering.r()
    );
    Ok(format!(
        "{count} connected diagrams agree; A_n: r = 1; affine A2: r = 2"
    ))
}

// ---------------------------------------------------------------- plumbing

fn json_round_trips(s: &mut Sampler) -> Probe {
    for ring in ALL_RINGS {
        for g in sample_elements(s, ring, 25) {
            let text = g.to_json().to_string();
            let back = lib(GroupElement::from_json(
                &serde_json::from_str(&text).map_err(|e| e.to_string())?,
            ))?;
            require!(back == g, "group element JSON round trip failed for {g:?}");
        }
    }
    let gcm = Gcm::affine_a(3);
    require!(
        lib(Gcm::from_json(&gcm.to_json()))?.0 == gcm,
        "GCM JSON round trip failed"
    );
    for value in [lib(hole_witness(2))?.to_json(), kuk_bound(&Gcm::affine_a(2)).to_json()] {
        let back: Value = serde_json::from_str(&value.to_string()).map_err(|e| e.to_string())?;
        require!(back == value, "certificate JSON round trip failed");
    }
    Ok("100 elements, GCM, certificates".into())
}

fn sampler_deterministic(s: &mut Sampler) -> Probe {
    let seed = s.rng().gen();
    let draw = |seed| {
        let mut t = Sampler::new(seed);
        ALL_RINGS.iter().map(|&r| t.group_element(r, 3)).collect::<Vec<_>>()
    };
    require!(draw(seed) == draw(seed), "sampler not deterministic for seed {seed}");
    Ok("same seed, same elements".into())
}

fn hole_reproduction() -> Probe {
    for n in 2..=5 {
        let w = lib(hole_witness(n))?;
        let got = w.charpoly.to_string();
        let want = hole_closed_form(n).to_string();
        require!(got == want, "n = {n}: {got} vs {want}");
        require!(
            w.v.matrix().charpoly_cofactor() == w.charpoly,
            "n = {n}: cofactor route differs"
        );
    }
    Ok("N = 2..5 match the closed form".into())
}
