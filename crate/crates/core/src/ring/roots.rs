//! Roots of polynomials inside the coefficient field.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Poly, Ring, Scalar};
use crate::error::{Error, Result};

/// Prime factorization of `|n|` by trial division, `n != 0`.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `|n|`, ascending. `n != 0`.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Whether the positive rational `q` is a sum of two rational squares,
/// i.e. a norm `s * sigma(s)` from `Q(i)`.
pub fn sum_of_two_squares(q: &BigRational) -> bool {
    if !q.is_positive() {
        return q.is_zero();
    }
    // a/b = (ab)/b^2, so it suffices to test the integer ab.
    let m = q.numer() * q.denom();
    factorize(&m)
        .iter()
        .all(|(p, e)| e % 2 == 0 || (p % 4u32) != BigInt::from(3))
}

/// Gaussian integer `a + bi` as a pair.
type GaussInt = (BigInt, BigInt);

/// All Gaussian integers dividing `z`, including every associate.
fn gaussian_divisors(z: &GaussInt) -> Vec<GaussInt> {
    let norm = &z.0 * &z.0 + &z.1 * &z.1;
    let mut out = Vec::new();
    for m in divisors(&norm) {
        let r = m.sqrt();
        let mut x = -r.clone();
        while x <= r {
            let rest = &m - &x * &x;
            let y = rest.sqrt();
            if &y * &y == rest {
                let ys = if y.is_zero() { vec![y] } else { vec![y.clone(), -y] };
                for y in ys {
                    // d | z  iff  z * conj(d) / N(d) is integral
                    let re = &z.0 * &x + &z.1 * &y;
                    let im = &z.1 * &x - &z.0 * &y;
                    if (&re % &m).is_zero() && (&im % &m).is_zero() {
                        out.push((x.clone(), y));
                    }
                }
            }
            x += 1;
        }
    }
    out
}

fn lcm_of_denominators(p: &Poly<Scalar>) -> BigInt {
    p.coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()).lcm(c.im().denom()))
}

fn to_int(q: &BigRational) -> BigInt {
    debug_assert!(q.is_integer());
    q.numer().clone()
}

fn candidates(p: &Poly<Scalar>, gaussian: bool) -> Vec<Scalar> {
    let scale = Scalar::real(BigRational::from_integer(lcm_of_denominators(p)));
    let ints: Vec<Scalar> = p.coeffs().iter().map(|c| c.times(&scale)).collect();
    let a0 = ints.first().expect("nonzero polynomial");
    let an = ints.last().expect("nonzero polynomial");
    let mut set = BTreeSet::new();
    if gaussian {
        let g0 = (to_int(a0.re()), to_int(a0.im()));
        let gn = (to_int(an.re()), to_int(an.im()));
        let nums = gaussian_divisors(&g0);
        let dens = gaussian_divisors(&gn);
        for (a, b) in &nums {
            for (c, d) in &dens {
                let num = Scalar::gaussian(
                    BigRational::from_integer(a.clone()),
                    BigRational::from_integer(b.clone()),
                );
                let den = Scalar::gaussian(
                    BigRational::from_integer(c.clone()),
                    BigRational::from_integer(d.clone()),
                );
                let q = num.times(&den.inv().expect("nonzero divisor"));
                set.insert(q.encode());
            }
        }
    } else {
        let nums = divisors(&to_int(a0.re()));
        let dens = divisors(&to_int(an.re()));
        for a in &nums {
            for d in &dens {
                for sign in [1, -1] {
                    let q = BigRational::new(a * sign, d.clone());
                    set.insert(Scalar::real(q).encode());
                }
            }
        }
    }
    let mut out: Vec<Scalar> = set.iter().map(|s| s.parse().expect("canonical")).collect();
    out.sort_by(Scalar::cmp_lex);
    out
}

/// All roots of `p` in `Q` (or `Q(i)` when `gaussian`), with multiplicity,
/// sorted by real then imaginary part.
///
/// Candidates come from the rational-root theorem applied to the primitive
/// integral form of `p`; over `Q(i)` the same sieve runs in the Gaussian
/// integers. Each confirmed root is divided out exactly so repeated roots
/// are counted.
pub fn rational_roots(p: &Poly<Scalar>, gaussian: bool) -> Result<Vec<Scalar>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !gaussian && p.coeffs().iter().any(|c| !c.is_real()) {
        return Err(Error::NotInRing("q".into()));
    }
    let mut roots = Vec::new();
    let mut rest = p.clone();
    while rest.coeff(0).is_zero() && rest.degree() > Some(0) {
        roots.push(Scalar::zero());
        rest = rest.deflate(&Scalar::zero()).0;
    }
    if rest.degree() == Some(0) {
        return Ok(roots);
    }
    for cand in candidates(&rest, gaussian) {
        loop {
            let (q, r) = rest.deflate(&cand);
            if !r.is_zero() {
                break;
            }
            roots.push(cand.clone());
            rest = q;
            if rest.degree() == Some(0) {
                break;
            }
        }
        if rest.degree() == Some(0) {
            break;
        }
    }
    roots.sort_by(Scalar::cmp_lex);
    Ok(roots)
}
