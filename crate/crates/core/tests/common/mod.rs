//! Test-side oracles. Each one works from a definition and shares no code
//! path with the library routine it checks beyond ring arithmetic.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use kmdecomp::coxeter::Gcm;
use kmdecomp::matgrp::GroupElement;
use kmdecomp::ring::{LaurentPoly, Scalar};
use serde_json::Value;

// ------------------------------------------------------------ involution

/// Coefficientwise conjugation and `t -> t^-1`.
pub fn sigma_rho(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(e, c)| (-e, conj(c))))
}

pub fn conj(c: &Scalar) -> Scalar {
    Scalar::new(c.re().clone(), -c.im().clone())
}

/// `x = θ(g)` iff `x (g^{σρ})^T = I`.
pub fn is_theta_of(x: &GroupElement, g: &GroupElement) -> bool {
    let gt = g.matrix().map(sigma_rho).transpose();
    x.matrix().mul(&gt).is_identity()
}

/// `τ(g) = g (g^{σρ})^T`, straight from the definition.
pub fn tau_by_definition(g: &GroupElement) -> kmdecomp::matgrp::Matrix<LaurentPoly> {
    g.matrix().mul(&g.matrix().map(sigma_rho).transpose())
}

// ------------------------------------------------------ integer Laurent

/// Integer Laurent polynomial, exponent to coefficient, no zero entries.
pub type Lp = BTreeMap<i64, i64>;

pub fn lp(terms: &[(i64, i64)]) -> Lp {
    let mut out = Lp::new();
    for &(e, c) in terms {
        *out.entry(e).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn lp_add(a: &Lp, b: &Lp) -> Lp {
    let terms: Vec<_> = a.iter().chain(b.iter()).map(|(&e, &c)| (e, c)).collect();
    lp(&terms)
}

pub fn lp_mul(a: &Lp, b: &Lp) -> Lp {
    let mut terms = Vec::new();
    for (&e, &c) in a {
        for (&f, &d) in b {
            terms.push((e + f, c * d));
        }
    }
    lp(&terms)
}

pub fn lp_neg(a: &Lp) -> Lp {
    a.iter().map(|(&e, &c)| (e, -c)).collect()
}

/// Parses the `{"exp": "coeff"}` encoding; coefficients must be integers.
pub fn lp_from_json(v: &Value) -> Option<Lp> {
    let terms: Option<Vec<(i64, i64)>> = v
        .as_object()?
        .iter()
        .map(|(e, c)| Some((e.parse().ok()?, c.as_str()?.parse().ok()?)))
        .collect();
    Some(lp(&terms?))
}

/// A square of a Laurent polynomial has even lowest and highest exponents.
pub fn lp_exponent_parity_allows_square(a: &Lp) -> bool {
    match (a.keys().next(), a.keys().next_back()) {
        (Some(lo), Some(hi)) => lo % 2 == 0 && hi % 2 == 0,
        _ => true,
    }
}

/// Polynomial in `λ` with [`Lp`] coefficients, lowest degree first.
pub type LambdaPoly = Vec<Lp>;

pub fn lambda_mul(a: &LambdaPoly, b: &LambdaPoly) -> LambdaPoly {
    let mut out = vec![Lp::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = lp_add(&out[i + j], &lp_mul(x, y));
        }
    }
    out
}

/// One line per nonzero term, `λ^i t^e c`, sorted.
pub fn normalize(p: &LambdaPoly) -> String {
    let mut lines = Vec::new();
    for (i, c) in p.iter().enumerate() {
        for (e, k) in c {
            lines.push(format!("λ^{i} t^{e} {k}"));
        }
    }
    lines.sort();
    lines.join("\n")
}

// ---------------------------------------------------------------- Coxeter

pub type IMat = Vec<Vec<i64>>;

/// `s_i : α_j ↦ α_j - a_ij α_i` on the root lattice, columns as images.
pub fn reflection(gcm: &Gcm, i: usize) -> IMat {
    let n = gcm.n();
    let mut m = vec![vec![0; n]; n];
    for j in 0..n {
        m[j][j] = 1;
        m[i][j] -= gcm.get(i, j);
    }
    m
}

pub fn imul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn word_matrix(gcm: &Gcm, word: &[usize]) -> IMat {
    let n = gcm.n();
    let id: IMat = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    word.iter().fold(id, |m, &i| imul(&m, &reflection(gcm, i)))
}

/// Breadth-first search of the Cayley graph to depth `max_len`: each element
/// with its distance and one word of that length.
pub fn cayley_bfs(gcm: &Gcm, max_len: usize) -> HashMap<IMat, (usize, Vec<usize>)> {
    let start = word_matrix(gcm, &[]);
    let mut seen = HashMap::from([(start.clone(), (0, Vec::new()))]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        let (d, word) = seen[&m].clone();
        if d == max_len {
            continue;
        }
        for i in 0..gcm.n() {
            let next = imul(&m, &reflection(gcm, i));
            if !seen.contains_key(&next) {
                let mut w = word.clone();
                w.push(i);
                seen.insert(next.clone(), (d + 1, w));
                queue.push_back(next);
            }
        }
    }
    seen
}

// ---------------------------------------------------------------- diagrams

/// `a_ij a_ji` for every pair `i < j`, in lexicographic pair order.
pub fn bond_vector(gcm: &Gcm, perm: &[usize]) -> Vec<i64> {
    let n = gcm.n();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (perm[i], perm[j]);
            out.push(gcm.get(a, b) * gcm.get(b, a));
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest bond vector over all relabelings.
pub fn canonical_bonds(gcm: &Gcm, perms: &[Vec<usize>]) -> Vec<i64> {
    perms
        .iter()
        .map(|p| bond_vector(gcm, p))
        .min()
        .expect("at least one permutation")
}

/// Connected diagrams on `n` vertices with `colors - 1` edge labels, up to
/// isomorphism: Burnside over `S_n` acting on pairs, then the inverse Euler
/// transform to pass from all diagrams to connected ones.
pub fn connected_diagram_counts(max_n: usize, colors: u64) -> Vec<u64> {
    let mut total = vec![1u64];
    for n in 1..=max_n {
        let perms = permutations(n);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut sum = 0u64;
        for p in &perms {
            let mut seen = vec![false; pairs.len()];
            let mut cycles = 0;
            for start in 0..pairs.len() {
                if seen[start] {
                    continue;
                }
                cycles += 1;
                let mut k = start;
                while !seen[k] {
                    seen[k] = true;
                    let (a, b) = (p[pairs[k].0], p[pairs[k].1]);
                    let e = (a.min(b), a.max(b));
                    k = pairs.iter().position(|&q| q == e).expect("pair");
                }
            }
            sum += colors.pow(cycles);
        }
        total.push(sum / perms.len() as u64);
    }
    let t: Vec<i128> = total.iter().map(|&x| x as i128).collect();
    let mut b = vec![0i128; max_n + 1];
    for n in 1..=max_n {
        b[n] = n as i128 * t[n] - (1..n).map(|k| b[k] * t[n - k]).sum::<i128>();
    }
    let mut c = vec![0i128; max_n + 1];
    for n in 1..=max_n {
        let lower: i128 = (1..n).filter(|d| n % d == 0).map(|d| d as i128 * c[d]).sum();
        c[n] = (b[n] - lower) / n as i128;
    }
    c.into_iter().map(|x| x as u64).collect()
}

/// Finite type for the subdiagram on `vertices`: the underlying graph is a
/// forest and every leading principal minor is positive.
pub fn finite_by_definition(gcm: &Gcm, vertices: &[usize]) -> bool {
    let k = vertices.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..k {
        for j in i + 1..k {
            if gcm.get(vertices[i], vertices[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
    }
    let a: Vec<Vec<i128>> = vertices
        .iter()
        .map(|&i| vertices.iter().map(|&j| i128::from(gcm.get(i, j))).collect())
        .collect();
    leading_minors(&a).into_iter().all(|m| m > 0)
}

/// Fraction-free elimination; entry `k` is the determinant of the leading
/// `(k+1)`-block. Stops at the first zero pivot, reporting zeros after it.
fn leading_minors(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut out = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        let pivot = m[k][k];
        out.push(pivot);
        if pivot == 0 {
            out.resize(n, 0);
            return out;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = pivot;
    }
    out
}

/// Fewest parts in a set partition of the vertices into finite-type
/// subdiagrams, by listing every set partition.
pub fn exhaustive_min_parts(gcm: &Gcm) -> usize {
    let n = gcm.n();
    let mut finite = vec![false; 1 << n];
    for (mask, f) in finite.iter_mut().enumerate().skip(1) {
        let vs: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        *f = finite_by_definition(gcm, &vs);
    }
    let mut best = usize::MAX;
    let mut blocks: Vec<usize> = Vec::new();
    fn go(v: usize, n: usize, blocks: &mut Vec<usize>, finite: &[bool], best: &mut usize) {
        if v == n {
            if blocks.iter().all(|&b| finite[b]) {
                *best = (*best).min(blocks.len());
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << v;
            go(v + 1, n, blocks, finite, best);
            blocks[i] &= !(1 << v);
        }
        blocks.push(1 << v);
        go(v + 1, n, blocks, finite, best);
        blocks.pop();
    }
    go(0, n, &mut blocks, &finite, &mut best);
    best
}
