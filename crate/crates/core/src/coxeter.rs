//! Weyl groups of generalized Cartan matrices, acting on the root lattice.
//!
//! Generators are 0-based in this API.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matgrp::Matrix;
use crate::ring::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gcm {
    n: usize,
    a: Vec<i64>,
}

impl Gcm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Gcm> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGcm("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGcm("matrix is not square".into()));
        }
        for i in 0..n {
            if rows[i][i] != 2 {
                return Err(Error::InvalidGcm(format!("a[{i}][{i}] = {} != 2", rows[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    return Err(Error::InvalidGcm(format!("a[{i}][{j}] = {} > 0", rows[i][j])));
                }
                if (rows[i][j] == 0) != (rows[j][i] == 0) {
                    return Err(Error::InvalidGcm(format!(
                        "a[{i}][{j}] and a[{j}][{i}] differ in vanishing"
                    )));
                }
            }
        }
        Ok(Gcm {
            n,
            a: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the GCM with `a_ij = a_ji = -1` on `edges` and 0 elsewhere,
    /// then overrides single entries from `extra` as `(i, j, a_ij)`.
    fn from_graph(n: usize, edges: &[(usize, usize)], extra: &[(usize, usize, i64)]) -> Gcm {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in edges {
            rows[i][j] = -1;
            rows[j][i] = -1;
        }
        for &(i, j, v) in extra {
            rows[i][j] = v;
        }
        Gcm::new(rows).expect("well-formed catalog matrix")
    }

    fn path(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    pub fn type_a(n: usize) -> Gcm {
        Gcm::from_graph(n, &Gcm::path(n), &[])
    }

    pub fn type_b(n: usize) -> Gcm {
        assert!(n >= 2);
        Gcm::from_graph(n, &Gcm::path(n), &[(n - 2, n - 1, -2)])
    }

    pub fn type_c(n: usize) -> Gcm {
        assert!(n >= 2);
        Gcm::from_graph(n, &Gcm::path(n), &[(n - 1, n - 2, -2)])
    }

    pub fn type_d(n: usize) -> Gcm {
        assert!(n >= 4);
        let mut edges = Gcm::path(n - 1);
        edges.push((n - 3, n - 1));
        Gcm::from_graph(n, &edges, &[])
    }

    /// `E_6`, `E_7`, `E_8` in Bourbaki numbering.
    pub fn type_e(n: usize) -> Gcm {
        assert!((6..=8).contains(&n));
        let mut edges = vec![(0, 2), (1, 3), (2, 3)];
        edges.extend((4..n).map(|i| (i - 1, i)));
        Gcm::from_graph(n, &edges, &[])
    }

    pub fn type_f4() -> Gcm {
        Gcm::from_graph(4, &Gcm::path(4), &[(1, 2, -2)])
    }

    pub fn type_g2() -> Gcm {
        Gcm::from_graph(2, &[(0, 1)], &[(1, 0, -3)])
    }

    /// Affine `Ã_n`, of rank `n + 1`. For `n = 1` the single bond is
    /// `a_01 = a_10 = -2`.
    pub fn affine_a(n: usize) -> Gcm {
        assert!(n >= 1);
        if n == 1 {
            return Gcm::new(vec![vec![2, -2], vec![-2, 2]]).expect("valid");
        }
        let mut edges = Gcm::path(n + 1);
        edges.push((n, 0));
        Gcm::from_graph(n + 1, &edges, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `a_ij a_ji`, the label of the edge `{i, j}` in the Dynkin diagram.
    pub fn bond(&self, i: usize, j: usize) -> i64 {
        self.get(i, j) * self.get(j, i)
    }

    /// Principal submatrix on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Gcm {
        Gcm {
            n: vertices.len(),
            a: vertices
                .iter()
                .flat_map(|&i| vertices.iter().map(move |&j| self.get(i, j)))
                .collect(),
        }
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| j != i && self.get(i, j) != 0)
    }

    /// Connected components of the Dynkin diagram, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in self.neighbours(i) {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Reads `{"n": .., "entries": [[..]], "index_base": 0|1}`; the index
    /// base (default 1) applies to generator words given alongside.
    pub fn from_json(v: &Value) -> Result<(Gcm, usize)> {
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("GCM JSON needs an \"entries\" array".into()))?;
        let rows = entries
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("GCM rows must be arrays".into()))?
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| Error::Parse(format!("non-integer GCM entry {x}")))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let gcm = Gcm::new(rows)?;
        if let Some(n) = v.get("n") {
            if n.as_u64() != Some(gcm.n as u64) {
                return Err(Error::InvalidGcm(format!(
                    "declared n = {n} but matrix has rank {}",
                    gcm.n
                )));
            }
        }
        let base = match v.get("index_base") {
            None => 1,
            Some(b) => match b.as_u64() {
                Some(0) => 0,
                Some(1) => 1,
                _ => return Err(Error::Parse(format!("index_base must be 0 or 1, got {b}"))),
            },
        };
        Ok((gcm, base))
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "entries": self.rows() })
    }
}

impl fmt::Debug for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gcm{:?}", self.rows())
    }
}

/// Square integer matrix, column-major: `cols[j]` is the image of `α_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    cols: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix {
            cols: (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.cols[j][i]
    }

    pub fn column(&self, j: usize) -> &[BigInt] {
        &self.cols[j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.n();
        IntMatrix {
            cols: rhs
                .cols
                .iter()
                .map(|c| {
                    (0..n)
                        .map(|i| (0..n).fold(BigInt::zero(), |acc, k| acc + &self.cols[k][i] * &c[k]))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n())
    }

    /// `M ← M s_i`: column `j` becomes `col_j - a_ij col_i`.
    fn right_reflect(&mut self, gcm: &Gcm, i: usize) {
        let ci = self.cols[i].clone();
        for j in 0..self.n() {
            let a = gcm.get(i, j);
            if a == 0 {
                continue;
            }
            for (x, y) in self.cols[j].iter_mut().zip(&ci) {
                *x -= y * a;
            }
        }
    }

    /// A column is a negative root: every coordinate `<= 0`, not all zero.
    fn column_is_negative(&self, j: usize) -> bool {
        let c = &self.cols[j];
        assert!(
            c.iter().any(|x| !x.is_zero()),
            "zero vector cannot be the image of a root"
        );
        c.iter().all(|x| !x.is_positive())
    }
}

/// Matrix of `s_i` on the root lattice: `α_j ↦ α_j - a_ij α_i`.
pub fn simple_reflection_matrix(gcm: &Gcm, i: usize) -> Result<IntMatrix> {
    if i >= gcm.n() {
        return Err(Error::BadIndex(i));
    }
    let mut m = IntMatrix::identity(gcm.n());
    m.right_reflect(gcm, i);
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    gcm: Gcm,
    word: Vec<usize>,
    matrix: IntMatrix,
}

impl PartialEq for WeylElement {
    /// Equality in `W`, ignoring the words.
    fn eq(&self, other: &Self) -> bool {
        self.gcm == other.gcm && self.matrix == other.matrix
    }
}

impl WeylElement {
    pub fn identity(gcm: &Gcm) -> WeylElement {
        WeylElement {
            gcm: gcm.clone(),
            word: Vec::new(),
            matrix: IntMatrix::identity(gcm.n()),
        }
    }

    /// Element with the given matrix and an empty word.
    pub fn from_matrix(gcm: &Gcm, matrix: IntMatrix) -> WeylElement {
        assert_eq!(matrix.n(), gcm.n());
        WeylElement {
            gcm: gcm.clone(),
            word: Vec::new(),
            matrix,
        }
    }

    pub fn from_word(gcm: &Gcm, word: &[usize]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(gcm);
        for &i in word {
            w = w.times_generator(i)?;
        }
        Ok(w)
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn times_generator(&self, i: usize) -> Result<WeylElement> {
        if i >= self.gcm.n() {
            return Err(Error::BadIndex(i));
        }
        let mut w = self.clone();
        w.matrix.right_reflect(&self.gcm, i);
        w.word.push(i);
        Ok(w)
    }

    pub fn mul(&self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.gcm, rhs.gcm, "elements of different Weyl groups");
        WeylElement {
            gcm: self.gcm.clone(),
            word: self.word.iter().chain(&rhs.word).copied().collect(),
            matrix: self.matrix.mul(&rhs.matrix),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let word: Vec<usize> = self.word.iter().rev().copied().collect();
        WeylElement::from_word(&self.gcm, &word).expect("indices already checked")
    }

    pub fn pow(&self, k: usize) -> WeylElement {
        let mut out = WeylElement::identity(&self.gcm);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn length(&self) -> usize {
        length(self)
    }

    /// Whether the stored word is a reduced expression.
    pub fn is_reduced(&self) -> bool {
        self.word.len() == self.length()
    }

    /// A reduced expression for this element, found by greedy descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut m = self.matrix.clone();
        let mut descents = Vec::new();
        while let Some(i) = (0..self.gcm.n()).find(|&i| m.column_is_negative(i)) {
            m.right_reflect(&self.gcm, i);
            descents.push(i);
        }
        debug_assert!(m.is_identity());
        descents.reverse();
        descents
    }
}

/// Coxeter length by greedy descent: while some `w(α_i)` is negative,
/// replace `w` by `w s_i`. Each step lowers the length by exactly one.
pub fn length(w: &WeylElement) -> usize {
    let mut m = w.matrix.clone();
    let mut steps = 0;
    while let Some(i) = (0..w.gcm.n()).find(|&i| m.column_is_negative(i)) {
        m.right_reflect(&w.gcm, i);
        steps += 1;
    }
    assert!(m.is_identity(), "no descent but not the identity");
    steps
}

/// Label of a connected finite-type diagram, e.g. `"A3"`, `"B2"`, `"E8"`.
/// `None` for infinite type. `vertices` must induce a connected subdiagram.
fn classify_connected(gcm: &Gcm, vertices: &[usize]) -> Option<String> {
    let k = vertices.len();
    if k == 1 {
        return Some("A1".into());
    }
    let mut edges = Vec::new();
    for (x, &i) in vertices.iter().enumerate() {
        for &j in &vertices[x + 1..] {
            let b = gcm.bond(i, j);
            if b >= 4 {
                return None;
            }
            if b > 0 {
                edges.push((i, j, b));
            }
        }
    }
    if edges.len() != k - 1 {
        // connected with a cycle
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let max_degree = vertices.iter().map(|&v| degree(v)).max().unwrap_or(0);
    let multiple: Vec<_> = edges.iter().filter(|e| e.2 > 1).collect();
    match multiple.as_slice() {
        [] => {}
        [e] if e.2 == 3 => return (k == 2).then(|| "G2".into()),
        [e] => {
            if max_degree > 2 {
                return None;
            }
            let at_end = degree(e.0) == 1 || degree(e.1) == 1;
            return if at_end {
                // direction decides B or C; both are finite
                let (inner, end) = if degree(e.1) == 1 { (e.0, e.1) } else { (e.1, e.0) };
                Some(if gcm.get(inner, end) == -2 {
                    format!("B{k}")
                } else {
                    format!("C{k}")
                })
            } else if k == 4 {
                Some("F4".into())
            } else {
                None
            };
        }
        _ => return None,
    }
    if max_degree <= 2 {
        return Some(format!("A{k}"));
    }
    let branch: Vec<usize> = vertices.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if branch.len() != 1 || degree(branch[0]) != 3 {
        return None;
    }
    let centre = branch[0];
    let mut arms: Vec<usize> = Vec::new();
    for &(i, j, _) in edges.iter().filter(|e| e.0 == centre || e.1 == centre) {
        let mut prev = centre;
        let mut cur = if i == centre { j } else { i };
        let mut len = 1;
        loop {
            let next = edges
                .iter()
                .filter_map(|&(a, b, _)| match (a == cur, b == cur) {
                    (true, _) if b != prev => Some(b),
                    (_, true) if a != prev => Some(a),
                    _ => None,
                })
                .next();
            match next {
                Some(nx) => {
                    prev = cur;
                    cur = nx;
                    len += 1;
                }
                None => break,
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => Some(format!("D{k}")),
        [1, 2, 2] => Some("E6".into()),
        [1, 2, 3] => Some("E7".into()),
        [1, 2, 4] => Some("E8".into()),
        _ => None,
    }
}

/// Catalog labels of the connected components, `None` for the infinite ones.
pub fn classify(gcm: &Gcm) -> Vec<(Vec<usize>, Option<String>)> {
    gcm.components()
        .into_iter()
        .map(|c| {
            let label = classify_connected(gcm, &c);
            (c, label)
        })
        .collect()
}

/// Finite Weyl group, decided by matching every component against the
/// finite-type catalog.
pub fn is_finite_type(gcm: &Gcm) -> bool {
    classify(gcm).iter().all(|(_, label)| label.is_some())
}

/// Positive `d` with `d_i a_ij = d_j a_ji`, or `NotSymmetrizable`.
pub fn symmetrizer(gcm: &Gcm) -> Result<Vec<BigRational>> {
    let n = gcm.n();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for comp in gcm.components() {
        d[comp[0]] = Some(BigRational::one());
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().expect("visited");
            for j in gcm.neighbours(i) {
                let dj = &di * BigRational::new(gcm.get(i, j).into(), gcm.get(j, i).into());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != dj => return Err(Error::NotSymmetrizable),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(d.into_iter()
        .map(|x| x.expect("every vertex lies in a component"))
        .collect())
}

/// Finite Weyl group, decided by positive definiteness of the symmetrized
/// matrix `(d_i a_ij)` through its exact leading principal minors.
pub fn is_finite_type_by_minors(gcm: &Gcm) -> Result<bool> {
    let d = symmetrizer(gcm)?;
    let b: Matrix<Scalar> = Matrix::from_fn(gcm.n(), |i, j| {
        Scalar::real(&d[i] * BigRational::from_integer(gcm.get(i, j).into()))
    });
    Ok((1..=gcm.n()).all(|k| b.leading_block(k).det_bareiss().is_positive_real()))
}

/// Every element of length at most `max_len`, keyed by matrix, with its
/// distance from the identity in the Cayley graph. Independent of
/// [`length`]; for finite groups pass a bound at least the group's longest
/// length to get all of `W`.
pub fn enumerate_by_bfs(gcm: &Gcm, max_len: usize) -> HashMap<IntMatrix, usize> {
    let gens: Vec<IntMatrix> = (0..gcm.n())
        .map(|i| simple_reflection_matrix(gcm, i).expect("index in range"))
        .collect();
    let id = IntMatrix::identity(gcm.n());
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        let d = dist[&m];
        if d == max_len {
            continue;
        }
        for s in &gens {
            let next = m.mul(s);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraightProfile {
    pub straight: bool,
    /// `ℓ(w) = 0`: straight only vacuously.
    pub degenerate: bool,
    /// `ℓ(w^j)` for `j = 1..=n_max`.
    pub lengths: Vec<usize>,
}

/// Checks `ℓ(w^j) = j ℓ(w)` for `j = 1..=n_max`, from the matrices of the
/// powers rather than from words.
pub fn is_straight(w: &WeylElement, n_max: usize) -> StraightProfile {
    let mut lengths = Vec::with_capacity(n_max);
    let mut power = IntMatrix::identity(w.gcm.n());
    for _ in 0..n_max {
        power = power.mul(&w.matrix);
        lengths.push(length(&WeylElement::from_matrix(&w.gcm, power.clone())));
    }
    let l1 = lengths.first().copied().unwrap_or(0);
    StraightProfile {
        straight: lengths.iter().enumerate().all(|(j, &l)| l == (j + 1) * l1),
        degenerate: l1 == 0,
        lengths,
    }
}

pub const STRAIGHT_N_MAX: usize = 20;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// First element passing [`is_straight`] with `n_max = 20`: Coxeter elements
/// in lexicographic order of the generator permutation, then all words
/// without immediate repeats up to length `search_depth`, shortest first.
/// `Ok(None)` means the search ran out, not that no straight element exists.
pub fn find_straight_candidate(gcm: &Gcm, search_depth: usize) -> Result<Option<WeylElement>> {
    if is_finite_type(gcm) {
        return Err(Error::PreconditionFailed(
            "finite Weyl groups have no nontrivial straight elements".into(),
        ));
    }
    let passes = |w: &WeylElement| {
        let p = is_straight(w, STRAIGHT_N_MAX);
        p.straight && !p.degenerate
    };
    if gcm.n() <= 8 {
        for perm in permutations(gcm.n()) {
            let w = WeylElement::from_word(gcm, &perm)?;
            if passes(&w) {
                return Ok(Some(w));
            }
        }
    }
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..search_depth {
        let mut next = Vec::new();
        for word in &layer {
            for i in 0..gcm.n() {
                if word.last() == Some(&i) {
                    continue;
                }
                let mut w = word.clone();
                w.push(i);
                let elem = WeylElement::from_word(gcm, &w)?;
                if passes(&elem) {
                    return Ok(Some(elem));
                }
                next.push(w);
            }
        }
        layer = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bfs_lengths(gcm: &Gcm) -> HashMap<IntMatrix, usize> {
        enumerate_by_bfs(gcm, usize::MAX)
    }

    #[test]
    fn reflection_examples() {
        let a1 = Gcm::new(vec![vec![2]]).unwrap();
        assert_eq!(
            simple_reflection_matrix(&a1, 0).unwrap().rows(),
            vec![vec![BigInt::from(-1)]]
        );
        let a2 = Gcm::type_a(2);
        let s = simple_reflection_matrix(&a2, 0).unwrap();
        let int = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(s.column(0), int(&[-1, 0]).as_slice());
        assert_eq!(s.column(1), int(&[1, 1]).as_slice());
        for gcm in [Gcm::type_g2(), Gcm::affine_a(2), Gcm::type_e(8)] {
            for i in 0..gcm.n() {
                let s = simple_reflection_matrix(&gcm, i).unwrap();
                assert!(s.mul(&s).is_identity());
            }
        }
        assert_eq!(simple_reflection_matrix(&a2, 2), Err(Error::BadIndex(2)));
    }

    #[test]
    fn greedy_length_matches_bfs() {
        for (gcm, order) in [
            (Gcm::type_a(2), 6),
            (Gcm::type_b(2), 8),
            (Gcm::type_g2(), 12),
            (Gcm::type_a(3), 24),
        ] {
            let dist = bfs_lengths(&gcm);
            assert_eq!(dist.len(), order);
            for (m, d) in dist {
                let w = WeylElement::from_matrix(&gcm, m);
                assert_eq!(length(&w), d);
                let r = WeylElement::from_word(&gcm, &w.reduced_word()).unwrap();
                assert_eq!(r, w);
            }
        }
    }

    #[test]
    fn length_examples() {
        let a2 = Gcm::type_a(2);
        assert_eq!(WeylElement::identity(&a2).length(), 0);
        let w0 = WeylElement::from_word(&a2, &[0, 1, 0]).unwrap();
        assert_eq!(w0.length(), 3);
        assert!(w0.is_reduced());
        assert!(!WeylElement::from_word(&a2, &[0, 0]).unwrap().is_reduced());
        let c = WeylElement::from_word(&Gcm::affine_a(1), &[0, 1]).unwrap();
        for k in 0..=20 {
            assert_eq!(c.pow(k).length(), 2 * k);
        }
    }

    #[test]
    fn length_identities() {
        let gcm = Gcm::affine_a(2);
        for word in [vec![0, 1, 2, 1], vec![2, 0, 1, 0, 2], vec![1, 2, 1, 0]] {
            let w = WeylElement::from_word(&gcm, &word).unwrap();
            assert_eq!(w.length(), w.inverse().length());
            for i in 0..3 {
                let d = w.times_generator(i).unwrap().length() as i64 - w.length() as i64;
                assert_eq!(d.abs(), 1);
            }
        }
    }

    #[test]
    fn catalog_labels() {
        let label = |g: &Gcm| classify(g).into_iter().map(|(_, l)| l).collect::<Vec<_>>();
        assert_eq!(label(&Gcm::type_a(3)), vec![Some("A3".to_string())]);
        assert_eq!(label(&Gcm::type_b(3)), vec![Some("B3".to_string())]);
        assert_eq!(label(&Gcm::type_c(3)), vec![Some("C3".to_string())]);
        assert_eq!(label(&Gcm::type_d(5)), vec![Some("D5".to_string())]);
        assert_eq!(label(&Gcm::type_e(7)), vec![Some("E7".to_string())]);
        assert_eq!(label(&Gcm::type_f4()), vec![Some("F4".to_string())]);
        assert_eq!(label(&Gcm::type_g2()), vec![Some("G2".to_string())]);
        assert!(!is_finite_type(&Gcm::affine_a(1)));
        assert!(!is_finite_type(&Gcm::affine_a(2)));
        assert_eq!(is_finite_type_by_minors(&Gcm::affine_a(2)), Ok(false));
        for n in 1..=8 {
            assert_eq!(is_finite_type_by_minors(&Gcm::type_a(n)), Ok(true));
        }
        for g in [
            Gcm::type_e(6),
            Gcm::type_e(7),
            Gcm::type_e(8),
            Gcm::type_f4(),
            Gcm::type_d(6),
        ] {
            assert_eq!(is_finite_type_by_minors(&g), Ok(true));
        }
        // E9 = affine E8 is not finite
        let mut rows = Gcm::type_e(8).rows();
        for r in rows.iter_mut() {
            r.push(0);
        }
        rows.push(vec![0; 9]);
        rows[8][8] = 2;
        rows[7][8] = -1;
        rows[8][7] = -1;
        let e9 = Gcm::new(rows).unwrap();
        assert!(!is_finite_type(&e9));
        assert_eq!(is_finite_type_by_minors(&e9), Ok(false));
    }

    /// `(a_ij, a_ji)` realizations of each bond product.
    fn bonds(p: i64) -> Vec<(i64, i64)> {
        match p {
            0 => vec![(0, 0)],
            1 => vec![(-1, -1)],
            4 => vec![(-1, -4), (-4, -1), (-2, -2)],
            p => vec![(-1, -p), (-p, -1)],
        }
    }

    #[test]
    fn finiteness_routes_agree() {
        let all: Vec<(i64, i64)> = (0..=5).flat_map(bonds).collect();
        for &(x, y) in &all {
            let g = Gcm::new(vec![vec![2, x], vec![y, 2]]).unwrap();
            assert_eq!(is_finite_type_by_minors(&g), Ok(is_finite_type(&g)), "{g:?}");
        }
        let mut checked = 0;
        for &(a, b) in &all {
            for &(c, d) in &all {
                for &(e, f) in &all {
                    let g = Gcm::new(vec![vec![2, a, c], vec![b, 2, e], vec![d, f, 2]]).unwrap();
                    match is_finite_type_by_minors(&g) {
                        Ok(v) => {
                            assert_eq!(v, is_finite_type(&g), "{g:?}");
                            checked += 1;
                        }
                        Err(e) => {
                            assert_eq!(e, Error::NotSymmetrizable);
                            assert!(!is_finite_type(&g));
                        }
                    }
                }
            }
        }
        // every diagram with a missing edge is a forest, hence symmetrizable:
        // 11^3 - 10^3 of them
        assert!(checked >= 331);
    }

    #[test]
    fn straightness() {
        let a1t = Gcm::affine_a(1);
        let p = is_straight(&WeylElement::from_word(&a1t, &[0, 1]).unwrap(), 20);
        assert!(p.straight && !p.degenerate);
        assert_eq!(p.lengths, (1..=20).map(|j| 2 * j).collect::<Vec<_>>());
        let p = is_straight(&WeylElement::identity(&a1t), 5);
        assert!(p.straight && p.degenerate);
        let p = is_straight(&WeylElement::from_word(&Gcm::type_a(2), &[0]).unwrap(), 2);
        assert_eq!((p.straight, p.lengths), (false, vec![1, 0]));
    }

    #[test]
    fn no_straight_elements_in_finite_groups() {
        for gcm in [Gcm::type_a(2), Gcm::type_b(2)] {
            for m in bfs_lengths(&gcm).into_keys() {
                let w = WeylElement::from_matrix(&gcm, m);
                if !w.is_identity() {
                    assert!(!is_straight(&w, 12).straight);
                }
            }
        }
    }

    #[test]
    fn straight_candidates() {
        let w = find_straight_candidate(&Gcm::affine_a(1), 4).unwrap().unwrap();
        assert_eq!(w.word(), &[0, 1]);
        let w = find_straight_candidate(&Gcm::affine_a(2), 4).unwrap().unwrap();
        assert_eq!(w.word(), &[0, 1, 2]);
        assert!(matches!(
            find_straight_candidate(&Gcm::type_a(2), 4),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn gcm_validation_and_json() {
        assert!(Gcm::new(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(Gcm::new(vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(Gcm::new(vec![vec![1]]).is_err());
        let (g, base) = Gcm::from_json(&json!({"n": 2, "entries": [[2, -2], [-2, 2]]})).unwrap();
        assert_eq!((g, base), (Gcm::affine_a(1), 1));
        let (_, base) = Gcm::from_json(&json!({"entries": [[2]], "index_base": 0})).unwrap();
        assert_eq!(base, 0);
        assert!(Gcm::from_json(&json!({"n": 3, "entries": [[2]]})).is_err());
    }
}
