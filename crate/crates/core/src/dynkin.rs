//! Minimal spherical coverings of Dynkin diagrams.

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Value};

use crate::coxeter::{is_finite_type, is_finite_type_by_minors, Gcm};

/// Vertex subsets as bitmasks; diagrams are small.
type Mask = u64;

fn members(mask: Mask) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The Dynkin diagram of a GCM, with a memo of which vertex subsets induce
/// finite-type subdiagrams.
pub struct Diagram {
    gcm: Gcm,
    spherical: RefCell<HashMap<Mask, bool>>,
}

impl Diagram {
    pub fn new(gcm: Gcm) -> Diagram {
        assert!(gcm.n() <= 64, "at most 64 vertices");
        Diagram {
            gcm,
            spherical: RefCell::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.gcm.n()
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    /// Edge label `a_ij a_ji`.
    pub fn label(&self, i: usize, j: usize) -> i64 {
        self.gcm.bond(i, j)
    }

    pub fn is_spherical(&self, vertices: &[usize]) -> bool {
        self.is_spherical_mask(vertices.iter().fold(0, |m, &v| m | 1 << v))
    }

    fn is_spherical_mask(&self, mask: Mask) -> bool {
        if mask.count_ones() <= 1 {
            return true;
        }
        if let Some(&b) = self.spherical.borrow().get(&mask) {
            return b;
        }
        let b = is_finite_type(&self.gcm.induced(&members(mask)));
        self.spherical.borrow_mut().insert(mask, b);
        b
    }

    /// Size of a largest set of vertices that pairwise cannot share a part.
    fn conflict_clique(&self) -> usize {
        let n = self.n();
        let adj: Vec<Mask> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && !self.is_spherical_mask(1 << i | 1 << j))
                    .fold(0, |m, j| m | 1 << j)
            })
            .collect();
        fn grow(adj: &[Mask], candidates: Mask, size: usize, best: &mut usize) {
            if candidates == 0 {
                *best = (*best).max(size);
                return;
            }
            if size + candidates.count_ones() as usize <= *best {
                return;
            }
            let v = candidates.trailing_zeros() as usize;
            grow(adj, candidates & adj[v], size + 1, best);
            grow(adj, candidates & !(1 << v), size, best);
        }
        let mut best = 0;
        let all = if n == 64 { Mask::MAX } else { (1 << n) - 1 };
        grow(&adj, all, 0, &mut best);
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalCovering {
    /// Parts in order of their smallest vertex, each sorted; 0-based.
    pub partition: Vec<Vec<usize>>,
}

impl SphericalCovering {
    pub fn r(&self) -> usize {
        self.partition.len()
    }

    /// Part label of each vertex, numbered by first appearance.
    pub fn growth_string(&self) -> Vec<usize> {
        let n = self.partition.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (b, part) in self.partition.iter().enumerate() {
            for &v in part {
                out[v] = b;
            }
        }
        out
    }

    pub fn from_growth_string(labels: &[usize]) -> SphericalCovering {
        let r = labels.iter().max().map_or(0, |m| m + 1);
        let mut partition = vec![Vec::new(); r];
        for (v, &b) in labels.iter().enumerate() {
            partition[b].push(v);
        }
        SphericalCovering { partition }
    }

    /// 1-based vertex sets.
    pub fn partition_json(&self) -> Value {
        json!(self
            .partition
            .iter()
            .map(|p| p.iter().map(|v| v + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// A spherical covering with the fewest parts.
///
/// Branch and bound over set partitions written as restricted growth
/// strings, explored in lexicographic order, so the first optimum found is
/// the lexicographically smallest one. A part may only grow while it stays
/// spherical; branches that cannot beat the incumbent, or the largest
/// clique of pairwise non-spherical vertices, are cut.
pub fn min_spherical_cover(gcm: &Gcm) -> SphericalCovering {
    let d = Diagram::new(gcm.clone());
    cover_diagram(&d)
}

pub fn cover_diagram(d: &Diagram) -> SphericalCovering {
    let n = d.n();
    let lower = d.conflict_clique().max(1);
    let mut search = Search {
        d,
        lower,
        best_r: n + 1,
        best: Vec::new(),
        labels: Vec::with_capacity(n),
        parts: Vec::new(),
    };
    search.run(0);
    SphericalCovering::from_growth_string(&search.best)
}

struct Search<'a> {
    d: &'a Diagram,
    lower: usize,
    best_r: usize,
    best: Vec<usize>,
    labels: Vec<usize>,
    parts: Vec<Mask>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.best_r == self.lower
    }

    fn run(&mut self, v: usize) {
        if self.parts.len().max(self.lower) >= self.best_r {
            return;
        }
        if v == self.d.n() {
            self.best_r = self.parts.len();
            self.best = self.labels.clone();
            return;
        }
        for b in 0..self.parts.len() {
            let grown = self.parts[b] | 1 << v;
            if !self.d.is_spherical_mask(grown) {
                continue;
            }
            let old = std::mem::replace(&mut self.parts[b], grown);
            self.labels.push(b);
            self.run(v + 1);
            self.labels.pop();
            self.parts[b] = old;
            if self.done() {
                return;
            }
        }
        if self.parts.len() + 1 < self.best_r {
            self.parts.push(1 << v);
            self.labels.push(self.parts.len() - 1);
            self.run(v + 1);
            self.labels.pop();
            self.parts.pop();
        }
    }
}

/// Reference implementation: every set partition, smallest part count,
/// ties broken by growth string. Finiteness of parts goes through the
/// symmetrized-minor test where it applies. Exponential; for small `n`.
pub fn exhaustive_cover(gcm: &Gcm) -> SphericalCovering {
    let n = gcm.n();
    let finite = |part: &[usize]| {
        let g = gcm.induced(part);
        is_finite_type_by_minors(&g).unwrap_or_else(|_| is_finite_type(&g))
    };
    let mut best: Option<SphericalCovering> = None;
    let mut labels = vec![0usize; n];
    loop {
        let c = SphericalCovering::from_growth_string(&labels);
        if best.as_ref().is_none_or(|b| c.r() < b.r()) && c.partition.iter().all(|p| finite(p)) {
            best = Some(c);
        }
        if !next_growth_string(&mut labels) {
            break;
        }
    }
    best.expect("the singleton partition is always spherical")
}

/// Advances to the next restricted growth string in lexicographic order.
fn next_growth_string(labels: &mut [usize]) -> bool {
    for i in (1..labels.len()).rev() {
        let cap = labels[..i].iter().max().map_or(0, |m| m + 1);
        if labels[i] < cap {
            labels[i] += 1;
            labels[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

/// Edge labels of a diagram on `k` vertices, listed for the pairs
/// `(0,1), (0,2), (1,2), (0,3), ...`, so adding a vertex appends labels.
type LabelVector = Vec<i64>;

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

/// Smallest relabelling of `labels` over all vertex orders compatible with
/// sorting vertices by their multiset of incident labels.
fn canonical(k: usize, labels: &[i64]) -> LabelVector {
    let invariant = |v: usize| {
        let mut inc: Vec<i64> = (0..k).filter(|&u| u != v).map(|u| labels[pair_index(u, v)]).collect();
        inc.sort_unstable();
        inc
    };
    let mut order: Vec<usize> = (0..k).collect();
    let inv: Vec<Vec<i64>> = (0..k).map(invariant).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // blocks of vertices with equal invariant, permuted independently
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut best: Option<LabelVector> = None;
    let mut perm = Vec::with_capacity(k);
    fn rec(
        blocks: &[Vec<usize>],
        bi: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        labels: &[i64],
        best: &mut Option<LabelVector>,
    ) {
        if bi == blocks.len() {
            let k = perm.len();
            let mut out = vec![0; labels.len()];
            for j in 1..k {
                for i in 0..j {
                    out[pair_index(i, j)] = labels[pair_index(perm[i], perm[j])];
                }
            }
            if best.as_ref().is_none_or(|b| out < *b) {
                *best = Some(out);
            }
            return;
        }
        let block = &blocks[bi];
        let placed = block.iter().filter(|&&v| used[v]).count();
        if placed == block.len() {
            rec(blocks, bi + 1, used, perm, labels, best);
            return;
        }
        for &v in block {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(blocks, bi, used, perm, labels, best);
                perm.pop();
                used[v] = false;
            }
        }
    }
    rec(&blocks, 0, &mut vec![false; k], &mut perm, labels, &mut best);
    best.expect("at least one ordering")
}

fn gcm_from_labels(k: usize, labels: &[i64]) -> Gcm {
    let mut rows = vec![vec![0i64; k]; k];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for j in 1..k {
        for i in 0..j {
            let p = labels[pair_index(i, j)];
            if p != 0 {
                rows[i][j] = -1;
                rows[j][i] = -p;
            }
        }
    }
    Gcm::new(rows).expect("labels realize a GCM")
}

/// One GCM for every connected Dynkin diagram on `n` vertices whose edge
/// labels `a_ij a_ji` come from `labels` (0 means no edge), up to
/// isomorphism. The label `p` is realized as `a_ij = -1`, `a_ji = -p`.
pub fn connected_diagrams(n: usize, labels: &[i64]) -> Vec<Gcm> {
    assert!(labels.iter().all(|&p| p > 0), "nonzero labels only; 0 is implicit");
    let mut choices = vec![0];
    choices.extend_from_slice(labels);
    let mut level: Vec<LabelVector> = vec![Vec::new()];
    for k in 1..n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for base in &level {
            let mut ext = vec![0usize; k];
            loop {
                let mut v = base.clone();
                v.extend(ext.iter().map(|&c| choices[c]));
                let c = canonical(k + 1, &v);
                if seen.insert(c.clone()) {
                    next.push(c);
                }
                // odometer over the labels of the new vertex
                let mut pos = 0;
                while pos < k && ext[pos] + 1 == choices.len() {
                    ext[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
                ext[pos] += 1;
            }
        }
        next.sort();
        level = next;
    }
    level
        .iter()
        .map(|v| gcm_from_labels(n, v))
        .filter(Gcm::is_connected)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KukBound {
    pub covering: SphericalCovering,
    /// `r + 1`
    pub bound: usize,
    /// `n + 1`, from the singleton covering.
    pub naive: usize,
}

impl KukBound {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.covering.r(),
            "partition": self.covering.partition_json(),
            "kuk_bound": self.bound,
            "naive_bound": self.naive,
        })
    }
}

pub fn kuk_bound(gcm: &Gcm) -> KukBound {
    let covering = min_spherical_cover(gcm);
    KukBound {
        bound: covering.r() + 1,
        naive: gcm.n() + 1,
        covering,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::is_finite_type_by_minors;

    fn finite(g: &Gcm) -> bool {
        is_finite_type_by_minors(g).unwrap_or_else(|_| is_finite_type(g))
    }

    /// Every restricted growth string of length `n`, lexicographic.
    fn growth_strings(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s: Vec<usize>| {
                    let next = s.iter().max().map_or(0, |m| m + 1);
                    (0..=next).map(move |b| {
                        let mut t = s.clone();
                        t.push(b);
                        t
                    })
                })
                .collect();
        }
        out
    }

    fn exhaustive(gcm: &Gcm) -> SphericalCovering {
        growth_strings(gcm.n())
            .into_iter()
            .map(|s| SphericalCovering::from_growth_string(&s))
            .filter(|c| c.partition.iter().all(|p| finite(&gcm.induced(p))))
            .min_by_key(|c| c.r())
            .expect("singletons always work")
    }

    fn random_gcm(n: usize, seed: u64) -> Gcm {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
            for j in i + 1..n {
                let p: i64 = [0, 0, 1, 1, 1, 2, 3, 4][rng.gen_range(0..8)];
                if p > 0 {
                    rows[i][j] = -1;
                    rows[j][i] = -p;
                }
            }
        }
        Gcm::new(rows).unwrap()
    }

    #[test]
    fn growth_string_count_is_bell_number() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, b) in bell.iter().enumerate() {
            assert_eq!(growth_strings(n).len(), *b);
        }
    }

    #[test]
    fn examples() {
        for n in 1..=7 {
            let k = kuk_bound(&Gcm::type_a(n));
            assert_eq!((k.covering.r(), k.bound, k.naive), (1, 2, n + 1));
        }
        let k = kuk_bound(&Gcm::affine_a(1));
        assert_eq!(k.covering.partition, vec![vec![0], vec![1]]);
        assert_eq!((k.bound, k.naive), (3, 3));
        let k = kuk_bound(&Gcm::affine_a(2));
        assert_eq!(k.covering.partition, vec![vec![0, 1], vec![2]]);
        assert_eq!(
            k.to_json(),
            json!({"r": 2, "partition": [[1, 2], [3]], "kuk_bound": 3, "naive_bound": 4})
        );
    }

    #[test]
    fn matches_exhaustive_oracle() {
        for n in 1..=7 {
            for seed in 0..12 {
                let g = random_gcm(n, seed * 31 + n as u64);
                let c = min_spherical_cover(&g);
                assert_eq!(c, exhaustive(&g), "{g:?}");
                assert!(c.partition.iter().all(|p| is_finite_type(&g.induced(p))));
                assert!(c.r() <= n);
            }
        }
    }

    #[test]
    fn library_oracle_agrees_with_test_oracle() {
        for seed in 0..30 {
            let g = random_gcm(5, seed);
            assert_eq!(exhaustive_cover(&g), exhaustive(&g));
        }
    }

    #[test]
    fn diagram_counts() {
        // connected simple graphs on 1..=5 vertices
        let counts: Vec<usize> = (1..=5).map(|n| connected_diagrams(n, &[1]).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
        // two edge colours, 4 vertices: brute force over all labellings
        let mut classes = std::collections::HashSet::new();
        for code in 0..3usize.pow(6) {
            let labels: Vec<i64> = (0..6).map(|p| (code / 3usize.pow(p) % 3) as i64).collect();
            let g = gcm_from_labels(4, &labels);
            if g.is_connected() {
                classes.insert(brute_canonical(4, &labels));
            }
        }
        assert_eq!(connected_diagrams(4, &[1, 2]).len(), classes.len());
    }

    /// Minimum relabelling over all `k!` vertex orders.
    fn brute_canonical(k: usize, labels: &[i64]) -> Vec<i64> {
        let mut perms = vec![vec![]];
        for _ in 0..k {
            perms = perms
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..k)
                        .filter(|v| !p.contains(v))
                        .map(|v| {
                            let mut q = p.clone();
                            q.push(v);
                            q
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        perms
            .iter()
            .map(|perm| {
                let mut out = vec![0; labels.len()];
                for j in 1..k {
                    for i in 0..j {
                        out[pair_index(i, j)] = labels[pair_index(perm[i], perm[j])];
                    }
                }
                out
            })
            .min()
            .unwrap()
    }

    #[test]
    fn deleting_a_vertex_never_increases_r() {
        for seed in 0..20 {
            let g = random_gcm(6, seed);
            let r = min_spherical_cover(&g).r();
            for v in 0..6 {
                let rest: Vec<usize> = (0..6).filter(|&x| x != v).collect();
                assert!(min_spherical_cover(&g.induced(&rest)).r() <= r);
            }
        }
    }
}
