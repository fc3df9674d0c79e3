//! r-uniform hypergraphs and multi-hypergraphs on dense integer vertices,
//! together with the divisibility and regularity computations built on them.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::combinat::{binomial, combinations, gcd, subsets_of};
use crate::error::{invalid, Error, Result};

pub type Vertex = u32;

/// A simple r-uniform hypergraph on vertices 0..n-1. Edges are kept as sorted
/// vertex lists in a BTreeSet, so iteration order is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RGraph {
    r: usize,
    n: usize,
    edges: BTreeSet<Vec<Vertex>>,
}

/// An r-uniform multi-hypergraph: sorted r-sets with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiRGraph {
    r: usize,
    n: usize,
    edges: BTreeMap<Vec<Vertex>, u64>,
}

/// The divisibility vector (d_0, ..., d_{r-1}): d_i is the gcd of all i-set
/// link sizes. d_0 is the edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivVector(pub Vec<u64>);

/// Outcome of the weak-regularity test. When regular, `s` holds the unique
/// vector with every nonzero i-set link of size s_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakRegularity {
    pub regular: bool,
    pub s: Option<Vec<u64>>,
    /// On failure: (i, witness set, two distinct nonzero link sizes).
    pub witness: Option<(usize, Vec<Vertex>, u64, u64)>,
}

fn check_edge(r: usize, n: usize, e: &[Vertex]) -> Result<()> {
    if e.len() != r {
        return invalid(format!("edge {:?} does not have {} vertices", e, r));
    }
    for w in e.windows(2) {
        if w[0] >= w[1] {
            return invalid(format!("edge {:?} is not sorted strictly ascending", e));
        }
    }
    if let Some(&v) = e.last() {
        if v as usize >= n {
            return invalid(format!("edge {:?} has a vertex >= n = {}", e, n));
        }
    }
    Ok(())
}

impl RGraph {
    pub fn new(r: usize, n: usize) -> Self {
        RGraph {
            r,
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(r: usize, n: usize, edges: impl IntoIterator<Item = Vec<Vertex>>) -> Result<Self> {
        let mut g = RGraph::new(r, n);
        for e in edges {
            g.insert(e)?;
        }
        Ok(g)
    }

    /// The complete r-graph on n vertices.
    pub fn complete(r: usize, n: usize) -> Self {
        let mut g = RGraph::new(r, n);
        for c in combinations(n, r) {
            g.edges.insert(c.into_iter().map(|v| v as Vertex).collect());
        }
        g
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Insert a sorted edge; duplicate insertion is an error.
    pub fn insert(&mut self, e: Vec<Vertex>) -> Result<()> {
        check_edge(self.r, self.n, &e)?;
        if !self.edges.insert(e.clone()) {
            return invalid(format!("duplicate edge {:?}", e));
        }
        Ok(())
    }

    /// Insert an edge given in any vertex order.
    pub fn insert_unsorted(&mut self, mut e: Vec<Vertex>) -> Result<()> {
        e.sort_unstable();
        self.insert(e)
    }

    pub fn contains(&self, e: &[Vertex]) -> bool {
        self.edges.contains(e)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.edges.iter()
    }

    pub fn remove(&mut self, e: &[Vertex]) -> bool {
        self.edges.remove(e)
    }

    /// G - H: delete all edges of `other` that are present.
    pub fn minus(&self, other: &RGraph) -> RGraph {
        let mut g = self.clone();
        for e in other.edges() {
            g.edges.remove(e);
        }
        g
    }

    /// Number of edges containing the set S (|S| <= r). For |S| = r this is
    /// the 0/1 multiplicity.
    pub fn degree_of(&self, s: &[Vertex]) -> u64 {
        self.edges.iter().filter(|e| is_subset(s, e)).count() as u64
    }

    /// The link graph G(S): edges containing S, with S removed. The vertex
    /// numbering is preserved; vertices of S become isolated.
    pub fn link(&self, s: &[Vertex]) -> Result<RGraph> {
        if s.len() > self.r {
            return invalid(format!("link set has {} > r = {} vertices", s.len(), self.r));
        }
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != s.len() {
            return invalid("link set has repeated vertices".to_string());
        }
        if sorted.iter().any(|&v| (v as usize) >= self.n) {
            return invalid("link set has a vertex outside the graph".to_string());
        }
        let mut out = RGraph::new(self.r - sorted.len(), self.n);
        for e in &self.edges {
            if is_subset(&sorted, e) {
                let rest: Vec<Vertex> = e.iter().copied().filter(|v| !sorted.contains(v)).collect();
                out.edges.insert(rest);
            }
        }
        Ok(out)
    }

    /// Map over sorted i-sets with nonzero link, for a fixed i.
    /// Sets that contain no edge are absent (their link size is 0).
    pub fn level_counts(&self, i: usize) -> BTreeMap<Vec<Vertex>, u64> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            for s in subsets_of(e, i) {
                *m.entry(s).or_insert(0) += 1;
            }
        }
        m
    }

    /// Maximum (r-1)-degree.
    pub fn max_degree(&self) -> u64 {
        if self.r == 0 {
            return 0;
        }
        self.level_counts(self.r - 1)
            .values()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Minimum (r-1)-degree over all (r-1)-subsets of the vertex set.
    pub fn min_degree(&self) -> u64 {
        if self.r == 0 || self.edges.is_empty() {
            return 0;
        }
        let m = self.level_counts(self.r - 1);
        let total = binomial(self.n as u64, (self.r - 1) as u64);
        if (m.len() as u64) < total {
            return 0;
        }
        m.values().copied().min().unwrap_or(0)
    }

    pub fn to_multi(&self) -> MultiRGraph {
        MultiRGraph {
            r: self.r,
            n: self.n,
            edges: self.edges.iter().map(|e| (e.clone(), 1)).collect(),
        }
    }

    /// Vertices that lie in at least one edge.
    pub fn support(&self) -> Vec<Vertex> {
        let mut s = BTreeSet::new();
        for e in &self.edges {
            s.extend(e.iter().copied());
        }
        s.into_iter().collect()
    }
}

impl MultiRGraph {
    pub fn new(r: usize, n: usize) -> Self {
        MultiRGraph {
            r,
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of edges counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn add(&mut self, e: Vec<Vertex>, mult: u64) -> Result<()> {
        check_edge(self.r, self.n, &e)?;
        if mult == 0 {
            return invalid("zero multiplicity".to_string());
        }
        *self.edges.entry(e).or_insert(0) += mult;
        Ok(())
    }

    pub fn add_unsorted(&mut self, mut e: Vec<Vertex>, mult: u64) -> Result<()> {
        e.sort_unstable();
        self.add(e, mult)
    }

    pub fn multiplicity(&self, e: &[Vertex]) -> u64 {
        self.edges.get(e).copied().unwrap_or(0)
    }

    pub fn edge_multiplicities(&self) -> impl Iterator<Item = (&Vec<Vertex>, u64)> {
        self.edges.iter().map(|(e, &m)| (e, m))
    }

    pub fn grow_n(&mut self, n: usize) {
        self.n = self.n.max(n);
    }

    pub fn degree_of(&self, s: &[Vertex]) -> u64 {
        self.edges
            .iter()
            .filter(|(e, _)| is_subset(s, e))
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn link(&self, s: &[Vertex]) -> Result<MultiRGraph> {
        if s.len() > self.r {
            return invalid(format!("link set has {} > r = {} vertices", s.len(), self.r));
        }
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        let mut out = MultiRGraph::new(self.r - sorted.len(), self.n);
        for (e, &m) in &self.edges {
            if is_subset(&sorted, e) {
                let rest: Vec<Vertex> = e.iter().copied().filter(|v| !sorted.contains(v)).collect();
                *out.edges.entry(rest).or_insert(0) += m;
            }
        }
        Ok(out)
    }

    pub fn level_counts(&self, i: usize) -> BTreeMap<Vec<Vertex>, u64> {
        let mut out = BTreeMap::new();
        for (e, &m) in &self.edges {
            for s in subsets_of(e, i) {
                *out.entry(s).or_insert(0) += m;
            }
        }
        out
    }

    pub fn max_degree(&self) -> u64 {
        if self.r == 0 {
            return 0;
        }
        self.level_counts(self.r - 1)
            .values()
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn min_degree(&self) -> u64 {
        if self.r == 0 || self.edges.is_empty() {
            return 0;
        }
        let m = self.level_counts(self.r - 1);
        let total = binomial(self.n as u64, (self.r - 1) as u64);
        if (m.len() as u64) < total {
            return 0;
        }
        m.values().copied().min().unwrap_or(0)
    }
}

pub(crate) fn is_subset(s: &[Vertex], e: &[Vertex]) -> bool {
    // both sorted
    let mut it = e.iter();
    'outer: for &v in s {
        for &w in it.by_ref() {
            if w == v {
                continue 'outer;
            }
            if w > v {
                return false;
            }
        }
        return false;
    }
    true
}

/// Deg(F): d_i = gcd over all i-sets S of |F(S)|, for i in 0..r.
pub fn div_vector(f: &RGraph) -> Result<DivVector> {
    if f.is_empty() {
        return invalid("divisibility vector of an empty graph is undefined".to_string());
    }
    let mut d = Vec::with_capacity(f.r());
    for i in 0..f.r() {
        let mut g = 0u64;
        for (_, c) in f.level_counts(i) {
            g = gcd(g, c);
        }
        debug_assert!(g > 0);
        d.push(g);
    }
    Ok(DivVector(d))
}

/// Outcome of an (F, lambda)-divisibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    Divisible,
    /// Lexicographically smallest violating set together with its link size.
    Violation { set: Vec<Vertex>, count: u64 },
}

impl Divisibility {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Divisibility::Divisible)
    }
}

/// Is Deg(F)_i a divisor of lambda * |G(S)| for every S with |S| <= r-1?
pub fn is_divisible(g: &MultiRGraph, f: &RGraph, lambda: u64) -> Result<Divisibility> {
    if g.r() != f.r() {
        return invalid(format!(
            "uniformity mismatch: host r = {}, pattern r = {}",
            g.r(),
            f.r()
        ));
    }
    let deg = div_vector(f)?;
    let mut best: Option<(Vec<Vertex>, u64)> = None;
    for i in 0..f.r() {
        let di = deg.0[i];
        if di == 1 {
            continue;
        }
        for (s, c) in g.level_counts(i) {
            if !(lambda * c).is_multiple_of(di) {
                let better = match &best {
                    None => true,
                    Some((bs, _)) => s < *bs,
                };
                if better {
                    best = Some((s, c));
                }
                break; // level map iterates in sorted order: first violator is lex-smallest at this level
            }
        }
    }
    Ok(match best {
        None => Divisibility::Divisible,
        Some((set, count)) => Divisibility::Violation { set, count },
    })
}

/// Convenience wrapper for simple host graphs.
pub fn is_divisible_simple(g: &RGraph, f: &RGraph, lambda: u64) -> Result<Divisibility> {
    is_divisible(&g.to_multi(), f, lambda)
}

/// Weak regularity test: every nonzero i-set link size takes one common value.
pub fn is_weakly_regular(f: &RGraph) -> Result<WeakRegularity> {
    if f.is_empty() {
        return invalid("weak regularity of an empty graph is undefined".to_string());
    }
    let mut s = Vec::with_capacity(f.r());
    for i in 0..f.r() {
        let counts = f.level_counts(i);
        let mut si = None;
        for (set, c) in counts {
            match si {
                None => si = Some(c),
                Some(prev) if prev != c => {
                    return Ok(WeakRegularity {
                        regular: false,
                        s: None,
                        witness: Some((i, set, prev, c)),
                    });
                }
                _ => {}
            }
        }
        s.push(si.expect("non-empty graph has nonzero links at every level"));
    }
    Ok(WeakRegularity {
        regular: true,
        s: Some(s),
        witness: None,
    })
}

/// The shadow: (r-1)-sets with positive link. When F is weakly regular the
/// shadow is too, with s'_i = (r-i) s_i / s_{r-1}; the vector is returned.
pub fn shadow(f: &RGraph) -> Result<(RGraph, Option<Vec<u64>>)> {
    if f.r() < 2 {
        return invalid("shadow requires uniformity at least 2".to_string());
    }
    let mut sh = RGraph::new(f.r() - 1, f.n());
    for (s, _) in f.level_counts(f.r() - 1) {
        sh.edges.insert(s);
    }
    let sprime = match is_weakly_regular(f) {
        Ok(w) if w.regular => {
            let s = w.s.unwrap();
            let top = s[f.r() - 1];
            let v: Vec<u64> = (0..f.r() - 1)
                .map(|i| {
                    let num = (f.r() - i) as u64 * s[i];
                    debug_assert_eq!(num % top, 0);
                    num / top
                })
                .collect();
            Some(v)
        }
        _ => None,
    };
    Ok((sh, sprime))
}

/// How the typicality certificate was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypicalityMode {
    /// All families A of (r-1)-sets with 1 <= |A| <= h.
    Exhaustive,
    /// `samples` random families drawn with the given seed.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct TypicalityReport {
    /// Maximal relative deviation over the checked families.
    pub c: f64,
    /// False when c >= 1, i.e. the two-sided typicality window is vacuous.
    pub typical: bool,
    pub mode: TypicalityMode,
    pub families_checked: u64,
    /// A family attaining the reported deviation, with its intersection size.
    pub worst_family: Option<(Vec<Vec<Vertex>>, u64)>,
}

/// Minimal c such that G is (c, h, p)-typical over the checked families:
/// |intersection of links over A| must be (1 +- c) p^{|A|} n for every
/// family A of up to h distinct (r-1)-subsets.
pub fn typicality(g: &RGraph, h: u64, p: f64, mode: TypicalityMode) -> Result<TypicalityReport> {
    if h < 1 {
        return invalid("typicality needs h >= 1".to_string());
    }
    if !(p > 0.0 && p <= 1.0) {
        return invalid("typicality needs 0 < p <= 1".to_string());
    }
    let n = g.n();
    let i = g.r() - 1;
    // neighbourhood bitsets per (r-1)-set, indexed into `sets`
    let sets: Vec<Vec<Vertex>> = combinations(n, i)
        .map(|c| c.into_iter().map(|v| v as Vertex).collect())
        .collect();
    let words = n.div_ceil(64);
    let mut masks: Vec<Vec<u64>> = vec![vec![0u64; words]; sets.len()];
    let index_of: BTreeMap<Vec<Vertex>, usize> =
        sets.iter().enumerate().map(|(j, s)| (s.clone(), j)).collect();
    for e in g.edges() {
        for s in subsets_of(e, i) {
            let j = index_of[&s];
            for &v in e.iter().filter(|v| !s.contains(v)) {
                masks[j][v as usize / 64] |= 1 << (v % 64);
            }
        }
    }
    let mut worst: Option<(f64, Vec<usize>, u64)> = None;
    let mut families = 0u64;
    let consider = |idxs: &[usize], worst: &mut Option<(f64, Vec<usize>, u64)>| {
        let mut acc = vec![u64::MAX; words];
        // trim the final word so stray bits above n never count
        for (j, a) in acc.iter_mut().enumerate() {
            let hi = ((j + 1) * 64).min(n);
            let lo = j * 64;
            let bits = hi - lo;
            *a = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        for &idx in idxs {
            for (a, m) in acc.iter_mut().zip(&masks[idx]) {
                *a &= m;
            }
        }
        let size: u64 = acc.iter().map(|w| w.count_ones() as u64).sum();
        let expect = p.powi(idxs.len() as i32) * n as f64;
        let dev = (size as f64 - expect).abs() / expect;
        if worst.as_ref().map(|(d, _, _)| dev > *d).unwrap_or(true) {
            *worst = Some((dev, idxs.to_vec(), size));
        }
    };
    match mode {
        TypicalityMode::Exhaustive => {
            for a in 1..=h as usize {
                for fam in combinations(sets.len(), a) {
                    families += 1;
                    consider(&fam, &mut worst);
                }
            }
        }
        TypicalityMode::Sampled { samples, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let a = rng.gen_range(1..=h.min(sets.len() as u64)) as usize;
                let mut fam = Vec::with_capacity(a);
                while fam.len() < a {
                    let j = rng.gen_range(0..sets.len());
                    if !fam.contains(&j) {
                        fam.push(j);
                    }
                }
                fam.sort_unstable();
                families += 1;
                consider(&fam, &mut worst);
            }
        }
    }
    let (c, fam, size) = worst.ok_or_else(|| Error::Internal("no family checked".to_string()))?;
    Ok(TypicalityReport {
        c,
        typical: c < 1.0,
        mode,
        families_checked: families,
        worst_family: Some((fam.into_iter().map(|j| sets[j].clone()).collect(), size)),
    })
}

/// Smallest order of the form r! * a * prod(Deg(F)) + r - 1: the complete
/// r-graph on that many vertices is F-divisible (checked before returning).
pub fn find_divisible_order(f: &RGraph, a: u64) -> Result<u64> {
    if a == 0 {
        return invalid("a must be positive".to_string());
    }
    let deg = div_vector(f)?;
    let r = f.r() as u64;
    let p: u64 = deg.0.iter().product();
    let rfact: u64 = (1..=r).product();
    let n = rfact * a * p + r - 1;
    // complete-graph divisibility: d_i | binom(n - i, r - i)
    for (i, &di) in deg.0.iter().enumerate() {
        let b = binomial(n - i as u64, r - i as u64);
        if !b.is_multiple_of(di) {
            return Err(Error::Internal(format!(
                "constructed order {} fails divisibility at level {}",
                n, i
            )));
        }
    }
    Ok(n)
}

/// Small named graphs used across tests, examples, and the acceptance
/// suite.
pub mod fixtures {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    /// The Fano plane with its usual difference-set labelling.
    pub fn fano() -> RGraph {
        let lines = [
            [0, 1, 3],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 6],
            [0, 4, 5],
            [1, 5, 6],
            [0, 2, 6],
        ];
        RGraph::from_edges(3, 7, lines.iter().map(|l| l.to_vec())).unwrap()
    }

    /// The octahedron as a 3-graph: 8 faces on 6 vertices, antipodal pairs
    /// (0,3), (1,4), (2,5).
    pub fn octahedron() -> RGraph {
        let mut g = RGraph::new(3, 6);
        for a in [0u32, 3] {
            for b in [1u32, 4] {
                for c in [2u32, 5] {
                    g.insert_unsorted(vec![a, b, c]).unwrap();
                }
            }
        }
        g
    }

    pub fn triangle() -> RGraph {
        RGraph::from_edges(2, 3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    /// Path with two edges on three vertices.
    pub fn path3() -> RGraph {
        RGraph::from_edges(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    pub fn cycle4() -> RGraph {
        RGraph::from_edges(2, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    /// 3-uniform tight cycle on 5 vertices: edges {i, i+1, i+2} mod 5.
    pub fn tight_cycle5() -> RGraph {
        let mut g = RGraph::new(3, 5);
        for i in 0u32..5 {
            g.insert_unsorted(vec![i, (i + 1) % 5, (i + 2) % 5]).unwrap();
        }
        g
    }

    pub fn random_rgraph(r: usize, n: usize, p: f64, seed: u64) -> RGraph {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut g = RGraph::new(r, n);
        for c in combinations(n, r) {
            if rng.gen_bool(p) {
                g.insert(c.into_iter().map(|v| v as Vertex).collect()).unwrap();
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fano_divisibility_vector() {
        assert_eq!(div_vector(&fano()).unwrap().0, vec![7, 3, 1]);
    }

    #[test]
    fn triangle_divisibility_vector() {
        assert_eq!(div_vector(&triangle()).unwrap().0, vec![3, 2]);
    }

    #[test]
    fn octahedron_divisibility_vector() {
        // oracle: enumerate all faces and pair degrees directly
        let g = octahedron();
        assert_eq!(g.len(), 8);
        for v in 0..6u32 {
            assert_eq!(g.degree_of(&[v]), 4);
        }
        assert_eq!(div_vector(&g).unwrap().0, vec![8, 4, 2]);
    }

    #[test]
    fn fano_link_is_perfect_matching() {
        let g = fano();
        for v in 0..7u32 {
            let l = g.link(&[v]).unwrap();
            assert_eq!(l.r(), 2);
            assert_eq!(l.len(), 3);
            // the three pairs partition the remaining six points
            let mut seen = BTreeSet::new();
            for e in l.edges() {
                assert!(!e.contains(&v));
                for &x in e {
                    assert!(seen.insert(x));
                }
            }
            assert_eq!(seen.len(), 6);
        }
    }

    #[test]
    fn link_of_empty_set_is_identity() {
        let g = fano();
        assert_eq!(g.link(&[]).unwrap(), g);
    }

    #[test]
    fn complete_graph_link() {
        let g = RGraph::complete(2, 4);
        let l = g.link(&[1]).unwrap();
        assert_eq!(l.r(), 1);
        assert_eq!(l.len(), 3);
    }

    #[test]
    fn link_rejects_oversized_set() {
        let g = triangle();
        assert!(g.link(&[0, 1, 2]).is_err());
    }

    #[test]
    fn divisible_k13_triangle() {
        let g = RGraph::complete(2, 13).to_multi();
        assert!(is_divisible(&g, &triangle(), 1).unwrap().is_divisible());
    }

    #[test]
    fn not_divisible_k4_triangle_vertex_witness() {
        let g = RGraph::complete(2, 4).to_multi();
        match is_divisible(&g, &triangle(), 1).unwrap() {
            Divisibility::Violation { set, count } => {
                assert_eq!(set, vec![0]);
                assert_eq!(count, 3);
            }
            _ => panic!("K_4 is not triangle-divisible"),
        }
    }

    #[test]
    fn violation_witness_is_lexicographically_smallest() {
        // a single edge violates triangle divisibility at level 0 (count 1)
        // and at both vertices; the empty set is the lex-smallest witness
        let g = RGraph::from_edges(2, 2, vec![vec![0, 1]]).unwrap().to_multi();
        match is_divisible(&g, &triangle(), 1).unwrap() {
            Divisibility::Violation { set, .. } => assert!(set.is_empty()),
            _ => panic!("a single edge is not triangle-divisible"),
        }
        // six edges: level 0 passes, smallest odd vertex is reported
        let g = RGraph::from_edges(
            2,
            7,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![3, 4], vec![4, 5], vec![5, 6]],
        )
        .unwrap()
        .to_multi();
        match is_divisible(&g, &triangle(), 1).unwrap() {
            Divisibility::Violation { set, .. } => assert_eq!(set, vec![3]),
            _ => panic!("odd degrees at 3 and 6"),
        }
    }

    #[test]
    fn empty_graph_divisible() {
        let g = RGraph::new(2, 5).to_multi();
        assert!(is_divisible(&g, &triangle(), 1).unwrap().is_divisible());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn divisibility_matches_bruteforce_gcd_small() {
        // brute force: check d_i | lambda*|G(S)| by enumerating every i-set
        for seed in 0..20 {
            let g = random_rgraph(3, 7, 0.4, seed);
            let f = fano();
            let fast = is_divisible(&g.to_multi(), &f, 1).unwrap().is_divisible();
            let deg = div_vector(&f).unwrap().0;
            let mut slow = true;
            'outer: for i in 0..3 {
                for s in combinations(7, i) {
                    let s: Vec<Vertex> = s.into_iter().map(|v| v as Vertex).collect();
                    if !g.degree_of(&s).is_multiple_of(deg[i]) {
                        slow = false;
                        break 'outer;
                    }
                }
            }
            assert_eq!(fast, slow, "seed {}", seed);
        }
        // same cross-check on every instance size up to 10 for 2-graphs
        for n in 4..=10usize {
            for seed in 0..10 {
                let g = random_rgraph(2, n, 0.5, seed);
                let f = triangle();
                let fast = is_divisible(&g.to_multi(), &f, 1).unwrap().is_divisible();
                let deg = div_vector(&f).unwrap().0;
                let mut slow = (g.len() as u64).is_multiple_of(deg[0]);
                for v in 0..n as Vertex {
                    slow &= g.degree_of(&[v]).is_multiple_of(deg[1]);
                }
                assert_eq!(fast, slow, "n {} seed {}", n, seed);
            }
        }
    }

    #[test]
    fn weak_regularity_examples() {
        let w = is_weakly_regular(&fano()).unwrap();
        assert!(w.regular);
        assert_eq!(w.s.unwrap(), vec![7, 3, 1]);

        let w = is_weakly_regular(&octahedron()).unwrap();
        assert!(w.regular);
        assert_eq!(w.s.unwrap(), vec![8, 4, 2]);

        let w = is_weakly_regular(&tight_cycle5()).unwrap();
        assert!(!w.regular);
        assert!(w.witness.is_some());

        let w = is_weakly_regular(&RGraph::complete(3, 6)).unwrap();
        assert!(w.regular);
    }

    #[test]
    fn link_divisibility_identity_weakly_regular() {
        // Deg(F(S))_j = Deg(F)_{i+j} whenever F(S) is non-empty
        for f in [fano(), octahedron()] {
            let deg = div_vector(&f).unwrap().0;
            for i in 1..f.r() {
                for s in combinations(f.n(), i) {
                    let s: Vec<Vertex> = s.into_iter().map(|v| v as Vertex).collect();
                    let l = f.link(&s).unwrap();
                    if l.is_empty() {
                        continue;
                    }
                    let ldeg = div_vector(&l).unwrap().0;
                    for (j, d) in ldeg.iter().enumerate() {
                        assert_eq!(*d, deg[i + j]);
                    }
                }
            }
        }
    }

    #[test]
    fn shadow_of_fano_is_k7() {
        let (sh, sp) = shadow(&fano()).unwrap();
        assert_eq!(sh.len(), 21);
        assert_eq!(sh, RGraph::complete(2, 7));
        assert_eq!(sp.unwrap(), vec![21, 6]);
        // cross-check the vector against a direct regularity test
        let w = is_weakly_regular(&sh).unwrap();
        assert_eq!(w.s.unwrap(), vec![21, 6]);
    }

    #[test]
    fn shadow_of_octahedron() {
        let (sh, sp) = shadow(&octahedron()).unwrap();
        // the octahedron graph K_{2,2,2}: 12 edges, antipodal pairs missing
        assert_eq!(sh.len(), 12);
        assert!(!sh.contains(&[0, 3]));
        assert_eq!(sp.unwrap(), vec![12, 4]);
        let w = is_weakly_regular(&sh).unwrap();
        assert_eq!(w.s.unwrap(), vec![12, 4]);
    }

    #[test]
    fn shadow_of_single_edge() {
        let g = RGraph::from_edges(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let (sh, _) = shadow(&g).unwrap();
        assert_eq!(sh.len(), 3);
    }

    #[test]
    fn handshaking_on_random_graphs() {
        // |G(S)| * binom(r-i, r-k) = sum over k-sets T containing S of |G(T)|
        for seed in 0..10 {
            let g = random_rgraph(3, 8, 0.5, seed);
            for i in 0..3usize {
                for k in i..3usize {
                    for s in combinations(8, i) {
                        let s: Vec<Vertex> = s.into_iter().map(|v| v as Vertex).collect();
                        let lhs = g.degree_of(&s) * binomial((3 - i) as u64, (3 - k) as u64);
                        let mut rhs = 0;
                        for t in combinations(8, k) {
                            let t: Vec<Vertex> = t.into_iter().map(|v| v as Vertex).collect();
                            if is_subset(&s, &t) {
                                rhs += g.degree_of(&t);
                            }
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn typicality_complete_graph() {
        let n = 10;
        let g = RGraph::complete(2, n);
        let rep = typicality(&g, 2, 1.0, TypicalityMode::Exhaustive).unwrap();
        // worst family: two disjoint vertices, intersection n-2
        assert!((rep.c - 2.0 / n as f64).abs() < 1e-12);
        assert!(rep.typical);
    }

    #[test]
    fn typicality_empty_graph_not_typical() {
        let g = RGraph::new(2, 8);
        let rep = typicality(&g, 1, 0.5, TypicalityMode::Exhaustive).unwrap();
        assert!(!rep.typical);
        assert!((rep.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn typicality_sampled_random_graphs() {
        // Monte-Carlo over fixed seeds with the observed envelope frozen: at
        // n = 200, p = 0.5 the pairwise intersections at h = 2 deviate by
        // roughly half their mean, far above the single-set deviations
        let mut max_c: f64 = 0.0;
        for seed in 0..20 {
            let g = fixtures::random_rgraph(2, 200, 0.5, seed);
            let rep = typicality(
                &g,
                2,
                0.5,
                TypicalityMode::Sampled { samples: 300, seed },
            )
            .unwrap();
            assert!(rep.typical);
            assert_eq!(rep.families_checked, 300);
            max_c = max_c.max(rep.c);
        }
        assert!(max_c < 0.7, "observed max {}", max_c);
        assert!(max_c > 0.2, "h = 2 deviations sit well above the h = 1 scale");
    }

    #[test]
    fn divisible_orders() {
        assert_eq!(find_divisible_order(&triangle(), 1).unwrap(), 13);
        // single r-edge: every entry of Deg is 1
        let e = RGraph::from_edges(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(find_divisible_order(&e, 2).unwrap(), 14);
        assert_eq!(find_divisible_order(&fano(), 1).unwrap(), 128);
    }

    #[test]
    fn degree_extremes() {
        assert_eq!(RGraph::complete(2, 7).max_degree(), 6);
        assert_eq!(RGraph::complete(2, 7).min_degree(), 6);
        assert_eq!(fano().max_degree(), 1);
        assert_eq!(fano().min_degree(), 1);
        assert_eq!(RGraph::new(2, 4).max_degree(), 0);
        assert_eq!(RGraph::new(2, 4).min_degree(), 0);
    }

    #[test]
    fn div_vector_first_entry_is_edge_count() {
        for seed in 0..10 {
            let g = random_rgraph(2, 9, 0.5, seed);
            if g.is_empty() {
                continue;
            }
            assert_eq!(div_vector(&g).unwrap().0[0], g.len() as u64);
        }
    }

    #[test]
    fn loader_rules_enforced() {
        assert!(RGraph::from_edges(2, 3, vec![vec![1, 0]]).is_err()); // unsorted
        assert!(RGraph::from_edges(2, 3, vec![vec![0, 3]]).is_err()); // out of range
        assert!(RGraph::from_edges(2, 3, vec![vec![0, 1], vec![0, 1]]).is_err()); // dup
        assert!(RGraph::from_edges(2, 3, vec![vec![0]]).is_err()); // arity
    }
}
