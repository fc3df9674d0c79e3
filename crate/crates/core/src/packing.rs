//! Embeddings and packings of a pattern graph into a host, design
//! verification, well-separation, K-random packings, the random greedy
//! nibble, and greedy rooted embedding with hull disjointness.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::combinat::subsets_of;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{RGraph, Vertex};

/// An injective role map from the pattern's vertices 0..f-1 to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Embedding {
    pub role_map: Vec<Vertex>,
}

impl Embedding {
    pub fn image_edge(&self, pattern_edge: &[Vertex]) -> Vec<Vertex> {
        let mut e: Vec<Vertex> = pattern_edge.iter().map(|&v| self.role_map[v as usize]).collect();
        e.sort_unstable();
        e
    }

    pub fn image_vertices(&self) -> Vec<Vertex> {
        let mut v = self.role_map.clone();
        v.sort_unstable();
        v
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.role_map.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// A collection of pattern copies in a host on host_n vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub pattern: RGraph,
    pub host_n: usize,
    pub copies: Vec<Embedding>,
}

impl Packing {
    pub fn new(pattern: RGraph, host_n: usize) -> Packing {
        Packing {
            pattern,
            host_n,
            copies: Vec::new(),
        }
    }

    /// Covered edges as a simple graph; duplicates are an error.
    pub fn covered(&self) -> Result<RGraph> {
        let mut g = RGraph::new(self.pattern.r(), self.host_n);
        for emb in &self.copies {
            for e in self.pattern.edges() {
                g.insert(emb.image_edge(e))?;
            }
        }
        Ok(g)
    }

    /// Copies sorted by image for bit-stable serialization.
    pub fn canonicalized(&self) -> Packing {
        let mut p = self.clone();
        p.copies.sort_by(|a, b| a.role_map.cmp(&b.role_map));
        p
    }
}

/// Verdict of the packing verifier. `Decomposition` means a valid packing
/// whose covered set equals the host exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PackingVerdict {
    Decomposition,
    ValidPacking,
    Violation(String),
}

impl PackingVerdict {
    pub fn is_valid(&self) -> bool {
        !matches!(self, PackingVerdict::Violation(_))
    }

    pub fn is_decomposition(&self) -> bool {
        matches!(self, PackingVerdict::Decomposition)
    }
}

/// Check every copy is a genuine pattern subgraph of `g` and that copies are
/// pairwise edge-disjoint; report Decomposition when coverage is exact.
pub fn verify_packing(g: &RGraph, p: &Packing) -> PackingVerdict {
    if g.r() != p.pattern.r() {
        return PackingVerdict::Violation("uniformity mismatch".to_string());
    }
    let mut covered: HashSet<Vec<Vertex>> = HashSet::new();
    for (i, emb) in p.copies.iter().enumerate() {
        if emb.role_map.len() != p.pattern.n() {
            return PackingVerdict::Violation(format!("copy {} has a short role map", i));
        }
        if !emb.is_injective() {
            return PackingVerdict::Violation(format!("copy {} is not injective", i));
        }
        if emb.role_map.iter().any(|&v| (v as usize) >= g.n()) {
            return PackingVerdict::Violation(format!("copy {} leaves the host", i));
        }
        for e in p.pattern.edges() {
            let img = emb.image_edge(e);
            if !g.contains(&img) {
                return PackingVerdict::Violation(format!(
                    "copy {}: image edge {:?} is not a host edge",
                    i, img
                ));
            }
            if !covered.insert(img.clone()) {
                return PackingVerdict::Violation(format!(
                    "edge {:?} covered more than once",
                    img
                ));
            }
        }
    }
    if covered.len() == g.len() {
        PackingVerdict::Decomposition
    } else {
        PackingVerdict::ValidPacking
    }
}

/// Check the copies form an (F, lambda)-design of g: distinct copies, every
/// host edge covered exactly lambda times.
pub fn verify_design(g: &RGraph, p: &Packing, lambda: u64) -> PackingVerdict {
    if g.r() != p.pattern.r() {
        return PackingVerdict::Violation("uniformity mismatch".to_string());
    }
    let mut seen_copies: BTreeSet<BTreeSet<Vec<Vertex>>> = BTreeSet::new();
    let mut coverage: HashMap<Vec<Vertex>, u64> = HashMap::new();
    for (i, emb) in p.copies.iter().enumerate() {
        if !emb.is_injective() {
            return PackingVerdict::Violation(format!("copy {} is not injective", i));
        }
        let mut edge_set = BTreeSet::new();
        for e in p.pattern.edges() {
            let img = emb.image_edge(e);
            if !g.contains(&img) {
                return PackingVerdict::Violation(format!(
                    "copy {}: image edge {:?} is not a host edge",
                    i, img
                ));
            }
            *coverage.entry(img.clone()).or_insert(0) += 1;
            edge_set.insert(img);
        }
        if !seen_copies.insert(edge_set) {
            return PackingVerdict::Violation(format!("copy {} duplicates an earlier copy", i));
        }
    }
    for e in g.edges() {
        let c = coverage.get(e).copied().unwrap_or(0);
        if c != lambda {
            return PackingVerdict::Violation(format!(
                "edge {:?} covered {} times, expected {}",
                e, c, lambda
            ));
        }
    }
    if coverage.keys().any(|e| !g.contains(e)) {
        return PackingVerdict::Violation("covered edge outside host".to_string());
    }
    PackingVerdict::Decomposition
}

/// Well-separation report: either a pair of copies sharing more than r
/// vertices, or the minimal kappa such that no r-set lies in more than kappa
/// copies' vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellSeparation {
    Ws1Violation { copy_a: usize, copy_b: usize, shared: usize },
    Kappa(u64),
}

impl WellSeparation {
    pub fn kappa(&self) -> Option<u64> {
        match self {
            WellSeparation::Kappa(k) => Some(*k),
            _ => None,
        }
    }
}

pub fn well_separation(p: &Packing) -> WellSeparation {
    let r = p.pattern.r();
    // two copies share more than r vertices iff they share an (r+1)-subset
    let mut owner: HashMap<Vec<Vertex>, usize> = HashMap::new();
    for (i, emb) in p.copies.iter().enumerate() {
        let verts = emb.image_vertices();
        if verts.len() > r {
            for s in subsets_of(&verts, r + 1) {
                if let Some(&j) = owner.get(&s) {
                    let shared = intersection_size(&p.copies[j].image_vertices(), &verts);
                    return WellSeparation::Ws1Violation {
                        copy_a: j,
                        copy_b: i,
                        shared,
                    };
                }
                owner.insert(s, i);
            }
        }
    }
    let mut counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
    for emb in &p.copies {
        let verts = emb.image_vertices();
        for s in subsets_of(&verts, r) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    WellSeparation::Kappa(counts.values().copied().max().unwrap_or(0))
}

fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let sb: HashSet<_> = b.iter().collect();
    a.iter().filter(|v| sb.contains(v)).count()
}

/// Place a uniformly random copy of `f` on every clique of a K_f^(r)-packing.
/// Deterministic in (inputs, seed).
pub fn k_random_packing(cliques: &Packing, f: &RGraph, seed: u64) -> Result<Packing> {
    let fsize = f.n();
    if cliques.pattern.n() != fsize {
        return invalid(format!(
            "pattern has {} vertices but cliques have {}",
            fsize,
            cliques.pattern.n()
        ));
    }
    let complete = RGraph::complete(f.r(), fsize);
    if cliques.pattern != complete {
        return invalid("input packing must consist of complete cliques".to_string());
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Packing::new(f.clone(), cliques.host_n);
    for clique in &cliques.copies {
        let mut perm: Vec<usize> = (0..fsize).collect();
        perm.shuffle(&mut rng);
        let role_map: Vec<Vertex> = (0..fsize).map(|j| clique.role_map[perm[j]]).collect();
        out.copies.push(Embedding { role_map });
    }
    Ok(out)
}

/// Options for the random greedy nibble.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct NibbleOpts {
    /// Cap on committed copies (None: run to exhaustion).
    pub max_rounds: Option<u64>,
    /// When set, candidates that would break kappa-well-separation are rejected.
    pub separation_kappa: Option<u64>,
    /// Sampling attempts allowed per committed copy before giving up.
    pub budget_per_copy: u64,
}


/// Random greedy packing: sample a residual edge, extend it by random
/// vertices to an f-set, accept when the f-set spans a clique of the
/// residual graph, then commit a uniformly random copy of the pattern on it
/// and delete the copy's edges. Stops when the sampling budget is exhausted
/// without a commit.
pub fn greedy_nibble(g: &RGraph, f: &RGraph, seed: u64, opts: &NibbleOpts) -> Result<(Packing, RGraph)> {
    let fsize = f.n();
    let r = g.r();
    if f.r() != r {
        return invalid("uniformity mismatch".to_string());
    }
    if fsize > g.n() {
        return invalid("pattern larger than host".to_string());
    }
    if f.is_empty() {
        return invalid("empty pattern".to_string());
    }
    let n = g.n();
    let budget = if opts.budget_per_copy == 0 {
        200 * n as u64
    } else {
        opts.budget_per_copy
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // residual edge set with O(1) uniform sampling
    let mut edge_list: Vec<Vec<Vertex>> = g.edges().cloned().collect();
    let mut edge_pos: HashMap<Vec<Vertex>, usize> =
        edge_list.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let remove_edge = |list: &mut Vec<Vec<Vertex>>, pos: &mut HashMap<Vec<Vertex>, usize>, e: &[Vertex]| {
        let i = pos.remove(e).expect("edge present");
        let last = list.len() - 1;
        list.swap(i, last);
        if i != last {
            pos.insert(list[i].clone(), i);
        }
        list.pop();
    };

    // separation bookkeeping
    let mut rset_counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
    let mut over_rsets: HashMap<Vec<Vertex>, ()> = HashMap::new(); // (r+1)-subsets of committed copy images

    let mut packing = Packing::new(f.clone(), n);
    let mut attempts = 0u64;
    'outer: loop {
        if let Some(maxr) = opts.max_rounds {
            if packing.copies.len() as u64 >= maxr {
                break;
            }
        }
        if edge_list.is_empty() {
            break;
        }
        if attempts >= budget {
            break;
        }
        attempts += 1;
        // uniform residual edge
        let e = edge_list[rng.gen_range(0..edge_list.len())].clone();
        // extend by f - r distinct vertices
        let mut cand: Vec<Vertex> = e.clone();
        while cand.len() < fsize {
            let v = rng.gen_range(0..n) as Vertex;
            if !cand.contains(&v) {
                cand.push(v);
            }
        }
        cand.sort_unstable();
        // must span a clique of the residual graph
        for s in subsets_of(&cand, r) {
            if !edge_pos.contains_key(&s) {
                continue 'outer;
            }
        }
        if let Some(kappa) = opts.separation_kappa {
            if cand.len() > r && subsets_of(&cand, r + 1).iter().any(|s| over_rsets.contains_key(s)) {
                continue; // would share more than r vertices with a committed copy
            }
            if subsets_of(&cand, r)
                .iter()
                .any(|s| rset_counts.get(s).copied().unwrap_or(0) + 1 > kappa)
            {
                continue;
            }
        }
        // commit a random pattern copy on the clique
        let mut perm: Vec<usize> = (0..fsize).collect();
        perm.shuffle(&mut rng);
        let role_map: Vec<Vertex> = (0..fsize).map(|j| cand[perm[j]]).collect();
        let emb = Embedding { role_map };
        for fe in f.edges() {
            let img = emb.image_edge(fe);
            remove_edge(&mut edge_list, &mut edge_pos, &img);
        }
        if opts.separation_kappa.is_some() {
            for s in subsets_of(&cand, r) {
                *rset_counts.entry(s).or_insert(0) += 1;
            }
            if cand.len() > r {
                for s in subsets_of(&cand, r + 1) {
                    over_rsets.insert(s, ());
                }
            }
        }
        packing.copies.push(emb);
        attempts = 0;
    }
    let mut leftover = RGraph::new(r, n);
    edge_list.sort();
    for e in edge_list {
        leftover.insert(e)?;
    }
    Ok((packing, leftover))
}

/// A pattern to embed with roots pre-assigned: `roots` lists pattern
/// vertices, `images` their host images (same order, injective).
#[derive(Clone, Debug)]
pub struct RootedPiece {
    pub graph: RGraph,
    pub roots: Vec<Vertex>,
    pub images: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub struct RootedEmbedOpts {
    /// Whole-piece restarts before reporting failure.
    pub retries: u64,
}

impl Default for RootedEmbedOpts {
    fn default() -> Self {
        RootedEmbedOpts { retries: 20 }
    }
}

#[derive(Clone, Debug)]
pub struct RootedEmbedOutcome {
    pub embeddings: Vec<Embedding>,
    /// Maximum (r-1)-degree of the union of the embedded images; reported
    /// only, no guarantee attached.
    pub union_max_degree: u64,
}

/// The hull of a rooted piece: all r-sets on its vertex set that either miss
/// the roots entirely or meet them in a root set (a subset of the roots with
/// positive link).
fn hull_edges(piece: &RootedPiece) -> Vec<Vec<Vertex>> {
    let t = &piece.graph;
    let verts: Vec<Vertex> = (0..t.n() as Vertex).collect();
    let root_set: BTreeSet<Vertex> = piece.roots.iter().copied().collect();
    let mut out = Vec::new();
    for e in subsets_of(&verts, t.r()) {
        let inter: Vec<Vertex> = e.iter().copied().filter(|v| root_set.contains(v)).collect();
        let ok = if inter.is_empty() {
            true
        } else if inter.len() == t.r() {
            false
        } else {
            t.degree_of(&inter) > 0
        };
        if ok {
            out.push(e);
        }
    }
    out
}

/// Greedy degeneracy ordering of the non-root vertices: repeatedly peel the
/// vertex of smallest backward degree from the top. Returns (order, D).
fn degeneracy_order(t: &RGraph, roots: &BTreeSet<Vertex>) -> (Vec<Vertex>, u64) {
    let mut remaining: BTreeSet<Vertex> = (0..t.n() as Vertex).filter(|v| !roots.contains(v)).collect();
    let mut order_rev = Vec::new();
    let mut dmax = 0u64;
    while !remaining.is_empty() {
        // backward degree of v: edges of T inside roots + remaining that contain v
        let mut best: Option<(u64, Vertex)> = None;
        for &v in &remaining {
            let deg = t
                .edges()
                .filter(|e| e.contains(&v) && e.iter().all(|w| roots.contains(w) || remaining.contains(w)))
                .count() as u64;
            if best.map(|(d, _)| deg < d).unwrap_or(true) {
                best = Some((deg, v));
            }
        }
        let (d, v) = best.unwrap();
        dmax = dmax.max(d);
        order_rev.push(v);
        remaining.remove(&v);
    }
    order_rev.reverse();
    (order_rev, dmax)
}

/// Embed each rooted piece into the host greedily, in a degeneracy order of
/// the piece, choosing uniformly among feasible host vertices. Within a
/// piece vertices are distinct; across pieces only the hulls must be
/// edge-disjoint. Pieces' embedded hull edges accumulate and block later
/// pieces.
pub fn rooted_embed(
    host: &RGraph,
    pieces: &[RootedPiece],
    seed: u64,
    opts: &RootedEmbedOpts,
) -> Result<RootedEmbedOutcome> {
    let r = host.r();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut used_hulls: HashSet<Vec<Vertex>> = HashSet::new();
    let mut embeddings = Vec::with_capacity(pieces.len());
    for (pi, piece) in pieces.iter().enumerate() {
        let t = &piece.graph;
        if t.r() != r {
            return invalid(format!("piece {} has wrong uniformity", pi));
        }
        if piece.roots.len() != piece.images.len() {
            return invalid(format!("piece {}: roots and images differ in length", pi));
        }
        let root_set: BTreeSet<Vertex> = piece.roots.iter().copied().collect();
        if t.edges().any(|e| e.iter().all(|v| root_set.contains(v))) {
            return invalid(format!("piece {}: the rooted set spans an edge", pi));
        }
        {
            let mut im = piece.images.clone();
            im.sort_unstable();
            im.dedup();
            if im.len() != piece.images.len() {
                return invalid(format!("piece {}: root images are not injective", pi));
            }
        }
        if t.n() > host.n() {
            return Err(Error::EmbeddingFailure(format!(
                "piece {} needs {} vertices, host has {}",
                pi,
                t.n(),
                host.n()
            )));
        }
        let (order, _) = degeneracy_order(t, &root_set);
        let hull = hull_edges(piece);
        let mut placed: Option<Vec<Option<Vertex>>> = None;
        'retry: for _ in 0..=opts.retries {
            let mut phi: Vec<Option<Vertex>> = vec![None; t.n()];
            for (root, img) in piece.roots.iter().zip(&piece.images) {
                phi[*root as usize] = Some(*img);
            }
            for &v in &order {
                // pattern constraints: edges of t whose other vertices are placed
                let mut required_links: Vec<Vec<Vertex>> = Vec::new();
                for e in t.edges() {
                    if e.contains(&v) {
                        let others: Vec<Vertex> = e.iter().copied().filter(|&w| w != v).collect();
                        if others.iter().all(|&w| phi[w as usize].is_some()) {
                            let mut img: Vec<Vertex> =
                                others.iter().map(|&w| phi[w as usize].unwrap()).collect();
                            img.sort_unstable();
                            required_links.push(img);
                        }
                    }
                }
                let current_image: HashSet<Vertex> =
                    phi.iter().flatten().copied().collect();
                let mut candidates: Vec<Vertex> = Vec::new();
                'cand: for x in 0..host.n() as Vertex {
                    if current_image.contains(&x) {
                        continue;
                    }
                    for s in &required_links {
                        let mut e = s.clone();
                        e.push(x);
                        e.sort_unstable();
                        if !host.contains(&e) {
                            continue 'cand;
                        }
                    }
                    // hull conflict: no hull edge through x and placed vertices may
                    // collide with an earlier piece's hull
                    for he in &hull {
                        if !he.contains(&v) {
                            continue;
                        }
                        let others: Vec<Vertex> = he.iter().copied().filter(|&w| w != v).collect();
                        if others.iter().all(|&w| phi[w as usize].is_some()) {
                            let mut img: Vec<Vertex> =
                                others.iter().map(|&w| phi[w as usize].unwrap()).collect();
                            img.push(x);
                            img.sort_unstable();
                            if used_hulls.contains(&img) {
                                continue 'cand;
                            }
                        }
                    }
                    candidates.push(x);
                }
                if candidates.is_empty() {
                    continue 'retry;
                }
                let x = candidates[rng.gen_range(0..candidates.len())];
                phi[v as usize] = Some(x);
            }
            placed = Some(phi);
            break;
        }
        let Some(phi) = placed else {
            return Err(Error::EmbeddingFailure(format!(
                "piece {} could not be embedded after {} retries",
                pi, opts.retries
            )));
        };
        let role_map: Vec<Vertex> = phi.iter().map(|v| v.expect("all placed")).collect();
        let emb = Embedding { role_map };
        // commit this piece's hull
        for he in &hull {
            let mut img: Vec<Vertex> = he.iter().map(|&w| emb.role_map[w as usize]).collect();
            img.sort_unstable();
            used_hulls.insert(img);
        }
        embeddings.push(emb);
    }
    // union max degree, reported for diagnostics
    let mut union = RGraph::new(r, host.n());
    for (piece, emb) in pieces.iter().zip(&embeddings) {
        for e in piece.graph.edges() {
            let img = emb.image_edge(e);
            if !union.contains(&img) {
                union.insert(img)?;
            }
        }
    }
    Ok(RootedEmbedOutcome {
        embeddings,
        union_max_degree: union.max_degree(),
    })
}

/// Check hull edge-disjointness of a finished embedding set after the fact.
pub fn hulls_edge_disjoint(pieces: &[RootedPiece], embs: &[Embedding]) -> bool {
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    for (piece, emb) in pieces.iter().zip(embs) {
        for he in hull_edges(piece) {
            let mut img: Vec<Vertex> = he.iter().map(|&w| emb.role_map[w as usize]).collect();
            img.sort_unstable();
            if !seen.insert(img) {
                return false;
            }
        }
    }
    true
}

/// Fano triangle decomposition of K_7 as a clique packing, used in tests and
/// the CLI demo path.
pub fn fano_triangles() -> Packing {
    let lines = [
        [0u32, 1, 3],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 6],
        [0, 4, 5],
        [1, 5, 6],
        [0, 2, 6],
    ];
    Packing {
        pattern: RGraph::complete(2, 3),
        host_n: 7,
        copies: lines
            .iter()
            .map(|l| Embedding { role_map: l.to_vec() })
            .collect(),
    }
}

/// Conservation identity |leftover| = |G| - |F| * copies, used by verifiers.
pub fn conservation_holds(g: &RGraph, f: &RGraph, p: &Packing, leftover: &RGraph) -> bool {
    g.len() == leftover.len() + f.len() * p.copies.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::*;
    use std::collections::BTreeMap;

    #[test]
    fn fano_lines_decompose_k7() {
        let g = RGraph::complete(2, 7);
        let p = fano_triangles();
        // independent pair-coverage counter over the 21 pairs
        let mut cover: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
        for emb in &p.copies {
            for e in p.pattern.edges() {
                *cover.entry(emb.image_edge(e)).or_insert(0) += 1;
            }
        }
        assert_eq!(cover.len(), 21);
        assert!(cover.values().all(|&c| c == 1));
        assert_eq!(verify_packing(&g, &p), PackingVerdict::Decomposition);
    }

    #[test]
    fn empty_packing_of_empty_graph_is_decomposition() {
        let g = RGraph::new(2, 3);
        let p = Packing::new(triangle(), 3);
        assert_eq!(verify_packing(&g, &p), PackingVerdict::Decomposition);
    }

    #[test]
    fn design_lambda1_reduces_to_decomposition() {
        let g = RGraph::complete(2, 7);
        let p = fano_triangles();
        assert_eq!(verify_design(&g, &p, 1), PackingVerdict::Decomposition);
    }

    #[test]
    fn duplicate_copy_fails_distinctness() {
        let g = RGraph::complete(2, 7);
        let mut p = fano_triangles();
        p.copies.push(p.copies[0].clone());
        assert!(matches!(verify_design(&g, &p, 1), PackingVerdict::Violation(_)));
    }

    #[test]
    fn two_disjoint_fano_labellings_give_lambda2_design() {
        // brute force a relabelling whose line set is disjoint from the
        // original, then check the union is a lambda=2 design
        let g = RGraph::complete(2, 7);
        let p1 = fano_triangles();
        let lines: BTreeSet<Vec<Vertex>> = p1.copies.iter().map(|emb| emb.image_vertices()).collect();
        let mut found = None;
        'search: for perm in crate::combinat::permutations(7) {
            let mapped: BTreeSet<Vec<Vertex>> = lines
                .iter()
                .map(|l| {
                    let mut m: Vec<Vertex> = l.iter().map(|&v| perm[v as usize] as Vertex).collect();
                    m.sort_unstable();
                    m
                })
                .collect();
            if mapped.is_disjoint(&lines) {
                found = Some(perm);
                break 'search;
            }
        }
        let perm = found.expect("a line-disjoint relabelling of the Fano plane exists");
        let mut both = p1.clone();
        for emb in &p1.copies {
            both.copies.push(Embedding {
                role_map: emb.role_map.iter().map(|&v| perm[v as usize] as Vertex).collect(),
            });
        }
        assert_eq!(verify_design(&g, &both, 2), PackingVerdict::Decomposition);
    }

    #[test]
    fn well_separation_examples() {
        let p = fano_triangles();
        assert_eq!(well_separation(&p), WellSeparation::Kappa(1));

        // two triangles on the same 4 vertices sharing a vertex set of size 3
        let mut p = Packing::new(triangle(), 4);
        p.copies.push(Embedding { role_map: vec![0, 1, 2] });
        p.copies.push(Embedding { role_map: vec![0, 1, 3] });
        p.copies.push(Embedding { role_map: vec![0, 2, 3] });
        // r = 2: pairs {0,1} etc. lie in two copies' vertex sets
        assert_eq!(well_separation(&p), WellSeparation::Kappa(2));

        // copies sharing more than r vertices
        let k4 = RGraph::complete(2, 4);
        let mut p = Packing::new(k4, 6);
        p.copies.push(Embedding { role_map: vec![0, 1, 2, 3] });
        p.copies.push(Embedding { role_map: vec![0, 1, 2, 4] });
        assert!(matches!(
            well_separation(&p),
            WellSeparation::Ws1Violation { .. }
        ));
    }

    #[test]
    fn k_random_covers_expected_count() {
        let cliques = fano_triangles();
        let f = path3();
        let p = k_random_packing(&cliques, &f, 7).unwrap();
        let covered = p.covered().unwrap();
        assert_eq!(covered.len(), 14); // |F| * |K| = 2 * 7
        let leftover = RGraph::complete(2, 7).minus(&covered);
        assert_eq!(leftover.len(), 7);
        assert_eq!(well_separation(&p), WellSeparation::Kappa(1));
    }

    #[test]
    fn k_random_deterministic_and_complete_pattern_trivial() {
        let cliques = fano_triangles();
        let f = path3();
        let a = k_random_packing(&cliques, &f, 3).unwrap();
        let b = k_random_packing(&cliques, &f, 3).unwrap();
        assert_eq!(a, b);
        let c = k_random_packing(&cliques, &f, 4).unwrap();
        assert_ne!(a, c); // overwhelmingly likely and fixed by the seeds

        // F = K_f leaves nothing
        let full = k_random_packing(&cliques, &triangle(), 0).unwrap();
        let covered = full.covered().unwrap();
        assert_eq!(covered.len(), 21);
    }

    #[test]
    fn k_random_rejects_mismatched_sizes() {
        let cliques = fano_triangles();
        let f4 = RGraph::complete(2, 4);
        assert!(k_random_packing(&cliques, &f4, 0).is_err());
    }

    #[test]
    fn nibble_on_k15_verifies() {
        let g = RGraph::complete(2, 15);
        let f = triangle();
        let (p, leftover) = greedy_nibble(&g, &f, 1, &NibbleOpts::default()).unwrap();
        assert!(verify_packing(&g, &p).is_valid());
        assert!(conservation_holds(&g, &f, &p, &leftover));
        // leftover must be exactly G minus covered
        let covered = p.covered().unwrap();
        assert_eq!(g.minus(&covered), leftover);
        assert!(!p.copies.is_empty());
    }

    #[test]
    fn nibble_three_uniform() {
        let g = RGraph::complete(3, 12);
        let f = RGraph::complete(3, 4); // tetrahedron
        let (p, leftover) = greedy_nibble(&g, &f, 2, &NibbleOpts::default()).unwrap();
        assert!(verify_packing(&g, &p).is_valid());
        assert!(conservation_holds(&g, &f, &p, &leftover));
        assert!(!p.copies.is_empty());
    }

    #[test]
    fn nibble_no_candidates_returns_input() {
        // K_4 minus an edge contains no triangle through that edge's endpoints... use
        // a graph with no triangle at all: C_5
        let mut g = RGraph::new(2, 5);
        for i in 0..5u32 {
            g.insert_unsorted(vec![i, (i + 1) % 5]).unwrap();
        }
        let (p, leftover) = greedy_nibble(&g, &triangle(), 0, &NibbleOpts::default()).unwrap();
        assert!(p.copies.is_empty());
        assert_eq!(leftover, g);
    }

    #[test]
    fn nibble_respects_separation_kappa() {
        let g = RGraph::complete(2, 12);
        let f = triangle();
        let opts = NibbleOpts {
            separation_kappa: Some(1),
            ..NibbleOpts::default()
        };
        let (p, _) = greedy_nibble(&g, &f, 5, &opts).unwrap();
        assert!(verify_packing(&g, &p).is_valid());
        assert_eq!(well_separation(&p), WellSeparation::Kappa(1));
    }

    #[test]
    fn rooted_embed_triangle_with_two_roots() {
        // the rooted pair is already adjacent in the host, so the piece is
        // the triangle minus the root edge; the apex may land on any of the
        // remaining 8 host vertices
        let host = RGraph::complete(2, 10);
        let piece = RootedPiece {
            graph: path3_rooted(),
            roots: vec![0, 1],
            images: vec![3, 7],
        };
        let mut apexes = BTreeSet::new();
        for seed in 0..60 {
            let out = rooted_embed(&host, std::slice::from_ref(&piece), seed, &RootedEmbedOpts::default()).unwrap();
            let emb = &out.embeddings[0];
            assert_eq!(emb.role_map[0], 3);
            assert_eq!(emb.role_map[1], 7);
            assert!(emb.role_map[2] != 3 && emb.role_map[2] != 7);
            assert!(hulls_edge_disjoint(std::slice::from_ref(&piece), &out.embeddings));
            apexes.insert(emb.role_map[2]);
        }
        // feasibility enumeration: all 8 non-root vertices are reachable
        assert_eq!(apexes.len(), 8);
    }

    /// Triangle with the edge between the two root vertices removed.
    fn path3_rooted() -> RGraph {
        RGraph::from_edges(2, 3, vec![vec![0, 2], vec![1, 2]]).unwrap()
    }

    #[test]
    fn rooted_embed_empty_and_too_small() {
        let host = RGraph::complete(2, 5);
        let out = rooted_embed(&host, &[], 0, &RootedEmbedOpts::default()).unwrap();
        assert!(out.embeddings.is_empty());

        let piece = RootedPiece {
            graph: RGraph::complete(2, 6),
            roots: vec![],
            images: vec![],
        };
        assert!(matches!(
            rooted_embed(&host, &[piece], 0, &RootedEmbedOpts::default()),
            Err(Error::EmbeddingFailure(_))
        ));
    }

    #[test]
    fn rooted_embed_many_pieces_hull_disjoint() {
        let host = RGraph::complete(2, 40);
        let pieces: Vec<RootedPiece> = (0..30)
            .map(|i| RootedPiece {
                graph: triangle(),
                roots: vec![0],
                images: vec![(i % 10) as Vertex],
            })
            .collect();
        let out = rooted_embed(&host, &pieces, 9, &RootedEmbedOpts::default()).unwrap();
        assert!(hulls_edge_disjoint(&pieces, &out.embeddings));
        // every copy honors its root
        for (piece, emb) in pieces.iter().zip(&out.embeddings) {
            assert_eq!(emb.role_map[0], piece.images[0]);
        }
        assert!(out.union_max_degree > 0);
    }

    #[test]
    fn degeneracy_order_respects_bound() {
        // triangle rooted at one vertex: the last-placed vertex sees both of
        // its edges, so the rooted degeneracy is 2
        let t = triangle();
        let roots: BTreeSet<Vertex> = [0].into_iter().collect();
        let (_, d) = degeneracy_order(&t, &roots);
        assert_eq!(d, 2);
        // a path rooted at its two endpoints peels with one backward edge... the
        // apex closes both edges at once, giving 2 as well
        let p = RGraph::from_edges(2, 3, vec![vec![0, 2], vec![1, 2]]).unwrap();
        let roots: BTreeSet<Vertex> = [0, 1].into_iter().collect();
        let (_, d) = degeneracy_order(&p, &roots);
        assert_eq!(d, 2);
    }

    #[test]
    fn leftover_count_conservation_random_seeds() {
        let g = RGraph::complete(2, 12);
        let f = triangle();
        for seed in 0..10 {
            let (p, leftover) = greedy_nibble(&g, &f, seed, &NibbleOpts::default()).unwrap();
            assert_eq!(g.len(), leftover.len() + 3 * p.copies.len());
            assert!(verify_packing(&g, &p).is_valid());
        }
    }
}
