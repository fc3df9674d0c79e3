//! Degree shifters: multigraph shifters assembled from punctured copies of
//! the regularised pattern host, and simple shifters obtained by extending
//! every copy of the multigraph's decomposition back to a full host copy.
//!
//! A shifter rooted at pairs (x_i^0, x_i^1) moves degree residues between
//! the 2^k transversal root k-sets while every other set keeps degree 0 mod
//! the regularised divisibility vector.

use std::collections::BTreeMap;

use crate::combinat::{binomial, egcd, subsets_of};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{div_vector, MultiRGraph, RGraph, Vertex};
use crate::packing::{verify_packing, well_separation, Embedding, Packing, WellSeparation};
use crate::regularise::Regularisation;

/// A pattern together with a 1-well-separated decomposition of a host by it.
#[derive(Clone, Debug)]
pub struct FstarDecomposition {
    pub pattern: RGraph,
    pub fstar: RGraph,
    pub copies: Vec<Embedding>,
}

impl FstarDecomposition {
    pub fn from_regularisation(reg: &Regularisation) -> FstarDecomposition {
        FstarDecomposition {
            pattern: reg.input.clone(),
            fstar: reg.fstar.clone(),
            copies: reg.decomposition.copies.clone(),
        }
    }

    /// Validate an explicitly supplied decomposition.
    pub fn validated(self) -> Result<FstarDecomposition> {
        let p = Packing {
            pattern: self.pattern.clone(),
            host_n: self.fstar.n(),
            copies: self.copies.clone(),
        };
        if !verify_packing(&self.fstar, &p).is_decomposition() {
            return invalid("copies do not decompose the host".to_string());
        }
        match well_separation(&p) {
            WellSeparation::Kappa(k) if k <= 1 => {}
            other => return invalid(format!("decomposition is not 1-well separated: {:?}", other)),
        }
        Ok(self)
    }

    /// The designated copy must span no host edges beyond its own.
    fn check_designated_copy(&self) -> Result<&Embedding> {
        let fhat = self
            .copies
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty decomposition".to_string()))?;
        let verts = fhat.image_vertices();
        let spanned = subsets_of(&verts, self.fstar.r())
            .into_iter()
            .filter(|e| self.fstar.contains(e))
            .count();
        if spanned != self.pattern.len() {
            return invalid(
                "designated copy spans extra host edges; punctured extension impossible".to_string(),
            );
        }
        Ok(fhat)
    }
}

#[derive(Clone, Debug)]
pub struct MultiShifter {
    pub graph: MultiRGraph,
    /// x_1^0..x_k^0 then x_1^1..x_k^1.
    pub roots: Vec<Vertex>,
    pub k: usize,
    /// Pattern copies covering the multigraph with multiplicity.
    pub decomposition: Vec<Embedding>,
    /// Chosen positive coefficients per k-subset of the pattern's vertices.
    pub coefficients: Vec<(Vec<Vertex>, u64)>,
}

const HAT: Vertex = Vertex::MAX;

/// How Bezout coefficients are normalised before copies are laid down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientRule {
    /// Every coefficient is lifted to at least 1 by adding multiples of the
    /// modulus; every k-set of the pattern contributes copies.
    ShiftAllPositive,
    /// Negative coefficients are lifted to the smallest non-negative
    /// representative; zero coefficients contribute no copies. Produces far
    /// smaller shifters with the same congruence table.
    MinimalNonNegative,
}

/// Coefficients with sum a_S |F(S)| = Deg(F)_k modulo Deg(F*)_k, from a
/// Bezout solution over the nonzero link sizes.
fn normalised_coefficients(links: &[u64], modulus: u64, rule: CoefficientRule) -> Vec<u64> {
    let mut g: i64 = 0;
    let mut coeffs: Vec<i64> = Vec::with_capacity(links.len());
    for &v in links {
        if g == 0 {
            g = v as i64;
            coeffs.push(1);
        } else if v as i64 % g == 0 {
            // the running gcd already covers this value; keep the earlier
            // coefficients so the choice favors lexicographically-first sets
            coeffs.push(0);
        } else {
            let (ng, x, y) = egcd(g, v as i64);
            for c in coeffs.iter_mut() {
                *c *= x;
            }
            coeffs.push(y);
            g = ng;
        }
    }
    debug_assert!(g > 0);
    let floor = match rule {
        CoefficientRule::ShiftAllPositive => 1,
        CoefficientRule::MinimalNonNegative => 0,
    };
    coeffs
        .into_iter()
        .map(|c| {
            if c >= floor {
                c as u64
            } else {
                let t = (floor - c + modulus as i64 - 1) / (modulus as i64);
                (c + t * modulus as i64) as u64
            }
        })
        .collect()
}

/// Build the multigraph shifter rooted at the 2k given vertices. Fresh
/// internal vertices are allocated densely above the largest root.
pub fn multishifter(
    f: &RGraph,
    dec: &FstarDecomposition,
    k: usize,
    roots: &[Vertex],
) -> Result<MultiShifter> {
    build_multishifter(f, dec, k, roots, false, CoefficientRule::ShiftAllPositive)
}

/// As `multishifter` but with an explicit coefficient rule.
pub fn multishifter_with(
    f: &RGraph,
    dec: &FstarDecomposition,
    k: usize,
    roots: &[Vertex],
    rule: CoefficientRule,
) -> Result<MultiShifter> {
    build_multishifter(f, dec, k, roots, false, rule)
}

fn build_multishifter(
    f: &RGraph,
    dec: &FstarDecomposition,
    k: usize,
    roots: &[Vertex],
    swap_last_pair: bool,
    rule: CoefficientRule,
) -> Result<MultiShifter> {
    let r = f.r();
    if k < 1 || k >= r {
        return invalid(format!("need 1 <= k < r, got k = {}, r = {}", k, r));
    }
    if roots.len() != 2 * k {
        return invalid(format!("need 2k = {} roots", 2 * k));
    }
    {
        let mut s = roots.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return invalid("roots must be distinct".to_string());
        }
    }
    if f != &dec.pattern {
        return invalid("pattern does not match the decomposition's pattern".to_string());
    }
    let mut work_roots = roots.to_vec();
    if swap_last_pair {
        work_roots.swap(k - 1, 2 * k - 1);
    }
    let b_k = div_vector(&dec.fstar)?.0[k];
    let fhat = dec.check_designated_copy()?.clone();

    // k-subsets of the pattern's vertex set with positive link
    let all_verts: Vec<Vertex> = (0..f.n() as Vertex).collect();
    let sets: Vec<(Vec<Vertex>, u64)> = subsets_of(&all_verts, k)
        .into_iter()
        .filter_map(|s| {
            let link = f.degree_of(&s);
            (link > 0).then_some((s, link))
        })
        .collect();
    if sets.is_empty() {
        return invalid("pattern has no k-set with positive link".to_string());
    }
    let links: Vec<u64> = sets.iter().map(|(_, l)| *l).collect();
    let coeffs = normalised_coefficients(&links, b_k, rule);

    let mut alloc: Vertex = roots.iter().copied().max().unwrap() + 1;
    let mut graph = MultiRGraph::new(r, alloc as usize);
    let mut decomposition: Vec<Embedding> = Vec::new();

    // edges of the punctured host and of the replacement copy, in host space
    // with HAT standing for the replaced vertex
    let fhat_edges: Vec<Vec<Vertex>> = f.edges().map(|e| fhat.image_edge(e)).collect();
    let punctured: Vec<Vec<Vertex>> = dec
        .fstar
        .edges()
        .filter(|e| !fhat_edges.contains(e))
        .cloned()
        .collect();

    for ((sstar, _), &a) in sets.iter().zip(&coeffs) {
        // ordered root images of the chosen k-set inside the designated copy
        let x_of: Vec<Vertex> = sstar.iter().map(|&v| fhat.role_map[v as usize]).collect();
        let replaced_edges: Vec<Vec<Vertex>> = fhat_edges
            .iter()
            .map(|e| {
                let mut out: Vec<Vertex> = e
                    .iter()
                    .map(|&v| if v == x_of[k - 1] { HAT } else { v })
                    .collect();
                out.sort_unstable();
                out
            })
            .collect();
        let replaced_role_map: Vec<Vertex> = fhat
            .role_map
            .iter()
            .map(|&v| if v == x_of[k - 1] { HAT } else { v })
            .collect();
        for _ in 0..a {
            // one instance: fresh internals shared across all words
            let mut vmap: BTreeMap<Vertex, Vertex> = BTreeMap::new();
            for v in 0..dec.fstar.n() as Vertex {
                if !x_of.contains(&v) {
                    vmap.insert(v, alloc);
                    alloc += 1;
                }
            }
            for word in 0..(1u32 << (k - 1)) {
                let mut wmap = vmap.clone();
                for (i, &x) in x_of.iter().enumerate().take(k - 1) {
                    let bit = (word >> i & 1) as usize;
                    wmap.insert(x, work_roots[i + bit * k]);
                }
                if word.count_ones() % 2 == 1 {
                    wmap.insert(x_of[k - 1], work_roots[k - 1]); // plays the replaced slot
                    wmap.insert(HAT, work_roots[2 * k - 1]);
                } else {
                    wmap.insert(x_of[k - 1], work_roots[2 * k - 1]);
                    wmap.insert(HAT, work_roots[k - 1]);
                }
                graph.grow_n(alloc as usize);
                for e in punctured.iter().chain(&replaced_edges) {
                    let img: Vec<Vertex> = e.iter().map(|&v| wmap[&v]).collect();
                    graph.add_unsorted(img, 1)?;
                }
                for emb in dec.copies.iter().skip(1) {
                    decomposition.push(Embedding {
                        role_map: emb.role_map.iter().map(|&v| wmap[&v]).collect(),
                    });
                }
                decomposition.push(Embedding {
                    role_map: replaced_role_map.iter().map(|&v| wmap[&v]).collect(),
                });
            }
        }
    }
    graph.grow_n(alloc as usize);
    // every constructed shifter carries its congruence table; scan it now,
    // relative to the roots the construction actually used
    let h_k = div_vector(f)?.0[k];
    let b = div_vector(&dec.fstar)?.0;
    let scan = scan_congruences(&graph, &work_roots, k, h_k, &b[..=k]);
    if !scan.ok {
        return Err(Error::Internal(format!(
            "multigraph shifter failed its own scan: {:?}",
            scan.first_violation
        )));
    }
    Ok(MultiShifter {
        graph,
        roots: roots.to_vec(),
        k,
        decomposition,
        coefficients: sets
            .into_iter()
            .zip(coeffs)
            .map(|((s, _), a)| (s, a))
            .collect(),
    })
}

#[derive(Clone, Debug)]
pub struct SimpleShifter {
    pub graph: RGraph,
    pub roots: Vec<Vertex>,
    pub k: usize,
    pub decomposition: Packing,
    /// Degeneracy of the construction's vertex ordering rooted at the roots.
    pub degeneracy: u64,
    pub degeneracy_bound: u64,
}

/// Build the simple shifter: take the multigraph shifter with the final
/// root pair swapped, extend every copy of its decomposition to a full host
/// copy on fresh vertices, and drop the original copies.
pub fn simple_shifter(
    f: &RGraph,
    dec: &FstarDecomposition,
    k: usize,
    roots: &[Vertex],
    edge_budget: u64,
) -> Result<SimpleShifter> {
    simple_shifter_with(f, dec, k, roots, edge_budget, CoefficientRule::ShiftAllPositive)
}

/// As `simple_shifter` but with an explicit coefficient rule.
pub fn simple_shifter_with(
    f: &RGraph,
    dec: &FstarDecomposition,
    k: usize,
    roots: &[Vertex],
    edge_budget: u64,
    rule: CoefficientRule,
) -> Result<SimpleShifter> {
    let multi = build_multishifter(f, dec, k, roots, true, rule)?;
    let fstar_n = dec.fstar.n();
    let copies = multi.decomposition.len() as u64;
    let total_edges = copies * (dec.fstar.len() - f.len()) as u64;
    if total_edges > edge_budget {
        return Err(Error::ResourceBudget(format!(
            "simple shifter would have {} edges (budget {})",
            total_edges, edge_budget
        )));
    }
    let fhat = dec.check_designated_copy()?.clone();
    let mut alloc = multi.graph.n() as Vertex;
    let mut graph = RGraph::new(f.r(), alloc as usize);
    let mut out_copies: Vec<Embedding> = Vec::new();
    let fhat_edges: Vec<Vec<Vertex>> = f.edges().map(|e| fhat.image_edge(e)).collect();
    let mut order: Vec<Vertex> = Vec::new();
    for emb in &multi.decomposition {
        // host copy on the image of this pattern copy plus fresh vertices
        let mut vmap: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for (role, &hv) in fhat.role_map.iter().enumerate() {
            vmap.insert(hv, emb.role_map[role]);
        }
        for v in 0..fstar_n as Vertex {
            vmap.entry(v).or_insert_with(|| {
                let id = alloc;
                order.push(id);
                alloc += 1;
                id
            });
        }
        graph = grow(graph, alloc as usize);
        for e in dec.fstar.edges() {
            if fhat_edges.contains(e) {
                continue;
            }
            let img: Vec<Vertex> = e.iter().map(|&v| vmap[&v]).collect();
            graph.insert_unsorted(img).map_err(|_| {
                Error::Internal("extension produced a duplicate edge".to_string())
            })?;
        }
        for other in dec.copies.iter().skip(1) {
            let role_map: Vec<Vertex> = other.role_map.iter().map(|&v| vmap[&v]).collect();
            for i in 0..k {
                let hits = role_map
                    .iter()
                    .filter(|&&v| v == roots[i] || v == roots[i + k])
                    .count();
                if hits > 1 {
                    return Err(Error::Internal(
                        "decomposition copy meets a root pair twice".to_string(),
                    ));
                }
            }
            out_copies.push(Embedding { role_map });
        }
    }
    // the construction ordering: multigraph internals first, then the fresh
    // blocks in allocation order
    let mut full_order: Vec<Vertex> = (0..multi.graph.n() as Vertex)
        .filter(|v| !roots.contains(v))
        .collect();
    full_order.extend(order);
    let degeneracy = ordering_degeneracy(&graph, roots, &full_order);
    let bound = binomial((fstar_n - 1) as u64, (f.r() - 1) as u64);
    if degeneracy > bound {
        return Err(Error::Internal(format!(
            "construction ordering has degeneracy {} > bound {}",
            degeneracy, bound
        )));
    }
    // the roots span no edge
    for e in graph.edges() {
        if e.iter().all(|v| roots.contains(v)) {
            return Err(Error::Internal("shifter has an edge inside its roots".to_string()));
        }
    }
    let h = div_vector(f)?.0;
    let b = div_vector(&dec.fstar)?.0;
    let scan = scan_congruences(&graph.to_multi(), roots, k, h[k], &b[..=k]);
    if !scan.ok {
        return Err(Error::Internal(format!(
            "simple shifter failed its own scan: {:?}",
            scan.first_violation
        )));
    }
    Ok(SimpleShifter {
        decomposition: Packing {
            pattern: f.clone(),
            host_n: graph.n(),
            copies: out_copies,
        },
        graph,
        roots: roots.to_vec(),
        k,
        degeneracy,
        degeneracy_bound: bound,
    })
}

fn grow(g: RGraph, n: usize) -> RGraph {
    if g.n() >= n {
        return g;
    }
    let mut out = RGraph::new(g.r(), n);
    for e in g.edges() {
        out.insert(e.clone()).unwrap();
    }
    out
}

/// Maximum backward degree along a fixed ordering of the non-root vertices.
fn ordering_degeneracy(g: &RGraph, roots: &[Vertex], order: &[Vertex]) -> u64 {
    let mut pos: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, &v) in order.iter().enumerate() {
        pos.insert(v, i);
    }
    let mut backward = vec![0u64; order.len()];
    for e in g.edges() {
        // the edge counts at its latest non-root vertex
        let latest = e
            .iter()
            .filter(|v| !roots.contains(v))
            .filter_map(|v| pos.get(v))
            .max();
        if let Some(&p) = latest {
            backward[p] += 1;
        }
    }
    backward.into_iter().max().unwrap_or(0)
}

/// An adapter source whose adapters are indicators of freshly built simple
/// shifters, relabelled onto each requested tuple. The canonical shifter per
/// level is built once and cached.
pub struct ShifterAdapters<'a> {
    pattern: &'a RGraph,
    dec: &'a FstarDecomposition,
    rule: CoefficientRule,
    edge_budget: u64,
    /// Fresh internal vertices are drawn from here, advancing per adapter.
    pub next_fresh: Vertex,
    cache: BTreeMap<usize, SimpleShifter>,
}

impl<'a> ShifterAdapters<'a> {
    pub fn new(
        pattern: &'a RGraph,
        dec: &'a FstarDecomposition,
        rule: CoefficientRule,
        edge_budget: u64,
        next_fresh: Vertex,
    ) -> ShifterAdapters<'a> {
        ShifterAdapters {
            pattern,
            dec,
            rule,
            edge_budget,
            next_fresh,
            cache: BTreeMap::new(),
        }
    }
}

impl crate::divfix::balancer::AdapterSource for ShifterAdapters<'_> {
    fn adapter(
        &mut self,
        x: &crate::divfix::setfn::AdapterTuple,
        _b: &[u64],
        _h_k: u64,
        _r: usize,
    ) -> Result<crate::divfix::setfn::SetFunction> {
        let k = x.k();
        if !self.cache.contains_key(&k) {
            let roots: Vec<Vertex> = (0..2 * k as Vertex).collect();
            let ss = simple_shifter_with(
                self.pattern,
                self.dec,
                k,
                &roots,
                self.edge_budget,
                self.rule,
            )?;
            self.cache.insert(k, ss);
        }
        let ss = &self.cache[&k];
        let base = self.next_fresh;
        let relabel = |v: Vertex| -> Vertex {
            if (v as usize) < 2 * k {
                x.x[v as usize]
            } else {
                base + v - 2 * k as Vertex
            }
        };
        let mut tau = crate::divfix::setfn::SetFunction::new(self.pattern.r(), 0);
        for e in ss.graph.edges() {
            let mut img: Vec<Vertex> = e.iter().map(|&v| relabel(v)).collect();
            img.sort_unstable();
            tau.add_value(&img, 1)?;
        }
        self.next_fresh = base + (ss.graph.n() - 2 * k) as Vertex;
        Ok(tau)
    }
}

/// Residue table of a shifter scan: SH-style congruences at all set sizes up
/// to k.
#[derive(Clone, Debug)]
pub struct CongruenceScan {
    pub ok: bool,
    /// (corner set, observed degree, expected residue mod b_k)
    pub corners: Vec<(Vec<Vertex>, u64, i64)>,
    pub first_violation: Option<String>,
}

/// Exhaustive degree scan: sets of size below k must have degree divisible
/// by the matching entry of `b`; k-sets must be 0 mod b_k except at the 2^k
/// transversal root sets, which carry (-1)^{sum z} h_k.
#[allow(clippy::needless_range_loop)] // the loop variable is the set size
pub fn scan_congruences(
    g: &MultiRGraph,
    roots: &[Vertex],
    k: usize,
    h_k: u64,
    b: &[u64],
) -> CongruenceScan {
    let bk = b[k] as i64;
    let mut corners = Vec::new();
    let mut first_violation = None;
    'outer: for i in 0..=k {
        let bi = b[i] as i64;
        let counts = g.level_counts(i);
        if i == 0 {
            let total = g.len() as i64;
            if total.rem_euclid(bi) != 0 {
                first_violation = Some(format!("edge count {} mod {}", total, bi));
            }
            continue;
        }
        if i < k {
            for (s, c) in counts {
                if (c as i64).rem_euclid(bi) != 0 {
                    first_violation = Some(format!("set {:?} has degree {} mod {}", s, c, bi));
                    break 'outer;
                }
            }
            continue;
        }
        // level k: enumerate expected corners explicitly
        let mut expected: BTreeMap<Vec<Vertex>, i64> = BTreeMap::new();
        for word in 0..(1u32 << k) {
            let mut s: Vec<Vertex> = (0..k)
                .map(|i| if word >> i & 1 == 1 { roots[i + k] } else { roots[i] })
                .collect();
            s.sort_unstable();
            let sign = if word.count_ones() % 2 == 0 { 1 } else { -1 };
            expected.insert(s, sign * h_k as i64);
        }
        for (s, &e) in &expected {
            let c = counts.get(s).copied().unwrap_or(0);
            corners.push((s.clone(), c, e.rem_euclid(bk)));
            if (c as i64 - e).rem_euclid(bk) != 0 {
                first_violation = Some(format!(
                    "corner {:?} has degree {} but wants {} mod {}",
                    s, c, e, bk
                ));
                break 'outer;
            }
        }
        for (s, c) in counts {
            if expected.contains_key(&s) {
                continue;
            }
            if (c as i64).rem_euclid(bk) != 0 {
                first_violation = Some(format!("k-set {:?} has degree {} mod {}", s, c, bk));
                break 'outer;
            }
        }
    }
    CongruenceScan {
        ok: first_violation.is_none(),
        corners,
        first_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divfix::setfn::{adapter_check, indicator, AdapterTuple};
    use crate::hypergraph::fixtures::*;
    use crate::regularise::{regularise, DEFAULT_EDGE_BUDGET};

    fn edge_pattern() -> RGraph {
        RGraph::from_edges(2, 2, vec![vec![0, 1]]).unwrap()
    }

    fn k3_as_edge_host() -> FstarDecomposition {
        FstarDecomposition {
            pattern: edge_pattern(),
            fstar: triangle(),
            copies: vec![
                Embedding { role_map: vec![0, 1] },
                Embedding { role_map: vec![0, 2] },
                Embedding { role_map: vec![1, 2] },
            ],
        }
        .validated()
        .unwrap()
    }

    #[test]
    fn tiny_multishifter_scan() {
        // pattern = single edge, host = K_3: Deg(F) = (1,1), Deg(F*) = (3,2)
        let dec = k3_as_edge_host();
        let ms = multishifter(&edge_pattern(), &dec, 1, &[0, 1]).unwrap();
        assert_eq!(ms.graph.len(), 9);
        let scan = scan_congruences(&ms.graph, &ms.roots, 1, 1, &[3, 2]);
        assert!(scan.ok, "{:?}", scan.first_violation);
        // decomposition covers the multigraph with multiplicity
        let mut cover = MultiRGraph::new(2, ms.graph.n());
        for emb in &ms.decomposition {
            for e in dec.pattern.edges() {
                cover.add(emb.image_edge(e), 1).unwrap();
            }
        }
        assert_eq!(cover, ms.graph);
        // copies meet each root pair at most once
        for emb in &ms.decomposition {
            let verts = emb.image_vertices();
            assert!(verts.iter().filter(|&&v| v == 0 || v == 1).count() <= 1);
        }
    }

    #[test]
    fn tiny_simple_shifter() {
        let dec = k3_as_edge_host();
        let ss = simple_shifter(&edge_pattern(), &dec, 1, &[0, 1], 100_000).unwrap();
        assert_eq!(ss.graph.len(), 18);
        let scan = scan_congruences(&ss.graph.to_multi(), &ss.roots, 1, 1, &[3, 2]);
        assert!(scan.ok, "{:?}", scan.first_violation);
        assert!(verify_packing(&ss.graph, &ss.decomposition).is_decomposition());
        assert_eq!(well_separation(&ss.decomposition), WellSeparation::Kappa(1));
        assert!(ss.degeneracy <= ss.degeneracy_bound);
        // roots span no edge
        assert!(!ss.graph.contains(&[0, 1]));
    }

    #[test]
    fn triangle_multishifter_corner_residues() {
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        let dec = FstarDecomposition::from_regularisation(&reg);
        let ms = multishifter(&triangle(), &dec, 1, &[0, 1]).unwrap();
        let scan = scan_congruences(&ms.graph, &ms.roots, 1, 2, &[126, 12]);
        assert!(scan.ok, "{:?}", scan.first_violation);
        // corner residues are +2 and -2 mod 12
        let mut residues: Vec<i64> = scan.corners.iter().map(|(_, _, e)| *e).collect();
        residues.sort_unstable();
        assert_eq!(residues, vec![2, 10]);
        // coefficient choice: Bezout (1,0,0) shifted into positivity
        let coeffs: Vec<u64> = ms.coefficients.iter().map(|(_, a)| *a).collect();
        assert_eq!(coeffs, vec![1, 12, 12]);
    }

    #[test]
    fn k2_shifter_indicator_is_adapter() {
        // Fact: the indicator of a shifter is an adapter for the matching data
        let dec = k3_as_edge_host();
        let ss = simple_shifter(&edge_pattern(), &dec, 1, &[0, 1], 100_000).unwrap();
        let tau = indicator(&ss.graph);
        let x = AdapterTuple::new(vec![0, 1]).unwrap();
        assert!(adapter_check(&tau, &x, &[3, 2], 1).unwrap());
    }

    #[test]
    fn two_level_shifter_on_three_uniform_cliques() {
        // pattern = single 3-edge, host = K_4^(3): allows k = 2
        let pattern = RGraph::from_edges(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let host = RGraph::complete(3, 4);
        let copies: Vec<Embedding> = host
            .edges()
            .map(|e| Embedding { role_map: e.clone() })
            .collect();
        let dec = FstarDecomposition {
            pattern: pattern.clone(),
            fstar: host,
            copies,
        }
        .validated()
        .unwrap();
        let b = vec![4, 3, 2];
        let ms = multishifter(&pattern, &dec, 2, &[0, 1, 2, 3]).unwrap();
        let scan = scan_congruences(&ms.graph, &ms.roots, 2, 1, &b);
        assert!(scan.ok, "{:?}", scan.first_violation);

        let ss = simple_shifter(&pattern, &dec, 2, &[0, 1, 2, 3], 100_000).unwrap();
        let scan = scan_congruences(&ss.graph.to_multi(), &ss.roots, 2, 1, &b);
        assert!(scan.ok, "{:?}", scan.first_violation);
        assert!(verify_packing(&ss.graph, &ss.decomposition).is_decomposition());
        assert_eq!(well_separation(&ss.decomposition), WellSeparation::Kappa(1));
        let tau = indicator(&ss.graph);
        let x = AdapterTuple::new(vec![0, 1, 2, 3]).unwrap();
        assert!(adapter_check(&tau, &x, &b, 1).unwrap());
    }

    #[test]
    fn triangle_multishifter_decomposition_covers_exactly() {
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        let dec = FstarDecomposition::from_regularisation(&reg);
        let ms = multishifter(&triangle(), &dec, 1, &[0, 1]).unwrap();
        let mut cover = MultiRGraph::new(2, ms.graph.n());
        for emb in &ms.decomposition {
            for e in dec.pattern.edges() {
                cover.add(emb.image_edge(e), 1).unwrap();
            }
        }
        assert_eq!(cover, ms.graph);
        // every copy meets the root pair at most once
        for emb in &ms.decomposition {
            let hits = emb.role_map.iter().filter(|&&v| v <= 1).count();
            assert!(hits <= 1);
        }
    }

    #[test]
    fn multishifter_indicator_is_adapter() {
        // the multiplicity function of every generated shifter passes the
        // adapter predicate for (Deg(F*) prefix; Deg(F)_k)
        use crate::divfix::setfn::indicator_multi;
        let dec = k3_as_edge_host();
        let ms = multishifter(&edge_pattern(), &dec, 1, &[0, 1]).unwrap();
        let tau = indicator_multi(&ms.graph);
        let x = AdapterTuple::new(vec![0, 1]).unwrap();
        assert!(adapter_check(&tau, &x, &[3, 2], 1).unwrap());

        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        let dec = FstarDecomposition::from_regularisation(&reg);
        let ms = multishifter(&triangle(), &dec, 1, &[0, 1]).unwrap();
        let tau = indicator_multi(&ms.graph);
        assert!(adapter_check(&tau, &x, &[126, 12], 2).unwrap());
    }

    #[test]
    fn shifter_adapter_source_balances() {
        // balance with shifter indicators and with synthetic adapters: same
        // selection, both fully divisible
        use crate::divfix::balancer::{balance, balancer, SyntheticAdapters};
        use crate::divfix::setfn::indicator;
        use crate::hypergraph::fixtures::random_rgraph;
        let dec = k3_as_edge_host();
        let g = random_rgraph(2, 6, 0.5, 3);
        let phi = indicator(&g);
        let u: Vec<Vertex> = (0..6).collect();
        let bal = balancer(2, 1, &[3, 2], &u).unwrap();
        let mut synth = SyntheticAdapters { aux_base: 400 };
        let pattern = edge_pattern();
        let mut shifters = ShifterAdapters::new(
            &pattern,
            &dec,
            CoefficientRule::MinimalNonNegative,
            100_000,
            500,
        );
        let phi3 = {
            // scale to (3, h_1 = 1)-divisible: triple every value
            let mut out = crate::divfix::setfn::SetFunction::new(2, 6);
            for (e, v) in phi.entries() {
                out.add_value(e, 3 * v).unwrap();
            }
            out
        };
        let a = balance(&phi3, &bal, 1, &mut synth).unwrap();
        let b = balance(&phi3, &bal, 1, &mut shifters).unwrap();
        assert_eq!(a.selection.chosen, b.selection.chosen);
        assert!(a.balanced.is_divisible(&[3, 2]));
        assert!(b.balanced.is_divisible(&[3, 2]));
    }

    #[test]
    fn word_count_identity() {
        // |W_e(k)| = |W_o(k)| = 2^{k-1}
        for k in 1..=6u32 {
            let even = (0..(1u32 << k)).filter(|w| w.count_ones() % 2 == 0).count();
            let odd = (0..(1u32 << k)).filter(|w| w.count_ones() % 2 == 1).count();
            assert_eq!(even, 1 << (k - 1));
            assert_eq!(odd, 1 << (k - 1));
        }
    }

    #[test]
    fn budget_and_precondition_errors() {
        let dec = k3_as_edge_host();
        assert!(matches!(
            simple_shifter(&edge_pattern(), &dec, 1, &[0, 1], 3),
            Err(Error::ResourceBudget(_))
        ));
        assert!(multishifter(&edge_pattern(), &dec, 2, &[0, 1, 2, 3]).is_err());
        assert!(multishifter(&edge_pattern(), &dec, 1, &[0, 0]).is_err());
    }
}
