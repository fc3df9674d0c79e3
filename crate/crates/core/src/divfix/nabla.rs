//! The edge-extension operator: extend every edge of a multigraph into a
//! copy of the pattern rooted at a distinguished edge, on fresh vertices.
//! Also the symmetric-extender predicate, canonical multigraphs, and the
//! identification verifier that certifies the collapse onto them.

use std::collections::BTreeMap;

use crate::combinat::{binomial, combinations};
use crate::error::{invalid, Result};
use crate::hypergraph::{MultiRGraph, RGraph, Vertex};
use crate::packing::Embedding;

/// Per-edge-instance orientation: maps (sorted edge, instance index) to the
/// order in which the edge's vertices play the roles of the sorted
/// distinguished edge. Missing entries default to the identity order.
pub type Orientation = BTreeMap<(Vec<Vertex>, u64), Vec<Vertex>>;

/// Ledger entry recording where a fresh vertex came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshVertex {
    pub vertex: Vertex,
    pub edge: Vec<Vertex>,
    pub instance: u64,
    /// The pattern vertex whose role this fresh vertex plays.
    pub role: Vertex,
}

#[derive(Clone, Debug)]
pub struct NablaOutput {
    /// The union of all extension copies; base edges keep their multiplicity.
    pub tilde: MultiRGraph,
    /// tilde minus the base graph: always simple.
    pub core: RGraph,
    /// Pattern copies decomposing tilde, one per edge instance.
    pub decomposition: Vec<Embedding>,
    pub ledger: Vec<FreshVertex>,
    pub n_total: usize,
}

/// Extend every edge instance of `h` into a copy of `f` with `e0` as the
/// rooted edge. Fresh vertices are keyed by (edge instance, role) and
/// allocated densely above the host vertices.
pub fn nabla(
    h: &MultiRGraph,
    f: &RGraph,
    e0: &[Vertex],
    psi: Option<&Orientation>,
) -> Result<NablaOutput> {
    if h.r() != f.r() {
        return invalid("uniformity mismatch".to_string());
    }
    if !f.contains(e0) {
        return invalid(format!("{:?} is not an edge of the pattern", e0));
    }
    let r = f.r();
    let fresh_roles: Vec<Vertex> = (0..f.n() as Vertex).filter(|v| !e0.contains(v)).collect();
    let mut tilde = MultiRGraph::new(r, h.n());
    let mut core = RGraph::new(r, h.n());
    let mut decomposition = Vec::new();
    let mut ledger = Vec::new();
    let mut next_fresh = h.n() as Vertex;
    for (e, mult) in h.edge_multiplicities() {
        for instance in 0..mult {
            let order: Vec<Vertex> = match psi.and_then(|m| m.get(&(e.clone(), instance))) {
                Some(o) => {
                    let mut s = o.clone();
                    s.sort_unstable();
                    if s != *e {
                        return invalid(format!(
                            "orientation {:?} is not an ordering of edge {:?}",
                            o, e
                        ));
                    }
                    o.clone()
                }
                None => e.clone(),
            };
            // role map: e0[j] is played by order[j], the rest by fresh vertices
            let mut role_map = vec![0 as Vertex; f.n()];
            for (j, &v) in e0.iter().enumerate() {
                role_map[v as usize] = order[j];
            }
            for &v in &fresh_roles {
                role_map[v as usize] = next_fresh;
                ledger.push(FreshVertex {
                    vertex: next_fresh,
                    edge: e.clone(),
                    instance,
                    role: v,
                });
                next_fresh += 1;
            }
            let emb = Embedding { role_map };
            tilde.grow_n(next_fresh as usize);
            core = grow_graph(core, next_fresh as usize);
            for fe in f.edges() {
                let img = emb.image_edge(fe);
                tilde.add(img.clone(), 1)?;
                if img != *e {
                    core.insert(img)?;
                }
            }
            decomposition.push(emb);
        }
    }
    tilde.grow_n(next_fresh as usize);
    Ok(NablaOutput {
        tilde,
        core,
        decomposition,
        ledger,
        n_total: next_fresh as usize,
    })
}

fn grow_graph(g: RGraph, n: usize) -> RGraph {
    if g.n() >= n {
        return g;
    }
    let mut out = RGraph::new(g.r(), n);
    for e in g.edges() {
        out.insert(e.clone()).unwrap();
    }
    out
}

/// Does every r-subset of the vertex set meeting `estar` lie in the graph?
pub fn symmetric_extender_check(fstar: &RGraph, estar: &[Vertex]) -> Result<bool> {
    if !fstar.contains(estar) {
        return invalid(format!("{:?} is not an edge", estar));
    }
    let r = fstar.r();
    let n = fstar.n();
    for c in combinations(n, r) {
        let e: Vec<Vertex> = c.into_iter().map(|v| v as Vertex).collect();
        if e.iter().any(|v| estar.contains(v)) && !fstar.contains(&e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is (k, m) admissible: m/(r-i) * binom(k-i, r-1-i) integral for all i?
pub fn admissible_km(r: usize, k: u64, m: u64) -> bool {
    (0..r as u64).all(|i| (m * binomial(k - i, (r as u64 - 1) - i)).is_multiple_of(r as u64 - i))
}

/// The canonical multigraph on [k] plus V(F*) minus e*: multiplicities
/// depend only on how an r-set splits between the colour part [k] and the
/// pattern remainder. Requires (k, m) admissible and (F*, e*) a symmetric
/// r-extender.
pub fn canonical_multigraph(
    fstar: &RGraph,
    estar: &[Vertex],
    k: u64,
    m: u64,
) -> Result<MultiRGraph> {
    let r = fstar.r();
    if !admissible_km(r, k, m) {
        return invalid(format!("(k, m) = ({}, {}) is not admissible for r = {}", k, m, r));
    }
    if !symmetric_extender_check(fstar, estar)? {
        return invalid("pattern is not a symmetric extender at the given edge".to_string());
    }
    // vertex layout: colours 0..k-1, then V(F*) \ e* in ascending order
    let vprime: Vec<Vertex> = (0..fstar.n() as Vertex).filter(|v| !estar.contains(v)).collect();
    let n_total = k as usize + vprime.len();
    let mut out = MultiRGraph::new(r, n_total);
    for c in combinations(n_total, r) {
        let e: Vec<Vertex> = c.into_iter().map(|v| v as Vertex).collect();
        let in_k = e.iter().filter(|&&v| (v as u64) < k).count();
        let in_v = r - in_k;
        let mult = if in_v == 0 {
            0
        } else if in_k > 0 {
            m * binomial(k - in_k as u64, (r - 1 - in_k) as u64) / (r - in_k) as u64
        } else {
            // entirely inside V': an edge of F* (under the relabelling) or nothing
            let orig: Vec<Vertex> = e
                .iter()
                .map(|&v| vprime[(v as u64 - k) as usize])
                .collect();
            if fstar.contains(&orig) {
                m * binomial(k, (r - 1) as u64) / r as u64
            } else {
                0
            }
        };
        if mult > 0 {
            out.add(e, mult)?;
        }
    }
    Ok(out)
}

/// Verdict of the identification verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentificationVerdict {
    Pass,
    I1Violation { class: Vertex, edge: Vec<Vertex> },
    I2Violation { target: Vec<Vertex>, got: u64, expected: u64 },
    Malformed(String),
}

impl IdentificationVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentificationVerdict::Pass)
    }
}

/// Check H collapses onto Hp under the class map: every class meets every
/// edge at most once, and pushing each edge forward reproduces Hp's
/// multiplicities exactly.
pub fn verify_identification(
    h: &MultiRGraph,
    hp: &MultiRGraph,
    class_of: &[Vertex],
) -> IdentificationVerdict {
    if class_of.len() != h.n() {
        return IdentificationVerdict::Malformed(format!(
            "class map covers {} vertices, host has {}",
            class_of.len(),
            h.n()
        ));
    }
    if h.r() != hp.r() {
        return IdentificationVerdict::Malformed("uniformity mismatch".to_string());
    }
    if let Some(&c) = class_of.iter().find(|&&c| (c as usize) >= hp.n()) {
        return IdentificationVerdict::Malformed(format!("class {} outside the target", c));
    }
    let mut pushed: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
    for (e, mult) in h.edge_multiplicities() {
        let mut img: Vec<Vertex> = e.iter().map(|&v| class_of[v as usize]).collect();
        img.sort_unstable();
        if img.windows(2).any(|w| w[0] == w[1]) {
            let dup = img
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| w[0])
                .unwrap();
            return IdentificationVerdict::I1Violation {
                class: dup,
                edge: e.clone(),
            };
        }
        *pushed.entry(img).or_insert(0) += mult;
    }
    // compare multiplicity maps in both directions
    for (e, &got) in &pushed {
        let expected = hp.multiplicity(e);
        if got != expected {
            return IdentificationVerdict::I2Violation {
                target: e.clone(),
                got,
                expected,
            };
        }
    }
    for (e, expected) in hp.edge_multiplicities() {
        let got = pushed.get(e).copied().unwrap_or(0);
        if got != expected {
            return IdentificationVerdict::I2Violation {
                target: e.clone(),
                got,
                expected,
            };
        }
    }
    IdentificationVerdict::Pass
}
