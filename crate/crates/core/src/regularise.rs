//! Pack an arbitrary r-graph F perfectly into a weakly regular host F*.
//!
//! F* lives on the complete f-partite host over GF(q) for the smallest prime
//! power q in [f!, 2f!]. The resolvable clique decomposition supplies q
//! parallel classes; class i places a copy of F on each of its cliques with
//! roles permuted by the i-th permutation of the classes, and the union of
//! all copies is weakly regular with an explicitly certified vector.

use crate::combinat::{binomial, factorial, permutations, prime_power};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{is_weakly_regular, RGraph, Vertex};
use crate::packing::{verify_packing, well_separation, Embedding, Packing, WellSeparation};
use crate::partite::resolvable_decomposition;

/// The constructed host together with its certificate data.
#[derive(Clone, Debug)]
pub struct Regularisation {
    pub input: RGraph,
    pub q: u64,
    pub fstar: RGraph,
    pub decomposition: Packing,
    /// Certified weak-regularity vector of fstar.
    pub s: Vec<u64>,
    /// The f! class permutations, in lexicographic order.
    pub permutation_table: Vec<Vec<usize>>,
}

/// Closed-form weak-regularity vector of the construction:
/// s_{r-1} = |F| r! (f-r+1)! and s_i = s_{r-1} c_i / (r-i) with
/// c_i = binom(f-i, r-1-i) q^{r-1-i}.
pub fn predicted_s(f_edges: u64, f: usize, r: usize, q: u64) -> Vec<u64> {
    let top = f_edges * factorial(r as u64) * factorial((f - r + 1) as u64);
    (0..r)
        .map(|i| {
            if i == r - 1 {
                top
            } else {
                let c_i = binomial((f - i) as u64, (r - 1 - i) as u64) * q.pow((r - 1 - i) as u32);
                let num = (top as u128) * (c_i as u128);
                let den = (r - i) as u128;
                debug_assert_eq!(num % den, 0);
                (num / den) as u64
            }
        })
        .collect()
}

/// Smallest prime power q with f! <= q <= 2 f!.
pub fn choose_field_order(f: usize) -> Result<u64> {
    let lo = factorial(f as u64);
    let hi = 2 * lo;
    (lo..=hi)
        .find(|&q| prime_power(q).is_some())
        .ok_or_else(|| Error::Internal(format!("no prime power in [{}, {}]", lo, hi)))
}

/// Construct F* and its 1-well-separated F-decomposition. `edge_budget`
/// caps the size of F*; the error reports the exact edge count when the
/// construction would exceed it.
pub fn regularise(f_graph: &RGraph, edge_budget: u64) -> Result<Regularisation> {
    let r = f_graph.r();
    let f = f_graph.n();
    if r < 2 || r >= f {
        return invalid(format!("need 2 <= r < f, got r = {}, f = {}", r, f));
    }
    if f_graph.is_empty() {
        return invalid("pattern has no edges".to_string());
    }
    let q = choose_field_order(f)?;
    let s = predicted_s(f_graph.len() as u64, f, r, q);
    let s0_exact: u128 = {
        let top = (f_graph.len() as u128)
            * factorial(r as u64) as u128
            * factorial((f - r + 1) as u64) as u128;
        let c0 = binomial(f as u64, (r - 1) as u64) as u128 * (q as u128).pow((r - 1) as u32);
        top * c0 / r as u128
    };
    if s0_exact > edge_budget as u128 {
        return Err(Error::ResourceBudget(format!(
            "regularised host would have {} edges (budget {})",
            s0_exact, edge_budget
        )));
    }

    let resolvable = resolvable_decomposition(q, f, r)?;
    let perms = permutations(f);
    let n_star = resolvable.host.vertex_count();
    let mut fstar = RGraph::new(r, n_star);
    let mut copies = Vec::new();
    for (i, perm) in perms.iter().enumerate() {
        for clique in &resolvable.classes[i] {
            // clique is sorted by class, so clique[c] is its vertex in class c
            let role_map: Vec<Vertex> = (0..f).map(|j| clique[perm[j]]).collect();
            let emb = Embedding { role_map };
            for e in f_graph.edges() {
                fstar.insert(emb.image_edge(e))?;
            }
            copies.push(emb);
        }
    }
    let decomposition = Packing {
        pattern: f_graph.clone(),
        host_n: n_star,
        copies,
    };

    // certify before returning
    let w = is_weakly_regular(&fstar)?;
    if !w.regular || w.s.as_deref() != Some(&s) {
        return Err(Error::Internal(format!(
            "regularised host failed its weak-regularity certificate: got {:?}, predicted {:?}",
            w.s, s
        )));
    }
    match verify_packing(&fstar, &decomposition) {
        p if p.is_decomposition() => {}
        v => return Err(Error::Internal(format!("decomposition check failed: {:?}", v))),
    }
    match well_separation(&decomposition) {
        WellSeparation::Kappa(1) => {}
        other => {
            return Err(Error::Internal(format!(
                "decomposition is not 1-well separated: {:?}",
                other
            )))
        }
    }
    Ok(Regularisation {
        input: f_graph.clone(),
        q,
        fstar,
        decomposition,
        s,
        permutation_table: perms,
    })
}

pub const DEFAULT_EDGE_BUDGET: u64 = 10_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{combinations, subsets_of};
    use crate::hypergraph::fixtures::*;
    use crate::hypergraph::is_divisible_simple;
    use crate::partite::PartiteHost;

    #[test]
    fn triangle_regularisation() {
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!(reg.q, 7);
        assert_eq!(reg.fstar.n(), 21);
        assert_eq!(reg.s, vec![126, 12]);
        assert_eq!(reg.fstar.len(), 126);
        assert_eq!(reg.decomposition.copies.len(), 42);
        // pairwise vertex intersections below r
        for (i, a) in reg.decomposition.copies.iter().enumerate() {
            for b in reg.decomposition.copies.iter().skip(i + 1) {
                let av = a.image_vertices();
                let shared = b.image_vertices().iter().filter(|v| av.contains(v)).count();
                assert!(shared < 2);
            }
        }
    }

    #[test]
    fn path3_regularisation_s_vector() {
        let reg = regularise(&path3(), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!(reg.q, 7);
        assert_eq!(reg.s, vec![84, 8]);
        assert_eq!(reg.fstar.len(), 84);
    }

    #[test]
    fn rejects_r_not_less_than_f() {
        // a single 3-edge on 3 vertices has r = f
        let e = RGraph::from_edges(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(regularise(&e, DEFAULT_EDGE_BUDGET).is_err());
    }

    #[test]
    fn budget_reports_exact_size() {
        match regularise(&triangle(), 10) {
            Err(Error::ResourceBudget(msg)) => assert!(msg.contains("126")),
            other => panic!("expected budget error, got {:?}", other),
        }
    }

    #[test]
    fn non_crossing_links_vanish() {
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        let host = PartiteHost { q: reg.q, f: reg.input.n() };
        // sample all 1-sets and all 2-sets: non-crossing sets have link 0
        for i in 1..reg.input.r() {
            for s in combinations(reg.fstar.n(), i) {
                let s: Vec<Vertex> = s.into_iter().map(|v| v as Vertex).collect();
                if !host.is_crossing(&s) {
                    assert_eq!(reg.fstar.degree_of(&s), 0, "non-crossing {:?}", s);
                }
            }
        }
    }

    #[test]
    fn fstar_is_input_divisible() {
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        assert!(is_divisible_simple(&reg.fstar, &reg.input, 1)
            .unwrap()
            .is_divisible());
    }

    #[test]
    fn the_designated_copy_spans_no_extra_edges() {
        // F*[V(copy)] = copy for every copy of the decomposition; the shifter
        // construction leans on this
        let reg = regularise(&triangle(), DEFAULT_EDGE_BUDGET).unwrap();
        for emb in reg.decomposition.copies.iter().take(8) {
            let verts = emb.image_vertices();
            let inside: Vec<_> = subsets_of(&verts, 2)
                .into_iter()
                .filter(|e| reg.fstar.contains(e))
                .collect();
            assert_eq!(inside.len(), reg.input.len());
        }
    }
}
