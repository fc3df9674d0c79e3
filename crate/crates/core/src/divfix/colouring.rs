//! Strong m-regular colourings: the verifier for any uniformity, and the
//! constructive route for 2-graphs, where the shadow is a 1-graph and the
//! required multigraph decomposition reduces to a rainbow partition.

use std::collections::BTreeMap;

use crate::combinat::{binomial, combinations};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{is_divisible_simple, is_weakly_regular, RGraph, Vertex};

#[derive(Clone, Debug)]
pub struct ColouringReport {
    pub strong: bool,
    /// Witness edge with a repeated colour, when not strong.
    pub repeat_witness: Option<Vec<Vertex>>,
    /// The common count m when the colouring is m-regular.
    pub regular_m: Option<u64>,
    /// Counts of edges whose colour set contains each (r-1)-subset of [k].
    pub counts: BTreeMap<Vec<u32>, u64>,
    /// Whether the small-set counting identity |c^(C')| =
    /// m/(r-i) binom(k-i, r-1-i) holds at every level below r-1.
    pub small_set_identity: bool,
}

/// Check strongness and m-regularity of a [k]-colouring (colours 0..k-1).
#[allow(clippy::needless_range_loop)] // the loop variable is the set size
pub fn verify_strong_colouring(h: &RGraph, colours: &[u32], k: u64) -> Result<ColouringReport> {
    if colours.len() != h.n() {
        return invalid(format!(
            "colouring covers {} vertices, graph has {}",
            colours.len(),
            h.n()
        ));
    }
    if let Some(&c) = colours.iter().find(|&&c| c as u64 >= k) {
        return invalid(format!("colour {} outside 0..{}", c, k));
    }
    let r = h.r();
    let mut repeat_witness = None;
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut level_counts: Vec<BTreeMap<Vec<u32>, u64>> = vec![BTreeMap::new(); r];
    for e in h.edges() {
        let mut cs: Vec<u32> = e.iter().map(|&v| colours[v as usize]).collect();
        cs.sort_unstable();
        if cs.windows(2).any(|w| w[0] == w[1]) {
            repeat_witness = Some(e.clone());
            continue;
        }
        for idx in combinations(cs.len(), r - 1) {
            let sub: Vec<u32> = idx.into_iter().map(|i| cs[i]).collect();
            *counts.entry(sub).or_insert(0) += 1;
        }
        for i in 0..r {
            for idx in combinations(cs.len(), i) {
                let sub: Vec<u32> = idx.into_iter().map(|j| cs[j]).collect();
                *level_counts[i].entry(sub).or_insert(0) += 1;
            }
        }
    }
    if repeat_witness.is_some() {
        return Ok(ColouringReport {
            strong: false,
            repeat_witness,
            regular_m: None,
            counts,
            small_set_identity: false,
        });
    }
    // m-regularity over every (r-1)-subset of the palette, including absent ones
    let mut regular_m = None;
    let mut regular = true;
    for c in combinations(k as usize, r - 1) {
        let set: Vec<u32> = c.into_iter().map(|x| x as u32).collect();
        let count = counts.get(&set).copied().unwrap_or(0);
        match regular_m {
            None => regular_m = Some(count),
            Some(m) if m != count => {
                regular = false;
                break;
            }
            _ => {}
        }
    }
    let regular_m = if regular { regular_m } else { None };
    // cross-check the counting identity on every smaller colour set
    let small_set_identity = match regular_m {
        Some(m) => (0..r).all(|i| {
            combinations(k as usize, i).all(|c| {
                let set: Vec<u32> = c.into_iter().map(|x| x as u32).collect();
                let got = level_counts[i].get(&set).copied().unwrap_or(0);
                let num = m * binomial(k - i as u64, (r - 1 - i) as u64);
                num.is_multiple_of((r - i) as u64) && got == num / (r - i) as u64
            })
        }),
        None => false,
    };
    Ok(ColouringReport {
        strong: true,
        repeat_witness: None,
        regular_m,
        counts,
        small_set_identity,
    })
}

#[derive(Clone, Debug)]
pub struct StrongColouring {
    /// Number of extra vertex-disjoint pattern copies appended.
    pub t: u64,
    pub k: u64,
    pub m: u64,
    /// H plus t disjoint copies of the pattern, vertices of H first.
    pub combined: RGraph,
    pub colours: Vec<u32>,
}

/// For a weakly regular 2-graph pattern and a pattern-divisible 2-graph H,
/// produce t and a strong m-regular [k]-colouring of H plus t disjoint
/// pattern copies. Verified before returning.
pub fn find_strong_colouring_r2(h: &RGraph, f: &RGraph) -> Result<StrongColouring> {
    if h.r() != 2 || f.r() != 2 {
        return Err(Error::Unsupported(
            "constructive colouring is implemented for 2-graphs only".to_string(),
        ));
    }
    let w = is_weakly_regular(f)?;
    if !w.regular {
        return invalid("pattern must be weakly regular".to_string());
    }
    let s = w.s.unwrap();
    let (s0, s1) = (s[0], s[1]);
    if !is_divisible_simple(h, f, 1)?.is_divisible() {
        return invalid("host is not pattern-divisible".to_string());
    }
    // the shadow of a 2-graph is its support; weak regularity forces
    // |support| = 2 s0 / s1
    let support: Vec<Vertex> = f.support();
    let w_size = support.len() as u64;
    debug_assert_eq!(w_size, 2 * s0 / s1);

    let hn = h.n() as u64;
    let m_prime = hn + 1;
    let m = s1 * m_prime;
    // multiplicity of colour j in the residual multiset: m' - deg_H(j)/s1
    let mut demand: Vec<u64> = (0..hn).map(|v| h.degree_of(&[v as Vertex]) / s1).collect();
    let demand_total: u64 = demand.iter().sum();
    // k: a multiple of w_size, at least max(h, w), large enough that the
    // rainbow partition below is feasible
    let mut k = w_size * hn.max(w_size).div_ceil(w_size);
    while (k - w_size) * m_prime < demand_total {
        k += w_size;
    }
    demand.resize(k as usize, 0);
    let mut budget: Vec<u64> = demand.iter().map(|&d| m_prime - d).collect();
    let total: u64 = budget.iter().sum();
    debug_assert_eq!(total % w_size, 0);
    let t = total / w_size;

    // rainbow partition: t blocks of w_size distinct colours, greedy top-w
    let mut blocks: Vec<Vec<u32>> = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let mut order: Vec<usize> = (0..k as usize).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(budget[j]), j));
        let chosen: Vec<usize> = order[..w_size as usize].to_vec();
        if budget[chosen[w_size as usize - 1]] == 0 {
            return Err(Error::Internal("rainbow partition ran dry".to_string()));
        }
        let mut block: Vec<u32> = chosen.iter().map(|&j| j as u32).collect();
        block.sort_unstable();
        for j in chosen {
            budget[j] -= 1;
        }
        blocks.push(block);
    }
    debug_assert!(budget.iter().all(|&b| b == 0));

    // assemble H + t * F and the colouring
    let f_n = f.n();
    let mut combined = RGraph::new(2, h.n() + t as usize * f_n);
    for e in h.edges() {
        combined.insert(e.clone()).unwrap();
    }
    let mut colours: Vec<u32> = (0..h.n() as u32).collect();
    for (j, block) in blocks.iter().enumerate() {
        let base = (h.n() + j * f_n) as Vertex;
        for e in f.edges() {
            combined
                .insert(e.iter().map(|&v| v + base).collect())
                .unwrap();
        }
        // support vertices take the block's colours in order; isolated
        // pattern vertices are in no edge, any colour works
        let mut copy_colours = vec![0u32; f_n];
        for (idx, &v) in support.iter().enumerate() {
            copy_colours[v as usize] = block[idx];
        }
        colours.extend_from_slice(&copy_colours);
    }

    let report = verify_strong_colouring(&combined, &colours, k)?;
    if !report.strong || report.regular_m != Some(m) {
        return Err(Error::Internal(format!(
            "constructed colouring failed verification: strong = {}, m = {:?}, wanted {}",
            report.strong, report.regular_m, m
        )));
    }
    Ok(StrongColouring {
        t,
        k,
        m,
        combined,
        colours,
    })
}
