//! Balancers: multisets of root tuples sufficient to repair all k-set
//! divisibility defects of any admissible function, by placing one adapter
//! per selected tuple. The construction is recursive over k; the selection
//! walks the same recursion and depends only on residues of the input, so
//! the selected multiset is identical for every valid adapter source.

use std::collections::BTreeMap;

use crate::combinat::binomial;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Vertex;

use super::setfn::{adapter_check, adapter_residue, synthetic_adapter, AdapterTuple, SetFunction};

#[derive(Clone, Debug)]
pub struct Balancer {
    pub r: usize,
    pub k: usize,
    /// b_0..b_k.
    pub b: Vec<u64>,
    pub u_order: Vec<Vertex>,
    node: Node,
    /// Flattened multiset: distinct tuples with their multiplicities.
    flat: Vec<(Vec<Vertex>, u64)>,
    pub max_tuple_degree: u64,
    pub degree_bound: u64,
}

#[derive(Clone, Debug)]
enum Node {
    /// k = 1: b_k - 1 copies of every consecutive pair of u_order.
    Base,
    /// k >= 2: one block per pin position, from 2k up to n.
    Levels(Vec<Level>),
}

#[derive(Clone, Debug)]
struct Level {
    /// Number of vertices in scope; the pin is u_order[ell-1].
    ell: usize,
    sub: Box<Balancer>,
    /// Insert vertex per distinct sub-tuple, aligned with sub.flat.
    inserts: Vec<Vertex>,
}

/// Construct a (b_0..b_k)-balancer with uniformity r acting on the given
/// vertex order. Requires binom(r-s, k-s) b_s = 0 mod b_k for s in [k]_0
/// and at least 2k vertices.
pub fn balancer(r: usize, k: usize, b: &[u64], u_order: &[Vertex]) -> Result<Balancer> {
    if k < 1 || k >= r {
        return invalid(format!("need 1 <= k < r, got k = {}, r = {}", k, r));
    }
    if b.len() != k + 1 {
        return invalid(format!("need k+1 = {} moduli, got {}", k + 1, b.len()));
    }
    if b.contains(&0) {
        return invalid("moduli must be positive".to_string());
    }
    for s in 0..=k {
        let factor = binomial((r - s) as u64, (k - s) as u64);
        if !(factor * b[s]).is_multiple_of(b[k]) {
            return invalid(format!(
                "hypothesis fails at s = {}: binom({},{}) * {} is not 0 mod {}",
                s,
                r - s,
                k - s,
                b[s],
                b[k]
            ));
        }
    }
    {
        let mut s = u_order.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return invalid("vertex order has repeats".to_string());
        }
    }
    if u_order.len() < 2 * k {
        return invalid(format!("need at least 2k = {} vertices", 2 * k));
    }
    build(r, k, b, u_order)
}

fn build(r: usize, k: usize, b: &[u64], u_order: &[Vertex]) -> Result<Balancer> {
    let n = u_order.len();
    let bk = b[k];
    let node = if k == 1 {
        Node::Base
    } else {
        let mut levels = Vec::new();
        for ell in 2 * k..=n {
            let sub = build(r - 1, k - 1, &b[1..], &u_order[..ell - 1])?;
            // insert position for each distinct sub-tuple: the smallest
            // position in {ell-2k+1, ..., ell-1} not used by the tuple
            let pos_of: BTreeMap<Vertex, usize> = u_order
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, i + 1))
                .collect();
            let mut inserts = Vec::with_capacity(sub.flat.len());
            for (tuple, _) in &sub.flat {
                let used: Vec<usize> = tuple.iter().map(|v| pos_of[v]).collect();
                let insert_pos = (ell + 1 - 2 * k..ell)
                    .find(|p| !used.contains(p))
                    .ok_or_else(|| Error::Internal("no insert position free".to_string()))?;
                inserts.push(u_order[insert_pos - 1]);
            }
            levels.push(Level {
                ell,
                sub: Box::new(sub),
                inserts,
            });
        }
        Node::Levels(levels)
    };
    let flat = flatten(k, b, u_order, &node);
    let max_tuple_degree = tuple_degree_max(k, &flat);
    let bound = (1u64 << k) * {
        let kf: u64 = (1..=k as u64).product();
        kf * kf
    } * bk;
    if max_tuple_degree > bound {
        return Err(Error::Internal(format!(
            "tuple degree {} exceeds the bound {}",
            max_tuple_degree, bound
        )));
    }
    Ok(Balancer {
        r,
        k,
        b: b.to_vec(),
        u_order: u_order.to_vec(),
        node,
        flat,
        max_tuple_degree,
        degree_bound: bound,
    })
}

fn flatten(k: usize, b: &[u64], u_order: &[Vertex], node: &Node) -> Vec<(Vec<Vertex>, u64)> {
    match node {
        Node::Base => u_order
            .windows(2)
            .map(|w| (vec![w[0], w[1]], b[k] - 1))
            .collect(),
        Node::Levels(levels) => {
            let mut out = Vec::new();
            for level in levels {
                let pin = u_order[level.ell - 1];
                for ((tuple, count), &insert) in level.sub.flat.iter().zip(&level.inserts) {
                    out.push((extend_tuple(tuple, pin, insert), *count));
                }
            }
            out
        }
    }
}

/// (pin, old zeros, insert, old ones): the pin becomes x_1^0 and the insert
/// becomes x_1^1 of the extended tuple.
fn extend_tuple(tuple: &[Vertex], pin: Vertex, insert: Vertex) -> Vec<Vertex> {
    let k1 = tuple.len() / 2;
    let mut out = Vec::with_capacity(tuple.len() + 2);
    out.push(pin);
    out.extend_from_slice(&tuple[..k1]);
    out.push(insert);
    out.extend_from_slice(&tuple[k1..]);
    out
}

/// Max over k-sets S of the number of tuples (with multiplicity) meeting
/// every pair in exactly one vertex of S.
fn tuple_degree_max(k: usize, flat: &[(Vec<Vertex>, u64)]) -> u64 {
    let mut acc: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
    for (tuple, count) in flat {
        for word in 0..(1u32 << k) {
            let mut s: Vec<Vertex> = (0..k)
                .map(|i| {
                    if word >> i & 1 == 1 {
                        tuple[i + k]
                    } else {
                        tuple[i]
                    }
                })
                .collect();
            s.sort_unstable();
            *acc.entry(s).or_insert(0) += count;
        }
    }
    acc.values().copied().max().unwrap_or(0)
}

impl Balancer {
    pub fn tuples(&self) -> &[(Vec<Vertex>, u64)] {
        &self.flat
    }

    pub fn tuple_count(&self) -> u64 {
        self.flat.iter().map(|(_, c)| c).sum()
    }
}

/// A provider of concrete adapters for selected tuples.
pub trait AdapterSource {
    /// Produce an x-adapter with respect to (b; h_k). The result is checked
    /// against the adapter predicate by the balance driver.
    fn adapter(&mut self, x: &AdapterTuple, b: &[u64], h_k: u64, r: usize) -> Result<SetFunction>;
}

/// Synthetic adapters padded with auxiliary vertices outside both the
/// acting set and the function's support.
pub struct SyntheticAdapters {
    pub aux_base: Vertex,
}

impl AdapterSource for SyntheticAdapters {
    fn adapter(&mut self, x: &AdapterTuple, _b: &[u64], h_k: u64, r: usize) -> Result<SetFunction> {
        let k = x.k();
        let aux: Vec<Vertex> = (0..(r - k) as u32).map(|i| self.aux_base + i).collect();
        if aux.iter().any(|v| x.x.contains(v)) {
            return invalid("auxiliary base collides with a tuple".to_string());
        }
        synthetic_adapter(r, x, h_k, &aux)
    }
}

/// Outcome of confinement: the selected multiset, with residual defects
/// guaranteed to live inside the first 2k-1 vertices of the acting order.
#[derive(Clone, Debug)]
pub struct Selection {
    pub chosen: Vec<(Vec<Vertex>, u64)>,
    pub confined_to: Vec<Vertex>,
}

/// Residue-level selection: decides which tuples to use purely from the
/// input's residues and the defined adapter residues, so it is independent
/// of the adapter source.
pub fn select_tuples(
    bal: &Balancer,
    phi_eval: &dyn Fn(&[Vertex]) -> i64,
    h_k: u64,
) -> Result<Selection> {
    if h_k == 0 || !bal.b[bal.k].is_multiple_of(h_k) {
        return invalid(format!("h_k = {} must divide b_k = {}", h_k, bal.b[bal.k]));
    }
    let mut committed: Vec<(Vec<Vertex>, u64)> = Vec::new();
    confine(bal, &[], phi_eval, h_k, bal.b[bal.k], &mut committed, &|t| t.to_vec())?;
    Ok(Selection {
        confined_to: bal.u_order[..(2 * bal.k - 1).min(bal.u_order.len())].to_vec(),
        chosen: committed,
    })
}

fn residue_at(
    phi_eval: &dyn Fn(&[Vertex]) -> i64,
    committed: &[(Vec<Vertex>, u64)],
    s: &[Vertex],
    h_k: u64,
    b_k: u64,
) -> i64 {
    let mut v = phi_eval(s);
    for (x, c) in committed {
        v += *c as i64 * adapter_residue(x, s, h_k);
    }
    v.rem_euclid(b_k as i64)
}

fn confine(
    bal: &Balancer,
    pins: &[Vertex],
    phi_eval: &dyn Fn(&[Vertex]) -> i64,
    h_k: u64,
    b_k: u64,
    committed: &mut Vec<(Vec<Vertex>, u64)>,
    wrap: &dyn Fn(&[Vertex]) -> Vec<Vertex>,
) -> Result<()> {
    match &bal.node {
        Node::Base => {
            let n = bal.u_order.len();
            for idx in 0..n.saturating_sub(1) {
                let mut query: Vec<Vertex> = pins.to_vec();
                query.push(bal.u_order[idx]);
                query.sort_unstable();
                let rho = residue_at(phi_eval, committed, &query, h_k, b_k);
                if rho % h_k as i64 != 0 {
                    return invalid(format!(
                        "function is not divisible by h_k = {} at {:?}",
                        h_k, query
                    ));
                }
                let need = (-(rho / h_k as i64)).rem_euclid((b_k / h_k) as i64) as u64;
                if need > 0 {
                    let full = wrap(&[bal.u_order[idx], bal.u_order[idx + 1]]);
                    committed.push((full, need));
                }
            }
            Ok(())
        }
        Node::Levels(levels) => {
            for level in levels.iter().rev() {
                let pin = bal.u_order[level.ell - 1];
                let insert_of: BTreeMap<Vec<Vertex>, Vertex> = level
                    .sub
                    .flat
                    .iter()
                    .zip(&level.inserts)
                    .map(|((t, _), &ins)| (t.clone(), ins))
                    .collect();
                let mut sub_pins = pins.to_vec();
                sub_pins.push(pin);
                let sub_wrap = |t: &[Vertex]| -> Vec<Vertex> {
                    let ins = insert_of
                        .get(t)
                        .copied()
                        .expect("sub selection references a known tuple");
                    wrap(&extend_tuple(t, pin, ins))
                };
                confine(
                    &level.sub,
                    &sub_pins,
                    phi_eval,
                    h_k,
                    b_k,
                    committed,
                    &sub_wrap,
                )?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct BalanceOutcome {
    pub selection: Selection,
    pub balanced: SetFunction,
}

/// Apply the balancer to phi: select tuples, materialize one adapter per
/// selected copy from the source, and return phi plus the adapter sum,
/// verified (b_0..b_k)-divisible.
pub fn balance(
    phi: &SetFunction,
    bal: &Balancer,
    h_k: u64,
    source: &mut dyn AdapterSource,
) -> Result<BalanceOutcome> {
    if phi.r() != bal.r {
        return invalid(format!(
            "function arity {} does not match balancer uniformity {}",
            phi.r(),
            bal.r
        ));
    }
    let k = bal.k;
    let mut prefix_hk = bal.b[..k].to_vec();
    prefix_hk.push(h_k);
    if let Some((s, v)) = phi.divisibility_violation(&prefix_hk) {
        return invalid(format!(
            "input is not (b_0..b_{{k-1}}, h_k)-divisible: phi({:?}) = {}",
            s, v
        ));
    }
    // defects outside the acting set are not repairable
    for (s, v) in phi.level_map(k) {
        if v.rem_euclid(bal.b[k] as i64) != 0 && s.iter().any(|x| !bal.u_order.contains(x)) {
            return invalid(format!("defective set {:?} leaves the acting set", s));
        }
    }
    let availability: BTreeMap<Vec<Vertex>, u64> = bal.flat.iter().cloned().collect();
    let selection = select_tuples(bal, &|s| phi.eval(s), h_k)?;
    // aggregate and bound-check the selection against the multiset
    let mut totals: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
    for (t, c) in &selection.chosen {
        *totals.entry(t.clone()).or_insert(0) += c;
    }
    for (t, c) in &totals {
        let avail = availability.get(t).copied().unwrap_or(0);
        if *c > avail {
            return Err(Error::Internal(format!(
                "selection uses tuple {:?} {} times, only {} available",
                t, c, avail
            )));
        }
    }
    let mut balanced = phi.clone();
    for (t, c) in &selection.chosen {
        let x = AdapterTuple::new(t.clone())?;
        for _ in 0..*c {
            let tau = source.adapter(&x, &bal.b, h_k, bal.r)?;
            if !adapter_check(&tau, &x, &bal.b, h_k)? {
                return Err(Error::Internal(
                    "adapter source produced a non-adapter".to_string(),
                ));
            }
            balanced.add(&tau)?;
        }
    }
    if let Some((s, v)) = balanced.divisibility_violation(&bal.b) {
        return Err(Error::Internal(format!(
            "balanced function still fails at {:?} with {}",
            s, v
        )));
    }
    Ok(BalanceOutcome {
        selection,
        balanced,
    })
}

/// Automatic divisibility: when a (b_0..b_{k-1})-divisible function has all
/// its k-set defects inside a set K of size 2k-1 (and the binomial
/// hypothesis holds), it is in fact (b_0..b_k)-divisible. The check recomputes
/// everything and returns the verdict.
pub fn check_auto_div(phi: &SetFunction, b: &[u64], big_k: &[Vertex]) -> Result<bool> {
    let k = b.len().checked_sub(1).filter(|&k| k >= 1).ok_or_else(|| {
        Error::InvalidArgument("need moduli b_0..b_k with k >= 1".to_string())
    })?;
    if k >= phi.r() {
        return invalid("level must be below the arity".to_string());
    }
    if big_k.len() != 2 * k - 1 {
        return invalid(format!("K must have 2k-1 = {} vertices", 2 * k - 1));
    }
    for i in 0..=k {
        let factor = binomial((phi.r() - i) as u64, (k - i) as u64);
        if !(factor * b[i]).is_multiple_of(b[k]) {
            return invalid(format!("hypothesis fails at i = {}", i));
        }
    }
    if let Some((s, v)) = phi.divisibility_violation(&b[..k]) {
        return invalid(format!(
            "function is not (b_0..b_{{k-1}})-divisible: phi({:?}) = {}",
            s, v
        ));
    }
    for (s, v) in phi.level_map(k) {
        if v.rem_euclid(b[k] as i64) != 0 && !s.iter().all(|x| big_k.contains(x)) {
            return invalid(format!("defective set {:?} is not inside K", s));
        }
    }
    Ok(phi.divisibility_violation(b).is_none())
}
