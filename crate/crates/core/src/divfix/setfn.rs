//! Integer-valued functions on r-subsets with the downward extension
//! phi(S) = sum over stored r-sets containing S, plus the adapter predicate
//! built on top of them.

use std::collections::BTreeMap;

use crate::combinat::subsets_of;
use crate::error::{invalid, Result};
use crate::hypergraph::{RGraph, Vertex};

/// phi: r-subsets of an integer universe -> Z, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    r: usize,
    values: BTreeMap<Vec<Vertex>, i64>,
}

impl SetFunction {
    pub fn new(r: usize, n: usize) -> SetFunction {
        SetFunction {
            n,
            r,
            values: BTreeMap::new(),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Add v to the value at the sorted r-set e; the universe grows as needed.
    pub fn add_value(&mut self, e: &[Vertex], v: i64) -> Result<()> {
        if e.len() != self.r {
            return invalid(format!("set {:?} does not have arity {}", e, self.r));
        }
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("set {:?} is not sorted strictly ascending", e));
        }
        if v == 0 {
            return Ok(());
        }
        if let Some(&last) = e.last() {
            self.n = self.n.max(last as usize + 1);
        }
        let entry = self.values.entry(e.to_vec()).or_insert(0);
        *entry += v;
        if *entry == 0 {
            self.values.remove(e);
        }
        Ok(())
    }

    pub fn get(&self, e: &[Vertex]) -> i64 {
        self.values.get(e).copied().unwrap_or(0)
    }

    /// The extension phi(S) for |S| <= r: sum over stored r-sets containing S.
    pub fn eval(&self, s: &[Vertex]) -> i64 {
        debug_assert!(s.len() <= self.r);
        self.values
            .iter()
            .filter(|(e, _)| crate::hypergraph::is_subset(s, e))
            .map(|(_, &v)| v)
            .sum()
    }

    /// All i-sets reachable from the support with their extension values.
    /// Sets absent from the map extend to 0.
    pub fn level_map(&self, i: usize) -> BTreeMap<Vec<Vertex>, i64> {
        let mut out = BTreeMap::new();
        for (e, &v) in &self.values {
            for s in subsets_of(e, i) {
                *out.entry(s).or_insert(0) += v;
            }
        }
        out
    }

    pub fn add(&mut self, other: &SetFunction) -> Result<()> {
        if other.r != self.r {
            return invalid("arity mismatch".to_string());
        }
        for (e, &v) in &other.values {
            self.add_value(e, v)?;
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Vertex>, i64)> {
        self.values.iter().map(|(e, &v)| (e, v))
    }

    /// First set violating b_{|S|} | phi(S) for |S| <= b.len()-1, scanning
    /// levels bottom-up and each level in lexicographic order.
    pub fn divisibility_violation(&self, b: &[u64]) -> Option<(Vec<Vertex>, i64)> {
        for (i, &bi) in b.iter().enumerate() {
            if i > self.r {
                break;
            }
            if bi <= 1 {
                continue;
            }
            if i == 0 {
                let total: i64 = self.values.values().sum();
                if total.rem_euclid(bi as i64) != 0 {
                    return Some((Vec::new(), total));
                }
                continue;
            }
            for (s, v) in self.level_map(i) {
                if v.rem_euclid(bi as i64) != 0 {
                    return Some((s, v));
                }
            }
        }
        None
    }

    pub fn is_divisible(&self, b: &[u64]) -> bool {
        self.divisibility_violation(b).is_none()
    }
}

/// The indicator function of a simple r-graph; its extension at S equals the
/// link size |G(S)|.
pub fn indicator(g: &RGraph) -> SetFunction {
    let mut f = SetFunction::new(g.r(), g.n());
    for e in g.edges() {
        f.add_value(e, 1).unwrap();
    }
    f
}

/// The multiplicity function of a multigraph; the extension at S equals the
/// link count |G(S)| with multiplicity.
pub fn indicator_multi(g: &crate::hypergraph::MultiRGraph) -> SetFunction {
    let mut f = SetFunction::new(g.r(), g.n());
    for (e, m) in g.edge_multiplicities() {
        f.add_value(e, m as i64).unwrap();
    }
    f
}

/// An ordered tuple (x_1, ..., x_2k) of distinct vertices; pair i is
/// (x_i, x_{i+k}).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdapterTuple {
    pub x: Vec<Vertex>,
}

impl AdapterTuple {
    pub fn new(x: Vec<Vertex>) -> Result<AdapterTuple> {
        if x.is_empty() || !x.len().is_multiple_of(2) {
            return invalid("adapter tuple must have 2k entries".to_string());
        }
        let mut s = x.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return invalid("adapter tuple entries must be distinct".to_string());
        }
        Ok(AdapterTuple { x })
    }

    pub fn k(&self) -> usize {
        self.x.len() / 2
    }
}

/// Defined residue of any x-adapter at the k-set S: (-1)^{sum z_i} h_k when
/// S picks exactly one of {x_i, x_{i+k}} per pair, 0 otherwise.
pub fn adapter_residue(x: &[Vertex], s: &[Vertex], h_k: u64) -> i64 {
    let k = x.len() / 2;
    if s.len() != k {
        return 0;
    }
    let mut sign = 0usize;
    for i in 0..k {
        let z0 = s.contains(&x[i]);
        let z1 = s.contains(&x[i + k]);
        match (z0, z1) {
            (true, false) => {}
            (false, true) => sign += 1,
            _ => return 0,
        }
    }
    if sign.is_multiple_of(2) {
        h_k as i64
    } else {
        -(h_k as i64)
    }
}

/// Is tau an x-adapter with respect to (b_0..b_k; h_k)? Checks
/// (b_0..b_{k-1})-divisibility and the corner congruences at level k.
pub fn adapter_check(tau: &SetFunction, x: &AdapterTuple, b: &[u64], h_k: u64) -> Result<bool> {
    let k = x.k();
    if b.len() != k + 1 {
        return invalid(format!("need b_0..b_{}, got {} entries", k, b.len()));
    }
    if h_k == 0 || !b[k].is_multiple_of(h_k) {
        return invalid(format!("h_k = {} must divide b_k = {}", h_k, b[k]));
    }
    if k >= tau.r() {
        return invalid("adapter level must be below the arity".to_string());
    }
    if !tau.is_divisible(&b[..k]) {
        return Ok(false);
    }
    let bk = b[k] as i64;
    let level = tau.level_map(k);
    for (s, v) in &level {
        let expected = adapter_residue(&x.x, s, h_k);
        if (v - expected).rem_euclid(bk) != 0 {
            return Ok(false);
        }
    }
    // corners missing from the level map extend to 0 and must still match
    for word in 0..(1u32 << k) {
        let mut corner: Vec<Vertex> = (0..k)
            .map(|i| if word >> i & 1 == 1 { x.x[i + k] } else { x.x[i] })
            .collect();
        corner.sort_unstable();
        if !level.contains_key(&corner) {
            let expected = adapter_residue(&x.x, &corner, h_k);
            if expected.rem_euclid(bk) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A minimal synthetic x-adapter: for each word w place (-1)^{|w|_1} h_k on
/// the r-set {x_i^{w_i}} union aux, where aux supplies r-k padding vertices
/// disjoint from the tuple. Its extension vanishes identically below level k
/// and off the corners at level k.
pub fn synthetic_adapter(
    r: usize,
    x: &AdapterTuple,
    h_k: u64,
    aux: &[Vertex],
) -> Result<SetFunction> {
    let k = x.k();
    if k >= r {
        return invalid("tuple level must be below the arity".to_string());
    }
    if aux.len() != r - k {
        return invalid(format!("need {} auxiliary vertices", r - k));
    }
    if aux.iter().any(|v| x.x.contains(v)) {
        return invalid("auxiliary vertices must avoid the tuple".to_string());
    }
    {
        let mut s = aux.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return invalid("auxiliary vertices must be distinct".to_string());
        }
    }
    let mut tau = SetFunction::new(r, 0);
    for word in 0..(1u32 << k) {
        let mut e: Vec<Vertex> = (0..k)
            .map(|i| if word >> i & 1 == 1 { x.x[i + k] } else { x.x[i] })
            .collect();
        e.extend_from_slice(aux);
        e.sort_unstable();
        let sign = if (word.count_ones() % 2) == 0 { 1 } else { -1 };
        tau.add_value(&e, sign * h_k as i64)?;
    }
    Ok(tau)
}
