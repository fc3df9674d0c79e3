//! Resolvable clique decompositions of complete f-partite hosts via Cauchy
//! matrices over GF(q).
//!
//! The host has f classes of size q; vertex (x, i) for x in GF(q) and class
//! i in 0..f is encoded as i*q + index(x). An r-set is crossing if it meets
//! every class at most once. The construction produces the set Y of crossing
//! f-sets Q with A' x_Q = 0 (A' the Cauchy matrix A minus its final row) and
//! groups Y into classes by the value of the final row at x_Q.

use std::collections::BTreeMap;

use crate::combinat::{binomial, subsets_of};
use crate::error::{invalid, Result};
use crate::gf::{cauchy, solve_square, FieldCtx, FieldElem, Matrix};
use crate::hypergraph::Vertex;

/// Parameters of the complete f-partite host with classes of size q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHost {
    pub q: u64,
    pub f: usize,
}

impl PartiteHost {
    pub fn vertex(&self, class: usize, elem_index: u64) -> Vertex {
        (class as u64 * self.q + elem_index) as Vertex
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        (v as u64 / self.q) as usize
    }

    pub fn elem_index_of(&self, v: Vertex) -> u64 {
        v as u64 % self.q
    }

    pub fn vertex_count(&self) -> usize {
        (self.q * self.f as u64) as usize
    }

    pub fn is_crossing(&self, set: &[Vertex]) -> bool {
        let mut seen = vec![false; self.f];
        for &v in set {
            let c = self.class_of(v);
            if c >= self.f || seen[c] {
                return false;
            }
            seen[c] = true;
        }
        true
    }
}

/// A resolvable decomposition: the f-cliques of Y grouped into q classes,
/// one per field element; class x* covers every crossing (r-1)-set exactly
/// once, while Y as a whole covers every crossing r-set exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvableDecomposition {
    pub host: PartiteHost,
    pub r: usize,
    /// classes[i] is the clique list for x* = the field element of index i;
    /// every clique is a sorted crossing f-set of encoded vertices.
    pub classes: Vec<Vec<Vec<Vertex>>>,
}

impl ResolvableDecomposition {
    pub fn clique_count(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn all_cliques(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.classes.iter().flatten()
    }
}

/// Build the resolvable K_f^(r)-decomposition of the complete f-partite host
/// over GF(q). Requires 2f <= q (so 2f distinct Cauchy generators exist) and
/// 1 <= r <= f-1.
pub fn resolvable_decomposition(q: u64, f: usize, r: usize) -> Result<ResolvableDecomposition> {
    if f < 2 {
        return invalid("need at least two classes".to_string());
    }
    if 2 * f as u64 > q {
        return invalid(format!("need 2f <= q, got f = {}, q = {}", f, q));
    }
    if r < 1 || r >= f {
        return invalid(format!("need 1 <= r <= f-1, got r = {}, f = {}", r, f));
    }
    let ctx = FieldCtx::new(q)?;
    // generators: the first 2f field elements in canonical index order
    let xs: Vec<FieldElem> = (0..f as u64).map(|i| ctx.elem(i).unwrap()).collect();
    let ys: Vec<FieldElem> = (f as u64..2 * f as u64).map(|i| ctx.elem(i).unwrap()).collect();
    let a = cauchy_rows(&ctx, &xs, &ys, f - r + 1)?;
    let a_prime = a.drop_last_row();
    let a_hat: Vec<FieldElem> = a.row(f - r + 1 - 1).to_vec();

    let host = PartiteHost { q, f };
    let mut classes: Vec<Vec<Vec<Vertex>>> = vec![Vec::new(); q as usize];

    // free coordinates: the last r columns; solve for the first f-r
    let bound_cols: Vec<usize> = (0..f - r).collect();
    let free_cols: Vec<usize> = (f - r..f).collect();
    let a_bound = a_prime.select_columns(&bound_cols);
    let a_free = a_prime.select_columns(&free_cols);

    let mut assignment = vec![0u64; r];
    loop {
        let free_vals: Vec<FieldElem> = assignment.iter().map(|&v| ctx.elem(v).unwrap()).collect();
        // rhs = -A'_free * assignment
        let rhs: Vec<FieldElem> = a_free
            .mul_vec(&ctx, &free_vals)
            .into_iter()
            .map(|v| ctx.neg(v))
            .collect();
        let head = solve_square(&ctx, &a_bound, &rhs)?;
        let mut x_q: Vec<FieldElem> = head;
        x_q.extend_from_slice(&free_vals);
        let x_star = dot(&ctx, &a_hat, &x_q);
        let clique: Vec<Vertex> = (0..f).map(|i| host.vertex(i, x_q[i].0 as u64)).collect();
        classes[x_star.0 as usize].push(clique);

        // advance the odometer over GF(q)^r
        let mut i = 0;
        loop {
            if i == r {
                break;
            }
            assignment[i] += 1;
            if assignment[i] < q {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    for class in &mut classes {
        class.sort();
    }
    let out = ResolvableDecomposition { host, r, classes };
    // structural counts promised by the construction
    let expected: u64 = q.pow(r as u32);
    if out.clique_count() as u64 != expected {
        return Err(crate::error::Error::Internal(format!(
            "|Y| = {} but q^r = {}",
            out.clique_count(),
            expected
        )));
    }
    for class in &out.classes {
        if class.len() as u64 != q.pow(r as u32 - 1) {
            return Err(crate::error::Error::Internal(
                "class size is not q^{r-1}".to_string(),
            ));
        }
    }
    Ok(out)
}

fn cauchy_rows(ctx: &FieldCtx, xs: &[FieldElem], ys: &[FieldElem], rows: usize) -> Result<Matrix> {
    let full = cauchy(ctx, xs, ys)?;
    // keep the first `rows` rows
    let data: Vec<Vec<FieldElem>> = (0..rows).map(|i| full.row(i).to_vec()).collect();
    Matrix::from_rows(data)
}

fn dot(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    let mut acc = ctx.zero();
    for (&x, &y) in a.iter().zip(b) {
        acc = ctx.add(acc, ctx.mul(x, y));
    }
    acc
}

/// Verifier verdict with the first violation found, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolvableVerdict {
    Pass,
    Fail(String),
}

impl ResolvableVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ResolvableVerdict::Pass)
    }
}

/// Independent coverage checker: crossing r-sets covered exactly once
/// globally, crossing (r-1)-sets covered exactly once per class, cliques
/// crossing and pairwise distinct.
pub fn verify_resolvable(d: &ResolvableDecomposition) -> ResolvableVerdict {
    let host = &d.host;
    let (q, f, r) = (host.q, host.f, d.r);
    if r < 1 || r >= f {
        return ResolvableVerdict::Fail(format!("invalid uniformity r = {}", r));
    }
    let mut seen_cliques = BTreeMap::new();
    for (ci, class) in d.classes.iter().enumerate() {
        for clique in class {
            if clique.len() != f {
                return ResolvableVerdict::Fail(format!("clique {:?} is not an f-set", clique));
            }
            if clique.windows(2).any(|w| w[0] >= w[1]) {
                return ResolvableVerdict::Fail(format!("clique {:?} is not sorted", clique));
            }
            if clique.iter().any(|&v| (v as usize) >= host.vertex_count()) {
                return ResolvableVerdict::Fail(format!("clique {:?} leaves the host", clique));
            }
            if !host.is_crossing(clique) {
                return ResolvableVerdict::Fail(format!("clique {:?} is not crossing", clique));
            }
            if seen_cliques.insert(clique.clone(), ci).is_some() {
                return ResolvableVerdict::Fail(format!("clique {:?} appears twice", clique));
            }
        }
    }
    // global r-set coverage
    let mut cover_r: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
    for clique in d.all_cliques() {
        for s in subsets_of(clique, r) {
            *cover_r.entry(s).or_insert(0) += 1;
        }
    }
    let crossing_r = binomial(f as u64, r as u64) * q.pow(r as u32);
    if cover_r.len() as u64 != crossing_r {
        return ResolvableVerdict::Fail(format!(
            "covered {} distinct r-sets, expected {}",
            cover_r.len(),
            crossing_r
        ));
    }
    if let Some((s, &c)) = cover_r.iter().find(|(_, &c)| c != 1) {
        return ResolvableVerdict::Fail(format!("r-set {:?} covered {} times", s, c));
    }
    // per-class (r-1)-set coverage
    for (ci, class) in d.classes.iter().enumerate() {
        let mut cover: BTreeMap<Vec<Vertex>, u64> = BTreeMap::new();
        for clique in class {
            for s in subsets_of(clique, r - 1) {
                *cover.entry(s).or_insert(0) += 1;
            }
        }
        let crossing = binomial(f as u64, (r - 1) as u64) * q.pow(r as u32 - 1);
        if cover.len() as u64 != crossing {
            return ResolvableVerdict::Fail(format!(
                "class {}: covered {} distinct (r-1)-sets, expected {}",
                ci,
                cover.len(),
                crossing
            ));
        }
        if let Some((s, &c)) = cover.iter().find(|(_, &c)| c != 1) {
            return ResolvableVerdict::Fail(format!(
                "class {}: (r-1)-set {:?} covered {} times",
                ci, s, c
            ));
        }
    }
    ResolvableVerdict::Pass
}

/// For a crossing r-set e, solve for the unique clique of Y containing it.
/// This is the solver route used to cross-check the enumeration route.
pub fn clique_through(d_q: u64, f: usize, r: usize, e: &[Vertex]) -> Result<Vec<Vertex>> {
    let ctx = FieldCtx::new(d_q)?;
    let host = PartiteHost { q: d_q, f };
    if e.len() != r || !host.is_crossing(e) {
        return invalid(format!("{:?} is not a crossing r-set", e));
    }
    let xs: Vec<FieldElem> = (0..f as u64).map(|i| ctx.elem(i).unwrap()).collect();
    let ys: Vec<FieldElem> = (f as u64..2 * f as u64).map(|i| ctx.elem(i).unwrap()).collect();
    let a = cauchy_rows(&ctx, &xs, &ys, f - r + 1)?;
    let a_prime = a.drop_last_row();
    let classes_of_e: Vec<usize> = e.iter().map(|&v| host.class_of(v)).collect();
    let other_cols: Vec<usize> = (0..f).filter(|c| !classes_of_e.contains(c)).collect();
    let a_e = a_prime.select_columns(&classes_of_e);
    let a_rest = a_prime.select_columns(&other_cols);
    let x_e: Vec<FieldElem> = e
        .iter()
        .map(|&v| ctx.elem(host.elem_index_of(v)).unwrap())
        .collect();
    let rhs: Vec<FieldElem> = a_e.mul_vec(&ctx, &x_e).into_iter().map(|v| ctx.neg(v)).collect();
    let x_rest = solve_square(&ctx, &a_rest, &rhs)?;
    let mut clique: Vec<Vertex> = e.to_vec();
    for (idx, &col) in other_cols.iter().enumerate() {
        clique.push(host.vertex(col, x_rest[idx].0 as u64));
    }
    clique.sort_unstable();
    Ok(clique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn smallest_case_q4_f2_r1() {
        let d = resolvable_decomposition(4, 2, 1).unwrap();
        assert_eq!(d.clique_count(), 4);
        assert_eq!(d.classes.len(), 4);
        for class in &d.classes {
            assert_eq!(class.len(), 1);
        }
        // the 4 pairs form a perfect matching on the 8 vertices
        let mut seen = BTreeSet::new();
        for clique in d.all_cliques() {
            for &v in clique {
                assert!(seen.insert(v));
            }
        }
        assert_eq!(seen.len(), 8);
        assert!(verify_resolvable(&d).passed());
    }

    #[test]
    fn q8_f4_r2_counts() {
        let d = resolvable_decomposition(8, 4, 2).unwrap();
        assert_eq!(d.clique_count(), 64);
        assert_eq!(d.classes.len(), 8);
        for class in &d.classes {
            assert_eq!(class.len(), 8);
            // each class partitions the 32 vertices into 4-sets
            let mut seen = BTreeSet::new();
            for clique in class {
                for &v in clique {
                    assert!(seen.insert(v));
                }
            }
            assert_eq!(seen.len(), 32);
        }
        // all 6 * 64 = 384 crossing pairs covered once
        assert!(verify_resolvable(&d).passed());
    }

    #[test]
    fn precondition_2f_le_q() {
        assert!(resolvable_decomposition(5, 2, 1).is_ok());
        assert!(resolvable_decomposition(5, 3, 1).is_err());
        assert!(resolvable_decomposition(12, 4, 2).is_err()); // 12 not a prime power
    }

    #[test]
    fn generator_output_verifies_q7_f3_r2() {
        let d = resolvable_decomposition(7, 3, 2).unwrap();
        assert!(verify_resolvable(&d).passed());
    }

    #[test]
    fn tampering_detected() {
        let mut d = resolvable_decomposition(7, 3, 2).unwrap();
        // delete one clique: an r-set goes uncovered
        d.classes[0].pop();
        assert!(!verify_resolvable(&d).passed());

        // merge all classes into one: per-class coverage breaks
        let d2 = resolvable_decomposition(7, 3, 2).unwrap();
        let all: Vec<Vec<Vertex>> = d2.all_cliques().cloned().collect();
        let mut merged = d2.clone();
        merged.classes = vec![Vec::new(); 7];
        merged.classes[0] = all;
        assert!(!verify_resolvable(&merged).passed());
    }

    #[test]
    fn solver_route_matches_enumeration() {
        // fix x_e and solve: must agree with the enumerated decomposition
        let d = resolvable_decomposition(5, 2, 1).unwrap();
        let by_enum: BTreeSet<Vec<Vertex>> = d.all_cliques().cloned().collect();
        for v in 0..10u32 {
            let q = clique_through(5, 2, 1, &[v]).unwrap();
            assert!(by_enum.contains(&q), "clique {:?} through {} missing", q, v);
        }
        let d = resolvable_decomposition(8, 4, 2).unwrap();
        let by_enum: BTreeSet<Vec<Vertex>> = d.all_cliques().cloned().collect();
        let host = PartiteHost { q: 8, f: 4 };
        for c1 in 0..4usize {
            for c2 in c1 + 1..4 {
                for x1 in 0..8u64 {
                    for x2 in 0..8u64 {
                        let e = vec![host.vertex(c1, x1), host.vertex(c2, x2)];
                        let q = clique_through(8, 4, 2, &e).unwrap();
                        assert!(by_enum.contains(&q));
                    }
                }
            }
        }
    }

    #[test]
    fn classes_are_r_disjoint() {
        let d = resolvable_decomposition(7, 3, 2).unwrap();
        let mut seen: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
        for (ci, class) in d.classes.iter().enumerate() {
            for clique in class {
                for s in subsets_of(clique, d.r) {
                    if let Some(&prev) = seen.get(&s) {
                        assert_eq!(prev, ci, "r-set {:?} crosses classes", s);
                    }
                    seen.insert(s, ci);
                }
            }
        }
    }
}
