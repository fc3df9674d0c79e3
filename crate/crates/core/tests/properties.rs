//! Property tests of the structural invariants the operations promise.

use proptest::prelude::*;

use hyperdesign::combinat::binomial;
use hyperdesign::divfix::setfn::{indicator, synthetic_adapter, AdapterTuple};
use hyperdesign::gf::{cauchy, cauchy_det, det_elimination, FieldCtx, FieldElem};
use hyperdesign::hypergraph::{div_vector, is_weakly_regular, shadow, RGraph, Vertex};
use hyperdesign::json::HypergraphJson;
use hyperdesign::packing::{conservation_holds, greedy_nibble, verify_packing, NibbleOpts};

/// A random simple r-graph from an edge-subset bitmask.
fn arb_graph(r: usize, n: usize) -> impl Strategy<Value = RGraph> {
    let all: Vec<Vec<Vertex>> = hyperdesign::combinat::combinations(n, r)
        .map(|c| c.into_iter().map(|v| v as Vertex).collect())
        .collect();
    let count = all.len();
    prop::collection::vec(any::<bool>(), count).prop_map(move |mask| {
        let edges = all
            .iter()
            .zip(&mask)
            .filter(|&(_, &on)| on)
            .map(|(e, _)| e.clone())
            .collect::<Vec<_>>();
        RGraph::from_edges(r, n, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Handshaking: binom(r-i, r-k) |G(S)| equals the sum of |G(T)| over
    /// k-sets T containing S.
    #[test]
    fn handshaking_identity(g in arb_graph(3, 7), i in 0usize..3, k in 0usize..3) {
        prop_assume!(i <= k);
        for s in hyperdesign::combinat::combinations(7, i) {
            let s: Vec<Vertex> = s.into_iter().map(|v| v as Vertex).collect();
            let lhs = g.degree_of(&s) * binomial((3 - i) as u64, (3 - k) as u64);
            let mut rhs = 0;
            for t in hyperdesign::combinat::combinations(7, k) {
                let t: Vec<Vertex> = t.into_iter().map(|v| v as Vertex).collect();
                if s.iter().all(|v| t.contains(v)) {
                    rhs += g.degree_of(&t);
                }
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// The leading divisibility entry is always the edge count.
    #[test]
    fn div_vector_leading_entry(g in arb_graph(2, 8)) {
        prop_assume!(!g.is_empty());
        prop_assert_eq!(div_vector(&g).unwrap().0[0], g.len() as u64);
    }

    /// A weakly regular graph's shadow is weakly regular with the stated
    /// vector, cross-checked against the direct test.
    #[test]
    fn shadow_regularity_crosscheck(g in arb_graph(3, 6)) {
        prop_assume!(!g.is_empty());
        let w = is_weakly_regular(&g).unwrap();
        let (sh, sp) = shadow(&g).unwrap();
        match (w.regular, sp) {
            (true, Some(sp)) => {
                let shw = is_weakly_regular(&sh).unwrap();
                prop_assert!(shw.regular);
                prop_assert_eq!(shw.s.unwrap(), sp);
            }
            (false, None) => {}
            other => prop_assert!(false, "inconsistent shadow outcome {:?}", other.0),
        }
    }

    /// JSON round trip is the identity on graphs.
    #[test]
    fn hypergraph_json_roundtrip(g in arb_graph(3, 7)) {
        let text = serde_json::to_string(&HypergraphJson::from_graph(&g)).unwrap();
        let back: HypergraphJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }

    /// Nibble output always verifies and conserves edges, any seed.
    #[test]
    fn nibble_always_verifies(seed in 0u64..1000) {
        let g = RGraph::complete(2, 12);
        let f = RGraph::from_edges(2, 3, vec![vec![0,1], vec![0,2], vec![1,2]]).unwrap();
        let (p, leftover) = greedy_nibble(&g, &f, seed, &NibbleOpts::default()).unwrap();
        prop_assert!(verify_packing(&g, &p).is_valid());
        prop_assert!(conservation_holds(&g, &f, &p, &leftover));
    }

    /// Synthetic adapters extend to exactly zero off their corners at every
    /// level up to k.
    #[test]
    fn synthetic_adapter_support(h_k in 1u64..5, seed in 0u64..500) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut pool: Vec<Vertex> = (0..10).collect();
        for i in 0..4 {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let x = AdapterTuple::new(pool[..4].to_vec()).unwrap();
        let tau = synthetic_adapter(3, &x, h_k, &[20]).unwrap();
        // level 1: identically zero
        for (s, v) in tau.level_map(1) {
            prop_assert_eq!(v, 0, "level-1 set {:?}", s);
        }
        // level 2: corners carry signed h_k, everything else zero
        for (s, v) in tau.level_map(2) {
            let expected = hyperdesign::divfix::setfn::adapter_residue(&x.x, &s, h_k);
            prop_assert_eq!(v, expected);
        }
    }

    /// Every square Cauchy matrix over a small field is invertible and the
    /// two determinant routes agree, for random generator selections.
    #[test]
    fn cauchy_submatrix_invertibility(seed in 0u64..300) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let q = [16u64, 17, 19, 25, 27][rng.gen_range(0..5)];
        let ctx = FieldCtx::new(q).unwrap();
        let m = rng.gen_range(1..=5usize);
        let mut pool: Vec<u64> = (0..q).collect();
        for i in 0..2 * m {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let xs: Vec<FieldElem> = pool[..m].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let ys: Vec<FieldElem> = pool[m..2*m].iter().map(|&v| ctx.elem(v).unwrap()).collect();
        let d = cauchy_det(&ctx, &xs, &ys).unwrap();
        prop_assert!(d.0 != 0);
        let mat = cauchy(&ctx, &xs, &ys).unwrap();
        prop_assert_eq!(det_elimination(&ctx, &mat).unwrap(), d);
    }

    /// The indicator of a graph extends to its link sizes.
    #[test]
    fn indicator_matches_links(g in arb_graph(2, 7), v in 0u32..7) {
        let f = indicator(&g);
        prop_assert_eq!(f.eval(&[v]), g.degree_of(&[v]) as i64);
        prop_assert_eq!(f.eval(&[]), g.len() as i64);
    }
}
