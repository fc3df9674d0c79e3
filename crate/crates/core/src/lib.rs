//! Constructions and verifiers for decompositions of uniform hypergraphs:
//! resolvable partite clique decompositions over finite fields, weakly
//! regular regularisations of arbitrary patterns, divisibility checks,
//! randomized greedy packings, and the degree-shifting machinery that turns
//! pattern-divisible hosts into regularised-pattern-divisible ones.

pub mod combinat;
pub mod divfix;
pub mod error;
pub mod gf;
pub mod hypergraph;
pub mod json;
pub mod packing;
pub mod partite;
pub mod regularise;

pub use error::{Error, Result};
