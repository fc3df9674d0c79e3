//! Divisibility-fixing machinery: set functions and adapters, the
//! edge-extension operator with identification verification, strong regular
//! colourings, degree shifters, balancers, and the end-to-end pipeline that
//! turns pattern-divisible hosts into regularised-pattern-divisible ones.

pub mod balancer;
pub mod fixer;
pub mod colouring;
pub mod nabla;
pub mod setfn;
pub mod shifter;

pub use balancer::{balance, balancer, check_auto_div, AdapterSource, Balancer, SyntheticAdapters};
pub use colouring::{find_strong_colouring_r2, verify_strong_colouring};
pub use fixer::{make_divisible, DivisibilityFixer, FixerMode};
pub use nabla::{canonical_multigraph, nabla, symmetric_extender_check, verify_identification};
pub use setfn::{adapter_check, indicator, synthetic_adapter, AdapterTuple, SetFunction};
pub use shifter::{
    multishifter, scan_congruences, simple_shifter, CoefficientRule, FstarDecomposition,
    ShifterAdapters,
};
