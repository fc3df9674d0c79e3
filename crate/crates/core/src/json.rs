//! JSON interchange formats. Loaders validate structure strictly: edges must
//! be sorted ascending with no repeats, multiplicity arrays must align, and
//! vertex indices must stay below the declared count.

use serde::{Deserialize, Serialize};

use crate::divfix::setfn::SetFunction;
use crate::error::{invalid, Result};
use crate::gf::FieldCtx;
use crate::hypergraph::{MultiRGraph, RGraph, Vertex};
use crate::packing::{Embedding, Packing};
use crate::partite::{PartiteHost, ResolvableDecomposition};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypergraphJson {
    pub r: usize,
    pub n: usize,
    pub edges: Vec<Vec<Vertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<u64>>,
}

impl HypergraphJson {
    pub fn from_graph(g: &RGraph) -> HypergraphJson {
        HypergraphJson {
            r: g.r(),
            n: g.n(),
            edges: g.edges().cloned().collect(),
            mult: None,
        }
    }

    pub fn from_multigraph(g: &MultiRGraph) -> HypergraphJson {
        let mut edges = Vec::new();
        let mut mult = Vec::new();
        for (e, m) in g.edge_multiplicities() {
            edges.push(e.clone());
            mult.push(m);
        }
        HypergraphJson {
            r: g.r(),
            n: g.n(),
            edges,
            mult: Some(mult),
        }
    }

    pub fn to_graph(&self) -> Result<RGraph> {
        if self.mult.is_some() {
            return invalid("expected a simple hypergraph, found multiplicities".to_string());
        }
        RGraph::from_edges(self.r, self.n, self.edges.iter().cloned())
    }

    pub fn to_multigraph(&self) -> Result<MultiRGraph> {
        let mut g = MultiRGraph::new(self.r, self.n);
        match &self.mult {
            None => {
                for e in &self.edges {
                    g.add(e.clone(), 1)?;
                }
            }
            Some(mult) => {
                if mult.len() != self.edges.len() {
                    return invalid("mult array does not match the edge list".to_string());
                }
                for (e, &m) in self.edges.iter().zip(mult) {
                    g.add(e.clone(), m)?;
                }
            }
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u64>>,
}

impl FieldJson {
    pub fn to_ctx(&self) -> Result<FieldCtx> {
        match &self.poly {
            Some(poly) => FieldCtx::with_poly(self.p, self.k, poly.clone()),
            None => FieldCtx::new(self.p.pow(self.k)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingJson {
    pub pattern: HypergraphJson,
    pub host_n: usize,
    pub copies: Vec<CopyJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CopyJson {
    pub role_map: Vec<Vertex>,
}

impl PackingJson {
    pub fn from_packing(p: &Packing) -> PackingJson {
        let p = p.canonicalized();
        PackingJson {
            pattern: HypergraphJson::from_graph(&p.pattern),
            host_n: p.host_n,
            copies: p
                .copies
                .iter()
                .map(|e| CopyJson {
                    role_map: e.role_map.clone(),
                })
                .collect(),
        }
    }

    pub fn to_packing(&self) -> Result<Packing> {
        Ok(Packing {
            pattern: self.pattern.to_graph()?,
            host_n: self.host_n,
            copies: self
                .copies
                .iter()
                .map(|c| Embedding {
                    role_map: c.role_map.clone(),
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolvableJson {
    pub q: u64,
    pub f: usize,
    pub r: usize,
    /// classes[i] lists the cliques of the class indexed by the field
    /// element with canonical index i; vertex (x, c) is encoded c*q + x.
    pub classes: Vec<Vec<Vec<Vertex>>>,
}

impl ResolvableJson {
    pub fn from_decomposition(d: &ResolvableDecomposition) -> ResolvableJson {
        ResolvableJson {
            q: d.host.q,
            f: d.host.f,
            r: d.r,
            classes: d.classes.clone(),
        }
    }

    pub fn to_decomposition(&self) -> Result<ResolvableDecomposition> {
        if self.classes.len() as u64 != self.q {
            return invalid(format!(
                "expected {} classes, found {}",
                self.q,
                self.classes.len()
            ));
        }
        Ok(ResolvableDecomposition {
            host: PartiteHost {
                q: self.q,
                f: self.f,
            },
            r: self.r,
            classes: self.classes.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFunctionJson {
    pub n: usize,
    pub r: usize,
    pub values: Vec<(Vec<Vertex>, i64)>,
}

impl SetFunctionJson {
    pub fn from_function(f: &SetFunction) -> SetFunctionJson {
        SetFunctionJson {
            n: f.n(),
            r: f.r(),
            values: f.entries().map(|(e, v)| (e.clone(), v)).collect(),
        }
    }

    pub fn to_function(&self) -> Result<SetFunction> {
        let mut f = SetFunction::new(self.r, self.n);
        for (e, v) in &self.values {
            f.add_value(e, *v)?;
        }
        Ok(f)
    }
}
