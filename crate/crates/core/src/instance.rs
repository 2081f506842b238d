//! Costed host graphs.

use std::collections::BTreeSet;

use num::{BigRational, Signed, Zero};
use thiserror::Error;

use crate::bisets::{BisetError, Edge, GroundSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Ground(#[from] BisetError),
    #[error("edge {u}-{v}: node id out of range for n={n}")]
    NodeRange { u: usize, v: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    Duplicate(usize, usize),
    #[error("negative cost on edge {0}-{1}")]
    NegativeCost(usize, usize),
}

/// Edge cost; infinite marks a forbidden pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cost {
    Finite(BigRational),
    Infinite,
}

impl Cost {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Infinite => None,
        }
    }
}

impl From<i64> for Cost {
    fn from(c: i64) -> Self {
        Cost::Finite(BigRational::from_integer(c.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceEdge {
    pub u: usize,
    pub v: usize,
    pub cost: Cost,
}

/// An edge paired with its (finite) cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostedEdge {
    pub edge: Edge,
    pub cost: BigRational,
}

/// An undirected costed graph plus a connectivity target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    ground: GroundSet,
    k: usize,
    edges: Vec<InstanceEdge>,
}

impl Instance {
    pub fn new(n: usize, k: usize, edges: Vec<InstanceEdge>) -> Result<Self, InstanceError> {
        let ground = GroundSet::new(n)?;
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(InstanceError::NodeRange { u: e.u, v: e.v, n });
            }
            if e.u == e.v {
                return Err(InstanceError::SelfLoop(e.u));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(InstanceError::Duplicate(e.u, e.v));
            }
            if let Cost::Finite(c) = &e.cost {
                if c.is_negative() {
                    return Err(InstanceError::NegativeCost(e.u, e.v));
                }
            }
        }
        Ok(Instance { ground, k, edges })
    }

    /// Convenience constructor from `(u, v, cost)` triples with finite integer costs.
    pub fn from_triples(n: usize, k: usize, triples: &[(usize, usize, i64)]) -> Result<Self, InstanceError> {
        Self::new(n, k, triples.iter().map(|&(u, v, c)| InstanceEdge { u, v, cost: c.into() }).collect())
    }

    /// The complete graph on `n` nodes with unit costs.
    pub fn complete(n: usize, k: usize) -> Result<Self, InstanceError> {
        let mut triples = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                triples.push((u, v, 1));
            }
        }
        Self::from_triples(n, k, &triples)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn edges(&self) -> &[InstanceEdge] {
        &self.edges
    }

    /// Undirected finite-cost edges; `id` is the position in [`Instance::edges`].
    pub fn finite_edges(&self) -> Vec<CostedEdge> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(id, e)| {
                e.cost.finite().map(|c| CostedEdge { edge: Edge::undirected(id, e.u, e.v), cost: c.clone() })
            })
            .collect()
    }

    pub fn edge(&self, id: usize) -> Edge {
        let e = &self.edges[id];
        Edge::undirected(id, e.u, e.v)
    }

    pub fn is_finite(&self, id: usize) -> bool {
        self.edges.get(id).is_some_and(|e| e.cost.finite().is_some())
    }

    /// Total cost of an edge-id set; `None` if any edge is forbidden or unknown.
    pub fn cost_of(&self, ids: &BTreeSet<usize>) -> Option<BigRational> {
        ids.iter()
            .try_fold(BigRational::zero(), |acc, &id| self.edges.get(id).and_then(|e| e.cost.finite()).map(|c| acc + c))
    }

    pub fn edges_of(&self, ids: &BTreeSet<usize>) -> Vec<Edge> {
        ids.iter().map(|&id| self.edge(id)).collect()
    }

    /// Finite degree of every node.
    pub fn finite_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for e in self.edges.iter().filter(|e| e.cost.finite().is_some()) {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(Instance::from_triples(3, 1, &[(0, 3, 1)]), Err(InstanceError::NodeRange { u: 0, v: 3, n: 3 }));
        assert_eq!(Instance::from_triples(3, 1, &[(1, 1, 1)]), Err(InstanceError::SelfLoop(1)));
        assert_eq!(Instance::from_triples(3, 1, &[(0, 1, 1), (1, 0, 2)]), Err(InstanceError::Duplicate(1, 0)));
        assert_eq!(Instance::from_triples(3, 1, &[(0, 1, -1)]), Err(InstanceError::NegativeCost(0, 1)));
    }

    #[test]
    fn forbidden_edges_are_excluded_from_finite_set() {
        let inst = Instance::new(
            3,
            1,
            vec![InstanceEdge { u: 0, v: 1, cost: 2.into() }, InstanceEdge { u: 1, v: 2, cost: Cost::Infinite }],
        )
        .unwrap();
        let fin = inst.finite_edges();
        assert_eq!(fin.len(), 1);
        assert_eq!(fin[0].edge.id, 0);
        assert_eq!(inst.cost_of(&[1].into()), None);
        assert_eq!(inst.finite_degrees(), vec![1, 1, 0]);
    }
}
