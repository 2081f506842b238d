//! The biset covering LP over an explicitly enumerated constraint set.
//!
//! Constraints are `x(δ(A)) ≥ f(A)` for every `f`-positive biset `A`, with
//! `0 ≤ x ≤ 1`. Solving is exact over the rationals.

pub(crate) mod simplex;

use std::collections::BTreeMap;
use std::io::{self, Write};

use num::{BigRational, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bisets::{Biset, BisetError, NodeSet};
use crate::functions::BisetFunction;
use crate::instance::CostedEdge;

/// Maximum number of LP variables (edge supports are `u128` masks).
pub const MAX_LP_EDGES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Domain(#[from] BisetError),
    #[error("{0} edges exceed the LP limit of {MAX_LP_EDGES}")]
    TooManyEdges(usize),
    #[error("{mode:?} LP given an edge with the wrong orientation (edge id {id})")]
    Orientation { mode: Orientation, id: usize },
    #[error("infeasible: biset {biset:?} needs {demand} covering edges but only {capacity} exist")]
    Infeasible { biset: Biset, demand: i64, capacity: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Undirected,
    Directed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverConstraint {
    pub biset: Biset,
    pub demand: i64,
    /// Bit `i` set iff LP variable `i` covers `biset`.
    pub support: u128,
}

#[derive(Clone, Debug)]
pub struct BisetLp {
    pub edges: Vec<CostedEdge>,
    pub constraints: Vec<CoverConstraint>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub edges: Vec<CostedEdge>,
    pub x: Vec<BigRational>,
    pub value: BigRational,
}

impl FractionalSolution {
    pub fn empty() -> Self {
        FractionalSolution { edges: Vec::new(), x: Vec::new(), value: BigRational::zero() }
    }

    pub fn is_integral(&self) -> bool {
        self.x.iter().all(|v| v.is_integer())
    }

    /// `(edge, cost, x_e)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (&CostedEdge, &BigRational)> {
        self.edges.iter().zip(&self.x)
    }
}

/// x-cost split by where each edge lies relative to a node set `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostPartition {
    /// Both ends in `R`.
    pub gamma: BigRational,
    /// Exactly one end in `R`.
    pub delta: BigRational,
    /// Both ends outside `R`.
    pub gamma_bar: BigRational,
}

impl CostPartition {
    pub fn total(&self) -> BigRational {
        &self.gamma + &self.delta + &self.gamma_bar
    }
}

pub fn support_mask(edges: &[CostedEdge], b: &Biset) -> u128 {
    edges.iter().enumerate().filter(|(_, e)| e.edge.covers(b)).fold(0u128, |m, (i, _)| m | 1 << i)
}

pub fn build_biset_lp(
    edges: &[CostedEdge],
    f: &BisetFunction,
    orientation: Orientation,
    cap: usize,
) -> Result<BisetLp, LpError> {
    f.ground().check_cap(cap)?;
    if edges.len() > MAX_LP_EDGES {
        return Err(LpError::TooManyEdges(edges.len()));
    }
    let want_oriented = orientation == Orientation::Directed;
    if let Some(e) = edges.iter().find(|e| e.edge.oriented != want_oriented) {
        return Err(LpError::Orientation { mode: orientation, id: e.edge.id });
    }
    let constraints = f
        .positive_bisets(cap)?
        .into_iter()
        .map(|(biset, demand)| CoverConstraint { biset, demand, support: support_mask(edges, &biset) })
        .collect();
    Ok(BisetLp { edges: edges.to_vec(), constraints, orientation })
}

impl BisetLp {
    /// First constraint whose demand exceeds the number of covering edges.
    pub fn infeasibility(&self) -> Option<LpError> {
        self.constraints.iter().find_map(|c| {
            let capacity = c.support.count_ones() as usize;
            (capacity < c.demand as usize).then_some(LpError::Infeasible { biset: c.biset, demand: c.demand, capacity })
        })
    }

    /// Constraints that are not implied by another one: for each support keep
    /// the largest demand, then drop any row whose support contains another
    /// row's support with at least the same demand.
    pub fn essential_rows(&self) -> Vec<(u128, i64)> {
        let mut by_support: BTreeMap<u128, i64> = BTreeMap::new();
        for c in &self.constraints {
            let d = by_support.entry(c.support).or_insert(c.demand);
            *d = (*d).max(c.demand);
        }
        let rows: Vec<(u128, i64)> = by_support.into_iter().collect();
        rows.iter()
            .filter(|&&(s, d)| !rows.iter().any(|&(s2, d2)| s2 != s && s2 & !s == 0 && d2 >= d))
            .copied()
            .collect()
    }

    pub fn is_feasible(&self, x: &[BigRational]) -> bool {
        x.len() == self.edges.len()
            && x.iter().all(|v| !v.is_negative() && *v <= BigRational::one())
            && self.constraints.iter().all(|c| {
                let lhs: BigRational = (0..self.edges.len()).filter(|i| c.support >> i & 1 == 1).map(|i| &x[i]).sum();
                lhs >= BigRational::from_integer(c.demand.into())
            })
    }

    /// Plain-text LP in CPLEX-style syntax with exact rational coefficients.
    pub fn write_lp<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "\\ biset cover LP ({:?}), {} constraints", self.orientation, self.constraints.len())?;
        writeln!(out, "Minimize")?;
        let terms: Vec<String> = self.edges.iter().enumerate().map(|(i, e)| format!("{} x{}", e.cost, i)).collect();
        writeln!(out, " obj: {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })?;
        writeln!(out, "Subject To")?;
        for (j, c) in self.constraints.iter().enumerate() {
            let vars: Vec<String> =
                (0..self.edges.len()).filter(|i| c.support >> i & 1 == 1).map(|i| format!("x{i}")).collect();
            let lhs = if vars.is_empty() { "0".to_string() } else { vars.join(" + ") };
            writeln!(out, " c{j}: {lhs} >= {}  \\ inner={:?} outer={:?}", c.demand, c.biset.inner(), c.biset.outer())?;
        }
        writeln!(out, "Bounds")?;
        for (i, e) in self.edges.iter().enumerate() {
            let arrow = if e.edge.oriented { "->" } else { "--" };
            writeln!(out, " 0 <= x{i} <= 1  \\ edge {} {}{}{}", e.edge.id, e.edge.u, arrow, e.edge.v)?;
        }
        writeln!(out, "End")
    }
}

pub fn solve_lp(lp: &BisetLp) -> Result<FractionalSolution, LpError> {
    if let Some(err) = lp.infeasibility() {
        return Err(err);
    }
    let costs: Vec<BigRational> = lp.edges.iter().map(|e| e.cost.clone()).collect();
    let rows = lp.essential_rows();
    let result = simplex::solve_lazily(&simplex::CoveringLp { costs: &costs, rows: &rows })
        .expect("dual unbounded although every constraint has enough capacity");
    assert!(lp.is_feasible(&result.x), "simplex returned an infeasible point");
    Ok(FractionalSolution { edges: lp.edges.clone(), x: result.x, value: result.value })
}

/// Build and solve in one step.
pub fn lp_value(
    edges: &[CostedEdge],
    f: &BisetFunction,
    orientation: Orientation,
    cap: usize,
) -> Result<FractionalSolution, LpError> {
    solve_lp(&build_biset_lp(edges, f, orientation, cap)?)
}

pub fn cost_partition(x: &FractionalSolution, r: NodeSet) -> CostPartition {
    let mut part =
        CostPartition { gamma: BigRational::zero(), delta: BigRational::zero(), gamma_bar: BigRational::zero() };
    for (e, xe) in x.iter() {
        let slot = match (r.contains(e.edge.u), r.contains(e.edge.v)) {
            (true, true) => &mut part.gamma,
            (false, false) => &mut part.gamma_bar,
            _ => &mut part.delta,
        };
        *slot += &e.cost * xe;
    }
    part
}
