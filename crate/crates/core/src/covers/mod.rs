//! Cover algorithms: exact directed covers, area covers, iterative rounding
//! with failure certificates, the growing-cover loop, and the k-connected
//! subgraph pipeline built on them.

mod area;
mod brute;
mod directed;
mod growing;
mod kcs;
mod rounding;

use std::collections::BTreeSet;

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisets::{Biset, BisetError, NodeSet, DEFAULT_ENUMERATION_CAP};
use crate::instance::CostedEdge;
use crate::lp::LpError;

pub use area::{area_cover, area_cover_stats, AreaCover, AreaCoverStats, Precondition};
pub use brute::{brute_force_opt, min_cost_cover, DEFAULT_BRUTE_FORCE_CAP};
pub use directed::{exact_directed_cover, DirectedCover};
pub use growing::growing_cover;
pub use kcs::{crossing_ell, kcs_ell, select_r1, solve_kcs, EllChoice};
pub use rounding::{relaxed_rounding, skew_cover, FailureCertificate, RoundedCover, SkewOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Domain(#[from] BisetError),
    #[error("infeasible: {detail} (uncovered biset {biset:?})")]
    Infeasible { biset: Biset, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("assertion `{check}` failed: {detail}")]
    Assertion { check: String, detail: String },
    #[error("{edges} edges exceed the brute-force cap of {cap}")]
    BruteForceCap { edges: usize, cap: usize },
    #[error("k={k} needs more than {n} nodes")]
    KTooLarge { k: usize, n: usize },
}

impl CoverError {
    pub(crate) fn assertion(check: &str, detail: impl Into<String>) -> Self {
        CoverError::Assertion { check: check.to_string(), detail: detail.into() }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, CoverError::Infeasible { .. } | CoverError::Lp(LpError::Infeasible { .. }))
    }
}

/// Knobs shared by the cover algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest ground set that may be enumerated.
    pub enumeration_cap: usize,
    /// Override for the initial area set `R₁`.
    pub r1: Option<NodeSet>,
    /// Check every node pair when verifying connectivity.
    pub strict_connectivity: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { enumeration_cap: DEFAULT_ENUMERATION_CAP, r1: None, strict_connectivity: false }
    }
}

/// One runtime-checked inequality `lhs ≤ rhs` (or a boolean fact).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    #[serde(with = "crate::exact::option", default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<BigRational>,
    #[serde(with = "crate::exact::option", default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<BigRational>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckRecord {
    pub fn le(name: &str, lhs: BigRational, rhs: BigRational) -> Self {
        CheckRecord {
            name: name.to_string(),
            passed: lhs <= rhs,
            lhs: Some(lhs),
            rhs: Some(rhs),
            detail: String::new(),
        }
    }

    pub fn fact(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.to_string(), passed, lhs: None, rhs: None, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub index: usize,
    pub r: Vec<usize>,
    pub r_next: Vec<usize>,
    /// `c(I)` for the cover of `f_{R_i}`.
    #[serde(with = "crate::exact")]
    pub cost_first: BigRational,
    /// `c(I')` for the cover of `f_{V ∖ R_{i+1}}`.
    #[serde(with = "crate::exact")]
    pub cost_second: BigRational,
    /// `c(J_i)` with `J_i = I ∪ I'`.
    #[serde(with = "crate::exact")]
    pub cost_j: BigRational,
    /// `c(F_i)` for the skew cover of `f^{J_i}`.
    #[serde(with = "crate::exact")]
    pub cost_f: BigRational,
    #[serde(with = "crate::exact")]
    pub tau_residual: BigRational,
    #[serde(with = "crate::exact")]
    pub gamma: BigRational,
    #[serde(with = "crate::exact")]
    pub delta: BigRational,
    #[serde(with = "crate::exact")]
    pub gamma_bar: BigRational,
    pub certificates: usize,
    /// `|U(f^I, k_f) ∪ R_i|` and its bound `|R_i|(2k_f² − 3k_f + 2)`.
    pub union_size: usize,
    pub union_bound: usize,
    pub j: BTreeSet<usize>,
    pub f: BTreeSet<usize>,
}

/// Result of a growing-cover run, with every checked inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub function: String,
    pub n: usize,
    pub k_f: usize,
    pub solution: BTreeSet<usize>,
    #[serde(with = "crate::exact")]
    pub cost: BigRational,
    #[serde(with = "crate::exact")]
    pub tau: BigRational,
    pub ell: usize,
    pub iterations_completed: usize,
    #[serde(with = "crate::exact")]
    pub ratio_bound: BigRational,
    pub no_guarantee: bool,
    pub chosen_iteration: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
    pub iterations: Vec<IterationRecord>,
    pub checks: Vec<CheckRecord>,
}

impl CoverReport {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `2(2 + 1/ℓ)`.
pub fn ratio_bound(ell: usize) -> BigRational {
    let ell = BigRational::from_integer((ell.max(1) as i64).into());
    BigRational::from_integer(4.into()) + BigRational::from_integer(2.into()) / ell
}

pub(crate) fn total_cost<'a>(edges: impl IntoIterator<Item = &'a CostedEdge>) -> BigRational {
    edges.into_iter().map(|e| &e.cost).sum()
}

/// Cost of a set of edge ids drawn from `edges`.
pub(crate) fn cost_of_ids(edges: &[CostedEdge], ids: &BTreeSet<usize>) -> BigRational {
    total_cost(edges.iter().filter(|e| ids.contains(&e.edge.id)))
}

pub(crate) fn select_ids(edges: &[CostedEdge], ids: &BTreeSet<usize>) -> Vec<CostedEdge> {
    edges.iter().filter(|e| ids.contains(&e.edge.id)).cloned().collect()
}

pub(crate) fn without_ids(edges: &[CostedEdge], ids: &BTreeSet<usize>) -> Vec<CostedEdge> {
    edges.iter().filter(|e| !ids.contains(&e.edge.id)).cloned().collect()
}
