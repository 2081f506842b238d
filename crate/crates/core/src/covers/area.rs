//! Covering an area function through a directed auxiliary graph.
//!
//! Edges with both ends outside `R` are bidirected, edges leaving `R` are
//! directed into `R`, and edges inside `R` are dropped. An exact directed
//! cover of `f_R` is then projected back to undirected edge ids.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use num::BigRational;

use super::directed::exact_directed_cover;
use super::CoverError;
use crate::bisets::{Edge, NodeSet};
use crate::functions::{compute_k_f, BisetFunction};
use crate::instance::CostedEdge;
use crate::lp::{cost_partition, lp_value, FractionalSolution, Orientation};

static CALLS: AtomicUsize = AtomicUsize::new(0);
static VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Process-wide counters over every [`area_cover`] call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AreaCoverStats {
    pub calls: usize,
    pub violations: usize,
}

pub fn area_cover_stats() -> AreaCoverStats {
    AreaCoverStats { calls: CALLS.load(Ordering::SeqCst), violations: VIOLATIONS.load(Ordering::SeqCst) }
}

/// Whether `|R| ≥ 2k_f − 1` is enforced and a bound violation is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precondition {
    Checked,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaCover {
    pub r: NodeSet,
    /// Undirected edge ids.
    pub edges: BTreeSet<usize>,
    /// The directed cover before projection, with arc ids local to the call.
    pub arcs: Vec<CostedEdge>,
    pub cost: BigRational,
    /// `x(δ(R)) + 2·x(γ(V ∖ R))`, each term weighted by cost.
    pub bound: BigRational,
    pub bound_holds: bool,
}

/// Cover `f_R` using `edges`.
///
/// `x` is the LP solution the cost bound is measured against; it must be
/// feasible for `f_R` (any solution feasible for `f` is). When absent the
/// undirected LP optimum of `f_R` over `edges` is used.
pub fn area_cover(
    edges: &[CostedEdge],
    f: &BisetFunction,
    r: NodeSet,
    x: Option<&FractionalSolution>,
    pre: Precondition,
    cap: usize,
) -> Result<AreaCover, CoverError> {
    CALLS.fetch_add(1, Ordering::SeqCst);
    if pre == Precondition::Checked {
        let kv = compute_k_f(f, cap)?;
        if !kv.covered && r.len() + 1 < 2 * kv.k_f {
            return Err(CoverError::Precondition(format!(
                "area set {r:?} has {} nodes, fewer than 2k_f-1 = {}",
                r.len(),
                2 * kv.k_f - 1
            )));
        }
    }
    let f_r = f.area(r);

    let mut arcs = Vec::new();
    let mut origin = Vec::new();
    for e in edges {
        let (u, v) = (e.edge.u, e.edge.v);
        let mut push = |tail: usize, head: usize| {
            origin.push(e.edge.id);
            arcs.push(CostedEdge { edge: Edge::arc(arcs.len(), tail, head), cost: e.cost.clone() });
        };
        match (r.contains(u), r.contains(v)) {
            (true, true) => {}
            (false, false) => {
                push(u, v);
                push(v, u);
            }
            (false, true) => push(u, v),
            (true, false) => push(v, u),
        }
    }

    let directed = exact_directed_cover(&arcs, &f_r, cap)?;
    let ids: BTreeSet<usize> = directed.arcs.iter().map(|a| origin[a.edge.id]).collect();
    let cost = super::cost_of_ids(edges, &ids);

    let own;
    let x = match x {
        Some(x) => x,
        None => {
            own = lp_value(edges, &f_r, Orientation::Undirected, cap)?;
            &own
        }
    };
    let part = cost_partition(x, r);
    let bound = &part.delta + &part.gamma_bar * BigRational::from_integer(2.into());
    let bound_holds = cost <= bound;
    if !bound_holds {
        VIOLATIONS.fetch_add(1, Ordering::SeqCst);
        if pre == Precondition::Checked {
            return Err(CoverError::assertion(
                "area-cover bound",
                format!("c(I) = {cost} exceeds {bound} for R = {r:?}"),
            ));
        }
    }
    Ok(AreaCover { r, edges: ids, arcs: directed.arcs, cost, bound, bound_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisets::DEFAULT_ENUMERATION_CAP as CAP;
    use crate::covers::brute_force_opt;
    use crate::instance::Instance;
    use num::Zero;

    #[test]
    fn zero_function_gives_empty_cover() {
        let inst = Instance::complete(4, 2).unwrap();
        let f = BisetFunction::zero(inst.ground());
        let c = area_cover(&inst.finite_edges(), &f, NodeSet::singleton(0), None, Precondition::Checked, CAP).unwrap();
        assert!(c.edges.is_empty());
        assert!(c.cost.is_zero());
    }

    #[test]
    fn whole_ground_set_needs_nothing() {
        let inst = Instance::complete(5, 2).unwrap();
        let f = BisetFunction::kcs(inst.ground(), 2);
        let c = area_cover(&inst.finite_edges(), &f, inst.ground().all(), None, Precondition::Checked, CAP).unwrap();
        assert!(c.edges.is_empty());
    }

    #[test]
    fn k6_single_root_meets_bound_and_covers() {
        let inst = Instance::complete(6, 1).unwrap();
        let edges = inst.finite_edges();
        let f = BisetFunction::kcs(inst.ground(), 1);
        let x = lp_value(&edges, &f, Orientation::Undirected, CAP).unwrap();
        for root in 0..6 {
            let r = NodeSet::singleton(root);
            let c = area_cover(&edges, &f, r, Some(&x), Precondition::Checked, CAP).unwrap();
            assert!(c.bound_holds, "{} > {}", c.cost, c.bound);
            // A spanning tree is the cheapest way to reach the root from everywhere.
            assert_eq!(c.cost, BigRational::from_integer(5.into()));
            let f_r = f.area(r);
            let chosen = crate::covers::select_ids(&edges, &c.edges);
            assert!(f_r
                .residual(&chosen.iter().map(|e| e.edge).collect::<Vec<_>>())
                .positive_bisets(CAP)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn never_uses_edges_inside_r() {
        let inst = Instance::complete(6, 2).unwrap();
        let edges = inst.finite_edges();
        let f = BisetFunction::kcs(inst.ground(), 2);
        let r = NodeSet::from_nodes([0, 1, 2]);
        let c = area_cover(&edges, &f, r, None, Precondition::Checked, CAP).unwrap();
        assert!(c.bound_holds);
        for id in &c.edges {
            let e = inst.edge(*id);
            assert!(!(r.contains(e.u) && r.contains(e.v)));
        }
        let opt = brute_force_opt(&edges, &f.area(r), 16, CAP).unwrap();
        assert!(c.cost >= crate::covers::total_cost(&opt));
    }

    #[test]
    fn small_r_is_rejected_when_checked() {
        let inst = Instance::complete(5, 2).unwrap();
        let f = BisetFunction::kcs(inst.ground(), 2);
        let r = NodeSet::from_nodes([0, 1]);
        let err = area_cover(&inst.finite_edges(), &f, r, None, Precondition::Checked, CAP).unwrap_err();
        assert!(matches!(err, CoverError::Precondition(_)));
        assert!(area_cover(&inst.finite_edges(), &f, r, None, Precondition::Unchecked, CAP).is_ok());
    }
}
