//! Exhaustive minimum-cost cover, used as a desk-scale oracle.

use num::{BigRational, Zero};

use super::CoverError;
use crate::functions::BisetFunction;
use crate::instance::CostedEdge;
use crate::lp::{build_biset_lp, Orientation};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 16;

/// Minimum-cost subset of variables meeting every `(support, demand)` row.
///
/// Depth-first over variables in ascending cost order, pruning on the
/// incumbent cost and on rows that the undecided variables can no longer
/// satisfy. Returns the chosen variable mask, or `None` if infeasible.
pub fn min_cost_cover(costs: &[BigRational], rows: &[(u128, i64)]) -> Option<u128> {
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[a].cmp(&costs[b]).then(a.cmp(&b)));
    let all: u128 = order.iter().fold(0, |m, &i| m | 1 << i);
    let mut search = Search { costs, rows, order: &order, best: None };
    search.go(0, 0, all, BigRational::zero());
    search.best.map(|(mask, _)| mask)
}

struct Search<'a> {
    costs: &'a [BigRational],
    rows: &'a [(u128, i64)],
    order: &'a [usize],
    best: Option<(u128, BigRational)>,
}

impl Search<'_> {
    fn go(&mut self, depth: usize, chosen: u128, undecided: u128, cost: BigRational) {
        if let Some((_, best)) = &self.best {
            if cost >= *best {
                return;
            }
        }
        let mut satisfied = true;
        for &(support, demand) in self.rows {
            let have = (support & chosen).count_ones() as i64;
            if have < demand {
                satisfied = false;
                if have + ((support & undecided).count_ones() as i64) < demand {
                    return;
                }
            }
        }
        if satisfied {
            self.best = Some((chosen, cost));
            return;
        }
        let Some(&var) = self.order.get(depth) else { return };
        let bit = 1u128 << var;
        let rest = undecided & !bit;
        let with = &cost + &self.costs[var];
        self.go(depth + 1, chosen | bit, rest, with);
        self.go(depth + 1, chosen, rest, cost);
    }
}

/// Exact minimum-cost `f`-cover drawn from `edges`, by enumeration.
pub fn brute_force_opt(
    edges: &[CostedEdge],
    f: &BisetFunction,
    edge_cap: usize,
    enumeration_cap: usize,
) -> Result<Vec<CostedEdge>, CoverError> {
    if edges.len() > edge_cap {
        return Err(CoverError::BruteForceCap { edges: edges.len(), cap: edge_cap });
    }
    let orientation = match edges.first() {
        Some(e) if e.edge.oriented => Orientation::Directed,
        _ => Orientation::Undirected,
    };
    let lp = build_biset_lp(edges, f, orientation, enumeration_cap)?;
    if let Some(err) = lp.infeasibility() {
        return Err(err.into());
    }
    let costs: Vec<BigRational> = edges.iter().map(|e| e.cost.clone()).collect();
    let mask = min_cost_cover(&costs, &lp.essential_rows()).expect("taking every edge is feasible");
    Ok(edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect())
}
