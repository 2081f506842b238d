//! Exact minimum-cost directed covers by LP-bounded branch and bound.
//!
//! For positively intersecting supermodular functions the directed LP is
//! integral, so the root relaxation already yields the optimum and no
//! branching happens. Other functions fall back to branching on the largest
//! fractional arc.

use num::{BigRational, Zero};

use super::CoverError;
use crate::functions::BisetFunction;
use crate::instance::CostedEdge;
use crate::lp::simplex::{self, CoveringLp};
use crate::lp::{build_biset_lp, Orientation};

#[derive(Clone, Debug)]
pub struct DirectedCover {
    pub arcs: Vec<CostedEdge>,
    pub cost: BigRational,
    /// Value of the root LP relaxation.
    pub lp_value: BigRational,
    pub root_integral: bool,
    /// Branch-and-bound nodes whose relaxation was solved.
    pub nodes: usize,
}

pub fn exact_directed_cover(arcs: &[CostedEdge], f: &BisetFunction, cap: usize) -> Result<DirectedCover, CoverError> {
    let lp = build_biset_lp(arcs, f, Orientation::Directed, cap)?;
    if let Some(err) = lp.infeasibility() {
        return Err(err.into());
    }
    let costs: Vec<BigRational> = arcs.iter().map(|a| a.cost.clone()).collect();
    let rows = lp.essential_rows();
    let mut bb = BranchAndBound { costs: &costs, rows: &rows, best: None, nodes: 0, root: None };
    bb.explore(0, 0);
    let (mask, cost) = bb.best.expect("a feasible directed LP always has an integral cover");
    let (lp_value, root_integral) = bb.root.expect("root relaxation solved");
    let chosen: Vec<CostedEdge> =
        arcs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect();
    Ok(DirectedCover { arcs: chosen, cost, lp_value, root_integral, nodes: bb.nodes })
}

struct BranchAndBound<'a> {
    costs: &'a [BigRational],
    rows: &'a [(u128, i64)],
    best: Option<(u128, BigRational)>,
    nodes: usize,
    root: Option<(BigRational, bool)>,
}

impl BranchAndBound<'_> {
    fn explore(&mut self, fixed_in: u128, fixed_out: u128) {
        let Some((bound, x)) = self.relax(fixed_in, fixed_out) else { return };
        let fractional =
            (0..self.costs.len()).filter(|&i| !x[i].is_integer()).max_by(|&a, &b| x[a].cmp(&x[b]).then(b.cmp(&a)));
        if self.root.is_none() {
            self.root = Some((bound.clone(), fractional.is_none()));
        }
        if let Some((_, best)) = &self.best {
            if bound >= *best {
                return;
            }
        }
        match fractional {
            None => {
                let mask = (0..self.costs.len()).filter(|&i| !x[i].is_zero()).fold(0u128, |m, i| m | 1 << i);
                self.best = Some((mask, bound));
            }
            Some(var) => {
                let bit = 1u128 << var;
                self.explore(fixed_in | bit, fixed_out);
                self.explore(fixed_in, fixed_out | bit);
            }
        }
    }

    /// LP bound (including the cost of arcs fixed in) and the full solution
    /// vector, or `None` when the fixings are infeasible.
    fn relax(&mut self, fixed_in: u128, fixed_out: u128) -> Option<(BigRational, Vec<BigRational>)> {
        let m = self.costs.len();
        let free: Vec<usize> = (0..m).filter(|&i| (fixed_in | fixed_out) >> i & 1 == 0).collect();
        let mut rows = Vec::new();
        for &(support, demand) in self.rows {
            let residual = demand - (support & fixed_in).count_ones() as i64;
            if residual <= 0 {
                continue;
            }
            let mut compressed = 0u128;
            for (j, &i) in free.iter().enumerate() {
                if support >> i & 1 == 1 {
                    compressed |= 1 << j;
                }
            }
            if (compressed.count_ones() as i64) < residual {
                return None;
            }
            rows.push((compressed, residual));
        }
        self.nodes += 1;
        let costs: Vec<BigRational> = free.iter().map(|&i| self.costs[i].clone()).collect();
        let sol = simplex::solve_lazily(&CoveringLp { costs: &costs, rows: &rows }).ok()?;
        let mut x = vec![BigRational::zero(); m];
        let mut bound = sol.value;
        for (i, xi) in x.iter_mut().enumerate() {
            if fixed_in >> i & 1 == 1 {
                *xi = BigRational::from_integer(1.into());
                bound += &self.costs[i];
            }
        }
        for (j, &i) in free.iter().enumerate() {
            x[i] = sol.x[j].clone();
        }
        Some((bound, x))
    }
}
