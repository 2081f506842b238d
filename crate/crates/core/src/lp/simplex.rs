//! Exact simplex for covering LPs with unit upper bounds.
//!
//! The primal is `min c·x` subject to `x(S_j) ≥ b_j` and `0 ≤ x ≤ 1`, with
//! `c ≥ 0`. We run the primal simplex on its dual
//!
//! ```text
//! max  Σ b_j y_j − Σ z_e
//! s.t. Σ_{j : e ∈ S_j} y_j − z_e ≤ c_e    for every edge e
//!      y, z ≥ 0
//! ```
//!
//! whose slack basis is feasible because `c ≥ 0`, so no phase one is needed.
//! Primal values are read off the reduced costs of the slack columns.
//! Pivoting follows Bland's rule.

use num::{BigRational, One, Signed, Zero};

pub(crate) struct CoveringLp<'a> {
    pub costs: &'a [BigRational],
    /// `(support mask over variables, demand)`; demand ≥ 1.
    pub rows: &'a [(u128, i64)],
}

pub(crate) struct SimplexResult {
    pub x: Vec<BigRational>,
    pub value: BigRational,
}

#[derive(Debug)]
pub(crate) struct Unbounded;

pub(crate) fn solve(lp: &CoveringLp<'_>) -> Result<SimplexResult, Unbounded> {
    let m = lp.costs.len();
    let nj = lp.rows.len();
    let ncols = nj + 2 * m;
    let z_col = |e: usize| nj + e;
    let s_col = |e: usize| nj + m + e;

    let mut tab: Vec<Vec<BigRational>> = (0..m)
        .map(|e| {
            let mut row = vec![BigRational::zero(); ncols];
            for (j, &(support, _)) in lp.rows.iter().enumerate() {
                if support >> e & 1 == 1 {
                    row[j] = BigRational::one();
                }
            }
            row[z_col(e)] = -BigRational::one();
            row[s_col(e)] = BigRational::one();
            row
        })
        .collect();
    let mut rhs: Vec<BigRational> = lp.costs.to_vec();
    let mut basis: Vec<usize> = (0..m).map(s_col).collect();
    // Reduced costs `c_B B⁻¹ A_j − p_j` of the maximization.
    let mut reduced = vec![BigRational::zero(); ncols];
    for (j, &(_, demand)) in lp.rows.iter().enumerate() {
        reduced[j] = -BigRational::from_integer(demand.into());
    }
    for e in 0..m {
        reduced[z_col(e)] = BigRational::one();
    }
    let mut objective = BigRational::zero();
    while let Some(q) = reduced.iter().position(|r| r.is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            let a = &tab[i][q];
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((best_i, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*best_i]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (p, _) = leave.ok_or(Unbounded)?;

        let pivot = tab[p][q].clone();
        if !pivot.is_one() {
            for v in tab[p].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &pivot;
            }
            rhs[p] /= &pivot;
        }
        let pivot_row = std::mem::take(&mut tab[p]);
        let pivot_rhs = rhs[p].clone();
        let nonzero: Vec<usize> = (0..ncols).filter(|&c| !pivot_row[c].is_zero()).collect();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for &c in &nonzero {
                row[c] -= &factor * &pivot_row[c];
            }
            rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = reduced[q].clone();
        for &c in &nonzero {
            reduced[c] -= &factor * &pivot_row[c];
        }
        objective -= &factor * &pivot_rhs;
        tab[p] = pivot_row;
        basis[p] = q;
    }

    let x: Vec<BigRational> = (0..m).map(|e| reduced[s_col(e)].clone()).collect();
    let value: BigRational = x.iter().zip(lp.costs).map(|(xe, c)| xe * c).sum();
    debug_assert_eq!(value, objective, "primal and dual objectives differ");
    Ok(SimplexResult { x, value })
}

/// Row generation over [`solve`]: start from the rows with the largest
/// demand and repeatedly add the most violated rows until the optimum of the
/// active subsystem satisfies every row. That point is then optimal for the
/// full system and still a vertex of it.
pub(crate) fn solve_lazily(lp: &CoveringLp<'_>) -> Result<SimplexResult, Unbounded> {
    let batch = (2 * lp.costs.len()).max(8);
    if lp.rows.len() <= batch {
        return solve(lp);
    }
    let mut order: Vec<usize> = (0..lp.rows.len()).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(lp.rows[j].1), lp.rows[j].0.count_ones(), j));
    let mut active: Vec<usize> = order.into_iter().take(batch).collect();
    loop {
        active.sort_unstable();
        let rows: Vec<(u128, i64)> = active.iter().map(|&j| lp.rows[j]).collect();
        let result = solve(&CoveringLp { costs: lp.costs, rows: &rows })?;
        let mut violated: Vec<(BigRational, usize)> = lp
            .rows
            .iter()
            .enumerate()
            .filter_map(|(j, &(support, demand))| {
                let lhs: BigRational =
                    (0..lp.costs.len()).filter(|e| support >> e & 1 == 1).map(|e| &result.x[e]).sum();
                let gap = BigRational::from_integer(demand.into()) - lhs;
                gap.is_positive().then_some((gap, j))
            })
            .collect();
        if violated.is_empty() {
            return Ok(result);
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        active.extend(violated.into_iter().take(batch).map(|(_, j)| j));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn empty_rows_give_zero() {
        let costs = vec![q(3, 1), q(1, 2)];
        let r = solve(&CoveringLp { costs: &costs, rows: &[] }).unwrap();
        assert!(r.value.is_zero());
        assert!(r.x.iter().all(Zero::is_zero));
    }

    #[test]
    fn triangle_vertex_cover_relaxation() {
        // Every pair of the three variables must sum to at least one.
        let costs = vec![q(1, 1); 3];
        let rows = [(0b011, 1), (0b110, 1), (0b101, 1)];
        let r = solve(&CoveringLp { costs: &costs, rows: &rows }).unwrap();
        assert_eq!(r.value, q(3, 2));
        assert!(r.x.iter().all(|v| *v == q(1, 2)));
    }

    #[test]
    fn upper_bound_binds() {
        // x0 + x1 ≥ 2 forces both to one regardless of cost.
        let costs = vec![q(5, 1), q(1, 3)];
        let r = solve(&CoveringLp { costs: &costs, rows: &[(0b11, 2)] }).unwrap();
        assert_eq!(r.x, vec![q(1, 1), q(1, 1)]);
        assert_eq!(r.value, q(16, 3));
    }

    #[test]
    fn lazy_rows_match_full_solve() {
        let costs: Vec<BigRational> = (1..=5).map(|c| q(c, 1)).collect();
        let mut rows = Vec::new();
        for mask in 1u128..32 {
            if mask.count_ones() >= 2 {
                rows.push((mask, (mask.count_ones() as i64 - 1).min(2)));
            }
        }
        let full = solve(&CoveringLp { costs: &costs, rows: &rows }).unwrap();
        let lazy = solve_lazily(&CoveringLp { costs: &costs, rows: &rows }).unwrap();
        assert_eq!(full.value, lazy.value);
    }

    #[test]
    fn infeasible_is_unbounded_dual() {
        let costs = vec![q(1, 1)];
        assert!(solve(&CoveringLp { costs: &costs, rows: &[(0b1, 2)] }).is_err());
    }
}
