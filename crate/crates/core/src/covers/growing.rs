//! The growing-cover loop.
//!
//! Iteration `i` covers the area function of `R_i`, grows `R_{i+1}` from
//! `R_i` using failure certificates, covers the area function of
//! `V ∖ R_{i+1}`, and rounds the remaining residual. The cheapest pair cover
//! `J_i` together with its rounding `F_i` is returned.

use std::collections::BTreeSet;

use num::{BigRational, Zero};

use super::area::{area_cover, Precondition};
use super::rounding::{relaxed_rounding, skew_cover, SkewOutcome};
use super::{
    cost_of_ids, ratio_bound, select_ids, without_ids, CheckRecord, CoverError, CoverReport, IterationRecord,
    SolverConfig,
};
use crate::bisets::{Edge, NodeSet};
use crate::functions::{compute_k_f, positive_union, BisetFunction};
use crate::instance::CostedEdge;
use crate::lp::{cost_partition, lp_value, Orientation};

fn q(n: usize) -> BigRational {
    BigRational::from_integer((n as i64).into())
}

fn edges_of(edges: &[CostedEdge], ids: &BTreeSet<usize>) -> Vec<Edge> {
    select_ids(edges, ids).into_iter().map(|e| e.edge).collect()
}

struct Completed {
    j: BTreeSet<usize>,
    f: BTreeSet<usize>,
    cost_j: BigRational,
    cost_f: BigRational,
}

/// Run up to `ell` iterations starting from `r1` and return the checked report.
///
/// `f` should be symmetric and crossing supermodular; every inequality the
/// analysis relies on is re-checked and a failure is an
/// [`CoverError::Assertion`].
pub fn growing_cover(
    edges: &[CostedEdge],
    f: &BisetFunction,
    r1: NodeSet,
    ell: usize,
    cfg: &SolverConfig,
) -> Result<CoverReport, CoverError> {
    let cap = cfg.enumeration_cap;
    let ground = f.ground();
    let n = ground.n();
    let ell = ell.max(1);
    let kv = compute_k_f(f, cap)?;
    let mut report = CoverReport {
        function: f.name().to_string(),
        n,
        k_f: kv.k_f,
        solution: BTreeSet::new(),
        cost: BigRational::zero(),
        tau: BigRational::zero(),
        ell,
        iterations_completed: 0,
        ratio_bound: ratio_bound(ell),
        no_guarantee: false,
        chosen_iteration: None,
        fallback: None,
        iterations: Vec::new(),
        checks: Vec::new(),
    };
    if kv.covered {
        report.checks.push(CheckRecord::fact("already covered", true, ""));
        return Ok(report);
    }

    let x = lp_value(edges, f, Orientation::Undirected, cap)?;
    let tau = x.value.clone();
    report.tau = tau.clone();
    let k_f = kv.k_f;
    let growth = 2 * k_f * k_f + 2 - 3 * k_f;
    let need = 2 * k_f - 1;
    let two = q(2);

    let mut checks = Vec::new();
    let mut done: Vec<Completed> = Vec::new();
    let mut r = r1;
    let mut early_exit = false;
    'outer: for index in 1..=ell {
        if r.len() < need || ground.complement(r).len() < need {
            break;
        }
        let part = cost_partition(&x, r);
        checks.push(CheckRecord::fact("partition sums to LP value", part.total() == tau, format!("iteration {index}")));
        let first = area_cover(edges, f, r, Some(&x), Precondition::Checked, cap)?;
        checks.push(CheckRecord::le("first area cover bound", first.cost.clone(), first.bound.clone()));

        let f_first = f.residual(&edges_of(edges, &first.edges));
        let union = positive_union(&f_first, k_f, cap)?;
        let union_size = union.union(r).len();
        let union_bound = r.len() * growth;
        if union_size > union_bound {
            return Err(CoverError::assertion(
                "growth bound",
                format!("|U ∪ R_{index}| = {union_size} exceeds |R_{index}|·{growth} = {union_bound}"),
            ));
        }
        checks.push(CheckRecord::le("growth bound", q(union_size), q(union_bound)));

        let mut r_next = r;
        let mut certificates = 0;
        let (second, j, rounded, tau_residual) = loop {
            if ground.complement(r_next).len() < need {
                break 'outer;
            }
            let second = area_cover(edges, f, ground.complement(r_next), Some(&x), Precondition::Checked, cap)?;
            let j: BTreeSet<usize> = first.edges.union(&second.edges).copied().collect();
            let h = f.residual(&edges_of(edges, &j));
            let rest = without_ids(edges, &j);
            match skew_cover(&rest, &h, cap)? {
                SkewOutcome::Cover(c) => {
                    let tau_h = c.lp_value.clone();
                    break (second, j, c, tau_h);
                }
                SkewOutcome::Failure(cert) => {
                    certificates += 1;
                    let a = cert.a.inner();
                    if !cert.normalized {
                        return Err(CoverError::assertion(
                            "certificate normalization",
                            format!("pair {:?}, {:?} could not be normalized", cert.a, cert.b),
                        ));
                    }
                    if !a.is_subset(union) {
                        return Err(CoverError::assertion(
                            "certificate inside U",
                            format!("{a:?} is not inside U(f^I, k_f) = {union:?}"),
                        ));
                    }
                    if a.is_subset(r_next) {
                        return Err(CoverError::assertion(
                            "certificate grows R",
                            format!("{a:?} already inside {r_next:?}"),
                        ));
                    }
                    r_next = r_next.union(a);
                }
            }
        };

        let part_next = cost_partition(&x, r_next);
        checks.push(CheckRecord::le(
            "second area cover bound",
            second.cost.clone(),
            &part_next.delta + &two * &part_next.gamma,
        ));
        checks.push(CheckRecord::le("residual LP value", tau_residual.clone(), tau.clone()));
        checks.push(CheckRecord::le("rounding cost", rounded.cost.clone(), &two * &tau_residual));
        let cost_j = cost_of_ids(edges, &j);
        report.iterations.push(IterationRecord {
            index,
            r: r.to_vec(),
            r_next: r_next.to_vec(),
            cost_first: first.cost.clone(),
            cost_second: second.cost.clone(),
            cost_j: cost_j.clone(),
            cost_f: rounded.cost.clone(),
            tau_residual,
            gamma: part.gamma,
            delta: part.delta,
            gamma_bar: part.gamma_bar,
            certificates,
            union_size,
            union_bound,
            j: j.clone(),
            f: rounded.edges.clone(),
        });
        done.push(Completed { j, f: rounded.edges, cost_j: cost_j.clone(), cost_f: rounded.cost });
        if r_next == r {
            checks.push(CheckRecord::le("early exit pair cost", cost_j, &two * &tau));
            early_exit = true;
            break;
        }
        r = r_next;
    }

    let t = done.len();
    report.iterations_completed = t;
    if t == 0 {
        report.no_guarantee = true;
        let (ids, name) = match skew_cover(edges, f, cap)? {
            SkewOutcome::Cover(c) => {
                checks.push(CheckRecord::le("rounding cost", c.cost.clone(), &two * &c.lp_value));
                (c.edges, "iterative rounding")
            }
            SkewOutcome::Failure(_) => (relaxed_rounding(edges, f, cap)?.edges, "relaxed rounding"),
        };
        report.fallback = Some(name.to_string());
        report.solution = ids;
    } else {
        report.no_guarantee = t < ell && !early_exit;
        let total: BigRational = done.iter().map(|c| &c.cost_j).sum();
        checks.push(CheckRecord::le("pair costs telescope", total, &two * &tau * q(t + 1)));
        let (best, chosen) =
            done.iter().enumerate().min_by(|a, b| a.1.cost_j.cmp(&b.1.cost_j).then(a.0.cmp(&b.0))).expect("t > 0");
        let avg_bound =
            &two * &tau * (BigRational::from_integer(1.into()) + BigRational::new(1.into(), (t as i64).into()));
        checks.push(CheckRecord::le("cheapest pair cover", chosen.cost_j.clone(), avg_bound));
        checks.push(CheckRecord::le(
            "final cost for completed iterations",
            &chosen.cost_j + &chosen.cost_f,
            ratio_bound(t) * &tau,
        ));
        report.chosen_iteration = Some(best + 1);
        report.solution = chosen.j.union(&chosen.f).copied().collect();
    }
    report.cost = cost_of_ids(edges, &report.solution);
    if !report.no_guarantee {
        checks.push(CheckRecord::le("ratio bound", report.cost.clone(), &report.ratio_bound * &tau));
    }
    let leftover = f.residual(&edges_of(edges, &report.solution)).positive_bisets(cap)?;
    checks.push(CheckRecord::fact(
        "solution covers f",
        leftover.is_empty(),
        leftover.first().map(|(b, v)| format!("{b:?} still needs {v}")).unwrap_or_default(),
    ));
    report.checks = checks;
    if let Some(c) = report.failed_checks().next() {
        return Err(CoverError::assertion(&c.name, format!("{:?} > {:?} {}", c.lhs, c.rhs, c.detail)));
    }
    Ok(report)
}
