//! The k-connected subgraph pipeline.

use serde::{Deserialize, Serialize};

use super::growing::growing_cover;
use super::{CheckRecord, CoverError, CoverReport, SolverConfig};
use crate::bisets::NodeSet;
use crate::functions::BisetFunction;
use crate::instance::Instance;
use crate::verify::{is_k_connected, SimpleGraph};

/// Iteration budget and whether the size threshold for it was met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllChoice {
    pub ell: usize,
    pub threshold_met: bool,
}

/// Largest `ℓ ≥ 1` whose threshold `threshold(ℓ)` is at most `n`. Thresholds
/// that never grow make `ℓ` unbounded, so it is capped at `n`.
fn largest_ell(n: usize, threshold: impl Fn(u32) -> Option<u128>) -> EllChoice {
    let within = |l: u32| threshold(l).is_some_and(|t| t <= n as u128);
    if !within(1) {
        return EllChoice { ell: 1, threshold_met: false };
    }
    let mut ell = 1;
    while ell < n.max(1) && within(ell as u32 + 1) {
        ell += 1;
    }
    EllChoice { ell, threshold_met: true }
}

/// `ℓ` for the k-connectivity function: `n ≥ k[(k²−1)(2k²−3k+2)^{ℓ−1} + 1]`.
pub fn kcs_ell(k: usize, n: usize) -> EllChoice {
    let k = k as u128;
    largest_ell(n, |l| {
        let growth = 2 * k * k + 2 - 3 * k;
        let power = growth.checked_pow(l - 1)?;
        (k * k - 1).checked_mul(power)?.checked_add(1)?.checked_mul(k)
    })
}

/// `ℓ` for a general symmetric crossing supermodular function with parameter
/// `k_f`: `n ≥ (2k_f−1)[(2k_f²−3k_f+2)^ℓ + 1]`.
pub fn crossing_ell(k_f: usize, n: usize) -> EllChoice {
    let k = k_f as u128;
    if k == 0 {
        return EllChoice { ell: 1, threshold_met: false };
    }
    largest_ell(n, |l| {
        let growth = 2 * k * k + 2 - 3 * k;
        growth.checked_pow(l)?.checked_add(1)?.checked_mul(2 * k - 1)
    })
}

/// The `size` nodes of highest finite degree, ties by lower id, never all of `V`.
pub fn select_r1(inst: &Instance, size: usize) -> NodeSet {
    let deg = inst.finite_degrees();
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    order.into_iter().take(size.min(inst.n().saturating_sub(1))).collect()
}

/// Find a cheap k-connected spanning subgraph of `inst`.
pub fn solve_kcs(inst: &Instance, cfg: &SolverConfig) -> Result<CoverReport, CoverError> {
    let (n, k) = (inst.n(), inst.k());
    if k == 0 {
        return Err(CoverError::Precondition("k must be at least 1".into()));
    }
    if k >= n {
        return Err(CoverError::KTooLarge { k, n });
    }
    inst.ground().check_cap(cfg.enumeration_cap)?;
    let (feasible, cert) = is_k_connected(&SimpleGraph::finite_part(inst), k, cfg.strict_connectivity);
    if !feasible {
        let biset = cert.witness_cut.expect("n > k ≥ 1 means some pair was tested");
        let (s, t) = cert.pair.expect("pair recorded with witness");
        return Err(CoverError::Infeasible {
            biset,
            detail: format!(
                "finite-cost graph has only {} internally disjoint paths between {s} and {t}, need {k}",
                cert.k_achieved
            ),
        });
    }
    let r1 = match cfg.r1 {
        Some(r) => {
            if r.iter().any(|v| v >= n) {
                return Err(CoverError::Precondition(format!("R1 {r:?} has nodes outside 0..{n}")));
            }
            r
        }
        None => select_r1(inst, 2 * k - 1),
    };
    let choice = kcs_ell(k, n);
    let f = BisetFunction::kcs(inst.ground(), k);
    let mut report = growing_cover(&inst.finite_edges(), &f, r1, choice.ell, cfg)?;
    report.no_guarantee |= !choice.threshold_met;

    let g = SimpleGraph::from_instance(inst, &report.solution);
    let (ok, cert) = is_k_connected(&g, k, cfg.strict_connectivity);
    report.checks.push(CheckRecord::fact(
        "solution k-connected",
        ok,
        format!("{} paths between {:?}", cert.k_achieved, cert.pair),
    ));
    if !ok {
        return Err(CoverError::assertion("solution k-connected", format!("witness {:?}", cert.witness_cut)));
    }
    Ok(report)
}
