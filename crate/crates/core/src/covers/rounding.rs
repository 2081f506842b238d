//! Iterative LP rounding for covering biset functions.
//!
//! Each round solves the LP of the current residual over the unused edges
//! and takes the edge with the largest value, provided it is at least one
//! half. When no such edge exists the residual must contain a pair of
//! positive bisets violating both the supermodular and the co-supermodular
//! inequality, which is returned as a [`FailureCertificate`].

use std::collections::BTreeSet;

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use super::CoverError;
use crate::bisets::{Biset, Edge, IndependenceWitness};
use crate::functions::{co_supermodular_slack, supermodular_slack, BisetFunction, DeclaredClass, ValueTable};
use crate::instance::CostedEdge;
use crate::lp::{build_biset_lp, solve_lp, Orientation};

/// Two positive bisets of a residual of `h` violating both inequalities.
///
/// When `h` is symmetric and the pair independent it is normalized so that
/// `inner(a) ⊆ ∂b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCertificate {
    pub a: Biset,
    pub b: Biset,
    pub value_a: i64,
    pub value_b: i64,
    /// `h(a∩b) + h(a∪b) − h(a) − h(b)`, negative.
    pub supermodular_slack: i64,
    /// `h(a∖b) + h(b∖a) − h(a) − h(b)`, negative.
    pub co_supermodular_slack: i64,
    /// Edge ids rounded before the stall; values above are for `h` minus these.
    pub partial: BTreeSet<usize>,
    /// Containment that made the original pair independent, if any.
    pub witness: Option<IndependenceWitness>,
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundedCover {
    pub edges: BTreeSet<usize>,
    pub cost: BigRational,
    /// LP value of the input function over the input edges.
    pub lp_value: BigRational,
    pub steps: usize,
    /// Rounds that had to take an edge below one half (relaxed mode only).
    pub stalled_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkewOutcome {
    Cover(RoundedCover),
    Failure(FailureCertificate),
}

/// Cover `h` with cost at most `2τ(h)`, or explain why rounding stalled.
pub fn skew_cover(edges: &[CostedEdge], h: &BisetFunction, cap: usize) -> Result<SkewOutcome, CoverError> {
    match round(edges, h, cap, false)? {
        Rounded::Done(cover) => {
            let bound = &cover.lp_value * BigRational::from_integer(2.into());
            if cover.cost > bound {
                return Err(CoverError::assertion(
                    "rounding cost",
                    format!("c(F) = {} exceeds 2τ(h) = {bound}", cover.cost),
                ));
            }
            Ok(SkewOutcome::Cover(cover))
        }
        Rounded::Stalled { residual, partial } => Ok(SkewOutcome::Failure(certificate(h, &residual, partial, cap)?)),
    }
}

/// Rounding that never stalls: when every value is below one half it takes
/// the largest anyway. Always returns a cover, with no cost guarantee.
pub fn relaxed_rounding(edges: &[CostedEdge], h: &BisetFunction, cap: usize) -> Result<RoundedCover, CoverError> {
    match round(edges, h, cap, true)? {
        Rounded::Done(cover) => Ok(cover),
        Rounded::Stalled { .. } => unreachable!("relaxed rounding never stalls"),
    }
}

enum Rounded {
    Done(RoundedCover),
    Stalled { residual: BisetFunction, partial: BTreeSet<usize> },
}

fn round(edges: &[CostedEdge], h: &BisetFunction, cap: usize, relaxed: bool) -> Result<Rounded, CoverError> {
    let orientation = match edges.first() {
        Some(e) if e.edge.oriented => Orientation::Directed,
        _ => Orientation::Undirected,
    };
    let half = BigRational::new(1.into(), 2.into());
    let mut available = edges.to_vec();
    let mut taken: Vec<Edge> = Vec::new();
    let mut ids = BTreeSet::new();
    let mut cost = BigRational::zero();
    let mut lp_value = None;
    let mut stalled_steps = 0;
    loop {
        let residual = h.residual(&taken);
        let lp = build_biset_lp(&available, &residual, orientation, cap)?;
        if lp.constraints.is_empty() {
            break;
        }
        let x = solve_lp(&lp)?;
        lp_value.get_or_insert_with(|| x.value.clone());
        let pick = (0..available.len())
            .max_by(|&i, &j| x.x[i].cmp(&x.x[j]).then(available[j].edge.id.cmp(&available[i].edge.id)))
            .expect("a positive demand has a covering edge");
        if x.x[pick] < half {
            if !relaxed {
                return Ok(Rounded::Stalled { residual, partial: ids });
            }
            stalled_steps += 1;
        }
        let e = available.remove(pick);
        cost += &e.cost;
        ids.insert(e.edge.id);
        taken.push(e.edge);
    }
    Ok(Rounded::Done(RoundedCover {
        steps: ids.len(),
        edges: ids,
        cost,
        lp_value: lp_value.unwrap_or_else(BigRational::zero),
        stalled_steps,
    }))
}

/// First positive pair (in enumeration order) of `residual` violating both
/// inequalities.
fn certificate(
    h: &BisetFunction,
    residual: &BisetFunction,
    partial: BTreeSet<usize>,
    cap: usize,
) -> Result<FailureCertificate, CoverError> {
    let table = ValueTable::new(residual, cap)?;
    let val = |b: &Biset| table.get(b);
    let positive: Vec<Biset> = residual.positive_bisets(cap)?.into_iter().map(|(b, _)| b).collect();
    let found = positive.iter().enumerate().find_map(|(i, a)| {
        positive[i + 1..]
            .iter()
            .find(|b| supermodular_slack(&val, a, b) < 0 && co_supermodular_slack(&val, a, b) < 0)
            .map(|b| (*a, *b))
    });
    let Some((a, b)) = found else {
        return Err(CoverError::assertion(
            "rounding stall",
            "no edge has value at least 1/2 yet the residual is positively skew-supermodular",
        ));
    };
    let witness = a.relation(&b).witness;
    let independence_expected = h.declared_symmetric() && h.declared_class() == DeclaredClass::CrossingSupermodular;
    if independence_expected && witness.is_none() {
        return Err(CoverError::assertion(
            "certificate independence",
            format!("violating pair {a:?}, {b:?} is not independent"),
        ));
    }
    let (a, b, normalized) = match witness {
        Some(IndependenceWitness::InnerAInBoundaryB) => (a, b, true),
        Some(IndependenceWitness::InnerBInBoundaryA) => (b, a, true),
        Some(IndependenceWitness::CoSetAInBoundaryB) if residual.declared_symmetric() => (a.co_biset(), b, true),
        Some(IndependenceWitness::CoSetBInBoundaryA) if residual.declared_symmetric() => (b.co_biset(), a, true),
        _ => (a, b, false),
    };
    let cert = FailureCertificate {
        a,
        b,
        value_a: val(&a),
        value_b: val(&b),
        supermodular_slack: supermodular_slack(&val, &a, &b),
        co_supermodular_slack: co_supermodular_slack(&val, &a, &b),
        partial,
        witness,
        normalized,
    };
    if normalized {
        debug_assert!(cert.a.inner().is_subset(cert.b.boundary()));
        if cert.value_a <= 0 || cert.supermodular_slack >= 0 || cert.co_supermodular_slack >= 0 {
            return Err(CoverError::assertion(
                "certificate normalization",
                format!("normalized pair {a:?}, {b:?} no longer violates both inequalities"),
            ));
        }
    }
    Ok(cert)
}
