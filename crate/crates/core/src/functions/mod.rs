//! Biset functions: the k-connectivity function and the functions derived
//! from it (area, fan, residual), together with exhaustive classifiers.
//!
//! Values are exact integers. Declared metadata is informational only; the
//! classifiers in [`classify`] verify it by enumeration.

mod classify;
mod family;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::bisets::{all_bisets, Biset, BisetError, Edge, GroundSet, NodeSet};

pub use classify::{
    check_independence_free, check_nonpositive_on_co_void, check_positively_intersecting_supermodular,
    check_positively_skew_supermodular, check_skew_unless_independent, classify, ClassReport, Counterexample, Verdict,
};
pub(crate) use classify::{co_supermodular_slack, supermodular_slack, ValueTable};
pub use family::{
    analyze_family, check_weakly_posi_uncrossable, family_stats, max_disjoint_inner_parts, FamilyReport, FamilyStats,
};

type Evaluator = dyn Fn(&Biset) -> i64 + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeclaredClass {
    CrossingSupermodular,
    IntersectingSupermodular,
    PositivelySkew,
    Unknown,
}

/// An evaluation oracle for a biset function plus declared metadata.
#[derive(Clone)]
pub struct BisetFunction {
    name: Arc<str>,
    ground: GroundSet,
    eval: Arc<Evaluator>,
    symmetric: bool,
    class: DeclaredClass,
    // When set, every positive biset has boundary size at most this.
    boundary_hint: Option<usize>,
    max_value: Arc<OnceLock<i64>>,
}

impl fmt::Debug for BisetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BisetFunction")
            .field("name", &self.name)
            .field("n", &self.ground.n())
            .field("symmetric", &self.symmetric)
            .field("class", &self.class)
            .finish()
    }
}

impl BisetFunction {
    pub fn from_fn<F>(name: impl Into<String>, ground: GroundSet, f: F) -> Self
    where
        F: Fn(&Biset) -> i64 + Send + Sync + 'static,
    {
        BisetFunction {
            name: Arc::from(name.into()),
            ground,
            eval: Arc::new(f),
            symmetric: false,
            class: DeclaredClass::Unknown,
            boundary_hint: None,
            max_value: Arc::new(OnceLock::new()),
        }
    }

    pub fn with_declared(mut self, symmetric: bool, class: DeclaredClass) -> Self {
        self.symmetric = symmetric;
        self.class = class;
        self
    }

    /// Promise that positive bisets have `|∂| ≤ bound`. Used only to prune
    /// enumeration; never affects values.
    pub fn with_boundary_hint(mut self, bound: usize) -> Self {
        self.boundary_hint = Some(bound);
        self
    }

    /// `k − |∂A|` on proper bisets, zero elsewhere.
    pub fn kcs(ground: GroundSet, k: usize) -> Self {
        let k_i = k as i64;
        let mut f = Self::from_fn(format!("f_kcs(k={k})"), ground, move |b| f_kcs(k_i, b))
            .with_declared(true, DeclaredClass::CrossingSupermodular);
        f.boundary_hint = Some(k.saturating_sub(1));
        f.max_value.set(if ground.n() >= 2 { k_i } else { 0 }).ok();
        f
    }

    pub fn zero(ground: GroundSet) -> Self {
        Self::from_fn("zero", ground, |_| 0)
            .with_declared(true, DeclaredClass::CrossingSupermodular)
            .with_boundary_hint(0)
    }

    /// `|∂A|`.
    pub fn boundary_size(ground: GroundSet) -> Self {
        Self::from_fn("boundary-size", ground, |b| b.boundary().len() as i64)
            .with_declared(true, DeclaredClass::Unknown)
    }

    /// `|A ∩ R|`.
    pub fn inner_meet(ground: GroundSet, r: NodeSet) -> Self {
        Self::from_fn(format!("inner-meet(R={r:?})"), ground, move |b| b.inner().intersection(r).len() as i64)
    }

    /// The fan function `k − |∂A| − |A ∩ R|`, zeroed on void bisets.
    pub fn fan(ground: GroundSet, k: usize, r: NodeSet) -> Self {
        let k_i = k as i64;
        Self::from_fn(format!("fan(k={k},R={r:?})"), ground, move |b| fan(k_i, r, b))
            .with_declared(false, DeclaredClass::IntersectingSupermodular)
            .with_boundary_hint(k.saturating_sub(1))
    }

    /// The area function `f_R(A) = f(A) − max f · |A ∩ R|`.
    ///
    /// `max f` is recomputed by enumeration for this `f`, floored at zero.
    pub fn area(&self, r: NodeSet) -> Self {
        let base = self.clone();
        let m = self.max_value();
        let mut f = Self::from_fn(format!("area({}, R={r:?})", self.name), self.ground, move |b| {
            base.evaluate(b) - m * b.inner().intersection(r).len() as i64
        });
        f.boundary_hint = self.boundary_hint;
        f
    }

    /// The residual function `f^J(A) = f(A) − |δ_J(A)|`.
    pub fn residual(&self, edges: &[Edge]) -> Self {
        if edges.is_empty() {
            return self.clone();
        }
        let base = self.clone();
        let edges: Arc<[Edge]> = Arc::from(edges);
        let symmetric = self.symmetric && edges.iter().all(|e| !e.oriented);
        let name = format!("{}^J(|J|={})", self.name, edges.len());
        let mut f = Self::from_fn(name, self.ground, move |b| {
            base.evaluate(b) - edges.iter().filter(|e| e.covers(b)).count() as i64
        });
        f.symmetric = symmetric;
        f.class = match self.class {
            // Subtracting a cut function preserves these classes.
            c @ (DeclaredClass::CrossingSupermodular | DeclaredClass::IntersectingSupermodular) => c,
            _ => DeclaredClass::Unknown,
        };
        f.boundary_hint = self.boundary_hint;
        f
    }

    #[inline]
    pub fn evaluate(&self, b: &Biset) -> i64 {
        (self.eval)(b)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn declared_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn declared_class(&self) -> DeclaredClass {
        self.class
    }

    pub fn boundary_hint(&self) -> Option<usize> {
        self.boundary_hint
    }

    /// Maximum value over all bisets, floored at zero.
    pub fn max_value(&self) -> i64 {
        *self.max_value.get_or_init(|| self.candidate_bisets().map(|b| self.evaluate(&b)).max().unwrap_or(0).max(0))
    }

    /// Every biset that could be positive under the boundary hint.
    pub(crate) fn candidate_bisets(&self) -> impl Iterator<Item = Biset> {
        let hint = self.boundary_hint.unwrap_or(usize::MAX);
        all_bisets(self.ground).filter(move |b| b.boundary().len() <= hint)
    }

    /// Positive bisets with their values, in enumeration order.
    pub fn positive_bisets(&self, cap: usize) -> Result<Vec<(Biset, i64)>, BisetError> {
        self.ground.check_cap(cap)?;
        Ok(self
            .candidate_bisets()
            .filter_map(|b| {
                let v = self.evaluate(&b);
                (v > 0).then_some((b, v))
            })
            .collect())
    }
}

pub fn f_kcs(k: i64, b: &Biset) -> i64 {
    if b.is_proper() {
        k - b.boundary().len() as i64
    } else {
        0
    }
}

pub fn fan(k: i64, r: NodeSet, b: &Biset) -> i64 {
    if b.is_void() {
        0
    } else {
        k - b.boundary().len() as i64 - b.inner().intersection(r).len() as i64
    }
}

/// `k_f = 1 + max{|∂A| : f(A) > 0}`; zero with `covered` set when `f ≤ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KValue {
    pub k_f: usize,
    pub covered: bool,
}

pub fn compute_k_f(f: &BisetFunction, cap: usize) -> Result<KValue, BisetError> {
    f.ground().check_cap(cap)?;
    let max_boundary = f.candidate_bisets().filter(|b| f.evaluate(b) > 0).map(|b| b.boundary().len()).max();
    Ok(match max_boundary {
        Some(q) => KValue { k_f: q + 1, covered: false },
        None => KValue { k_f: 0, covered: true },
    })
}

/// `U(f, p)`: union of inner parts of positive bisets with `|A| ≤ p`.
pub fn positive_union(f: &BisetFunction, p: usize, cap: usize) -> Result<NodeSet, BisetError> {
    f.ground().check_cap(cap)?;
    Ok(f.candidate_bisets()
        .filter(|b| b.inner().len() <= p && f.evaluate(b) > 0)
        .fold(NodeSet::EMPTY, |u, b| u.union(b.inner())))
}
