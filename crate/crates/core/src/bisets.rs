//! Bisets, their algebra, and edge-coverage predicates.
//!
//! A biset `(A, A⁺)` over a ground set `V` models a node cut: `A` is the
//! inner part, `A⁺ ∖ A` the boundary, and `V ∖ A⁺` the co-set. Node sets are
//! bitmasks over dense node ids, so all set algebra is O(1).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard limit imposed by the bitmask representation.
pub const MAX_NODES: usize = 32;

/// Default cap on `n` for anything that enumerates all `3ⁿ` bisets.
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisetError {
    #[error("ground set of {n} nodes exceeds the enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },
    #[error("ground set must have between 1 and {MAX_NODES} nodes, got {0}")]
    GroundSize(usize),
}

/// A set of node ids stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(pub u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        NodeSet(nodes.into_iter().fold(0u32, |m, v| m | (1 << v)))
    }

    pub fn singleton(v: usize) -> Self {
        NodeSet(1 << v)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NodeSet::from_nodes(iter)
    }
}

/// The node universe `V = {0, …, n−1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GroundSet {
    n: u8,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self, BisetError> {
        if n == 0 || n > MAX_NODES {
            return Err(BisetError::GroundSize(n));
        }
        Ok(GroundSet { n: n as u8 })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn all(self) -> NodeSet {
        NodeSet(if self.n as usize == MAX_NODES { u32::MAX } else { (1u32 << self.n) - 1 })
    }

    pub fn complement(self, s: NodeSet) -> NodeSet {
        NodeSet(self.all().0 & !s.0)
    }

    pub fn check_cap(self, cap: usize) -> Result<(), BisetError> {
        if self.n() > cap {
            Err(BisetError::EnumerationCap { n: self.n(), cap })
        } else {
            Ok(())
        }
    }

    pub fn biset(self, inner: NodeSet, outer: NodeSet) -> Biset {
        Biset::new(self, inner, outer)
    }

    /// The biset with no boundary, `(S, S)`.
    pub fn set(self, s: NodeSet) -> Biset {
        Biset::new(self, s, s)
    }
}

/// An ordered pair `(inner, outer)` of node sets with `inner ⊆ outer ⊆ V`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Biset {
    inner: NodeSet,
    outer: NodeSet,
    ground: GroundSet,
}

impl Biset {
    pub fn new(ground: GroundSet, inner: NodeSet, outer: NodeSet) -> Self {
        assert!(inner.is_subset(outer), "inner part {inner:?} not inside outer part {outer:?}");
        assert!(outer.is_subset(ground.all()), "outer part {outer:?} outside the ground set");
        Biset { inner, outer, ground }
    }

    #[inline]
    pub fn inner(&self) -> NodeSet {
        self.inner
    }

    #[inline]
    pub fn outer(&self) -> NodeSet {
        self.outer
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn boundary(&self) -> NodeSet {
        self.outer.difference(self.inner)
    }

    /// `V ∖ outer`.
    #[inline]
    pub fn co_set(&self) -> NodeSet {
        self.ground.complement(self.outer)
    }

    pub fn co_biset(&self) -> Biset {
        Biset { inner: self.co_set(), outer: self.ground.complement(self.inner), ground: self.ground }
    }

    #[inline]
    pub fn is_void(&self) -> bool {
        self.inner.is_empty()
    }

    #[inline]
    pub fn is_co_void(&self) -> bool {
        self.outer == self.ground.all()
    }

    #[inline]
    pub fn is_proper(&self) -> bool {
        !self.is_void() && !self.is_co_void()
    }

    /// Componentwise containment: `inner ⊆ other.inner` and `outer ⊆ other.outer`.
    pub fn is_sub_biset(&self, other: &Biset) -> bool {
        self.inner.is_subset(other.inner) && self.outer.is_subset(other.outer)
    }

    pub fn meet(&self, other: &Biset) -> Biset {
        debug_assert_eq!(self.ground, other.ground);
        Biset {
            inner: self.inner.intersection(other.inner),
            outer: self.outer.intersection(other.outer),
            ground: self.ground,
        }
    }

    pub fn join(&self, other: &Biset) -> Biset {
        debug_assert_eq!(self.ground, other.ground);
        Biset { inner: self.inner.union(other.inner), outer: self.outer.union(other.outer), ground: self.ground }
    }

    /// `A ∖ B = (A ∖ B⁺, A⁺ ∖ B)`.
    pub fn diff(&self, other: &Biset) -> Biset {
        debug_assert_eq!(self.ground, other.ground);
        Biset {
            inner: self.inner.difference(other.outer),
            outer: self.outer.difference(other.inner),
            ground: self.ground,
        }
    }

    pub fn intersects(&self, other: &Biset) -> bool {
        !self.inner.intersection(other.inner).is_empty()
    }

    pub fn crosses(&self, other: &Biset) -> bool {
        self.intersects(other) && self.outer.union(other.outer) != self.ground.all()
    }

    pub fn co_crosses(&self, other: &Biset) -> bool {
        !self.diff(other).is_void() && !other.diff(self).is_void()
    }

    pub fn relation(&self, other: &Biset) -> Relation {
        let crossing = self.crosses(other);
        let co_crossing = self.co_crosses(other);
        let witness = IndependenceWitness::find(self, other);
        let independent = !crossing && !co_crossing;
        assert_eq!(independent, witness.is_some(), "independence characterization failed for {self:?} vs {other:?}");
        Relation { crossing, co_crossing, witness }
    }
}

impl fmt::Debug for Biset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.inner, self.outer)
    }
}

/// Which containment certifies that two bisets are independent.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum IndependenceWitness {
    /// `A ⊆ ∂B`
    InnerAInBoundaryB,
    /// `A* ⊆ ∂B`
    CoSetAInBoundaryB,
    /// `B ⊆ ∂A`
    InnerBInBoundaryA,
    /// `B* ⊆ ∂A`
    CoSetBInBoundaryA,
}

impl IndependenceWitness {
    pub fn find(a: &Biset, b: &Biset) -> Option<Self> {
        if a.inner().is_subset(b.boundary()) {
            Some(Self::InnerAInBoundaryB)
        } else if a.co_set().is_subset(b.boundary()) {
            Some(Self::CoSetAInBoundaryB)
        } else if b.inner().is_subset(a.boundary()) {
            Some(Self::InnerBInBoundaryA)
        } else if b.co_set().is_subset(a.boundary()) {
            Some(Self::CoSetBInBoundaryA)
        } else {
            None
        }
    }
}

/// Crossing and co-crossing are reported independently; both may hold.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Relation {
    pub crossing: bool,
    pub co_crossing: bool,
    pub witness: Option<IndependenceWitness>,
}

impl Relation {
    pub fn is_independent(&self) -> bool {
        self.witness.is_some()
    }
}

/// An edge of the host graph. Oriented edges run from `u` (tail) to `v` (head).
///
/// `id` is the index of the originating undirected edge in the instance, so
/// both orientations of a bidirected edge share it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub id: usize,
    pub oriented: bool,
}

impl Edge {
    pub fn undirected(id: usize, u: usize, v: usize) -> Self {
        assert_ne!(u, v, "self-loop on node {u}");
        Edge { u, v, id, oriented: false }
    }

    pub fn arc(id: usize, tail: usize, head: usize) -> Self {
        assert_ne!(tail, head, "self-loop on node {tail}");
        Edge { u: tail, v: head, id, oriented: true }
    }

    pub fn covers(&self, b: &Biset) -> bool {
        let inner = b.inner();
        let co = b.co_set();
        let forward = inner.contains(self.u) && co.contains(self.v);
        if self.oriented {
            forward
        } else {
            forward || (inner.contains(self.v) && co.contains(self.u))
        }
    }
}

pub fn covers(e: &Edge, b: &Biset) -> bool {
    e.covers(b)
}

/// `δ_J(b)`: the edges of `edges` covering `b`.
pub fn delta<'a>(edges: &'a [Edge], b: &Biset) -> Vec<&'a Edge> {
    edges.iter().filter(|e| e.covers(b)).collect()
}

pub fn delta_count(edges: &[Edge], b: &Biset) -> usize {
    edges.iter().filter(|e| e.covers(b)).count()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BisetFilter {
    All,
    Proper,
}

/// Every biset over `ground` with `|∂| ≤ max_boundary`, each exactly once, in
/// lexicographic `(inner, outer)` mask order.
pub fn enumerate_bisets(
    ground: GroundSet,
    max_boundary: usize,
    filter: BisetFilter,
    cap: usize,
) -> Result<impl Iterator<Item = Biset>, BisetError> {
    ground.check_cap(cap)?;
    Ok(BisetIter::new(ground, max_boundary).filter(move |b| match filter {
        BisetFilter::All => true,
        BisetFilter::Proper => b.is_proper(),
    }))
}

/// All `3ⁿ` bisets, uncapped. Callers are expected to have checked the cap.
pub fn all_bisets(ground: GroundSet) -> impl Iterator<Item = Biset> {
    BisetIter::new(ground, usize::MAX)
}

struct BisetIter {
    ground: GroundSet,
    max_boundary: usize,
    inner: u64,
    // Current subset of the complement of `inner` added to form the outer part.
    extra: u32,
    done: bool,
}

impl BisetIter {
    fn new(ground: GroundSet, max_boundary: usize) -> Self {
        BisetIter { ground, max_boundary, inner: 0, extra: 0, done: false }
    }
}

impl Iterator for BisetIter {
    type Item = Biset;

    fn next(&mut self) -> Option<Biset> {
        let all = self.ground.all().0;
        while !self.done {
            let inner = self.inner as u32;
            let comp = all & !inner;
            let extra = self.extra;
            // Advance: next subset of `comp` in increasing numeric order.
            if extra == comp {
                self.inner += 1;
                self.extra = 0;
                if self.inner > all as u64 {
                    self.done = true;
                }
            } else {
                self.extra = (extra.wrapping_sub(comp)) & comp;
            }
            if extra.count_ones() as usize <= self.max_boundary {
                return Some(Biset { inner: NodeSet(inner), outer: NodeSet(inner | extra), ground: self.ground });
            }
        }
        None
    }
}

/// Dense index of a biset in `0..3ⁿ`, for tabulating biset functions.
#[derive(Clone, Debug)]
pub struct BisetIndexer {
    ground: GroundSet,
    inner_weight: Vec<u32>,
    boundary_weight: Vec<u32>,
}

impl BisetIndexer {
    pub fn new(ground: GroundSet, cap: usize) -> Result<Self, BisetError> {
        ground.check_cap(cap)?;
        let n = ground.n();
        let size = 1usize << n;
        let mut inner_weight = vec![0u32; size];
        let mut boundary_weight = vec![0u32; size];
        let pow3: Vec<u32> = (0..n).map(|v| 3u32.pow(v as u32)).collect();
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            inner_weight[mask] = inner_weight[rest] + 2 * pow3[low];
            boundary_weight[mask] = boundary_weight[rest] + pow3[low];
        }
        Ok(BisetIndexer { ground, inner_weight, boundary_weight })
    }

    pub fn len(&self) -> usize {
        3usize.pow(self.ground.n() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, b: &Biset) -> usize {
        (self.inner_weight[b.inner().0 as usize] + self.boundary_weight[b.boundary().0 as usize]) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    // Examples use node labels 1..n; shift to dense ids.
    fn s(labels: &[usize]) -> NodeSet {
        labels.iter().map(|l| l - 1).collect()
    }

    fn b(g: GroundSet, inner: &[usize], outer: &[usize]) -> Biset {
        g.biset(s(inner), s(outer))
    }

    #[test]
    fn boundary_examples() {
        let g = v(4);
        assert_eq!(b(g, &[1], &[1, 2]).boundary(), s(&[2]));
        assert_eq!(b(g, &[1], &[1]).boundary(), NodeSet::EMPTY);
        assert_eq!(g.biset(NodeSet::EMPTY, g.all()).boundary(), g.all());
    }

    #[test]
    fn co_biset_examples() {
        let g = v(4);
        assert_eq!(b(g, &[1], &[1, 2]).co_biset(), b(g, &[3, 4], &[2, 3, 4]));
        assert_eq!(g.set(NodeSet::EMPTY).co_biset(), g.set(g.all()));
        let g2 = v(2);
        assert_eq!(b(g2, &[1], &[1]).co_biset(), b(g2, &[2], &[2]));
    }

    #[test]
    fn algebra_examples() {
        let g = v(4);
        assert_eq!(b(g, &[1, 2], &[1, 2, 3]).meet(&b(g, &[2, 3], &[2, 3, 4])), b(g, &[2], &[2, 3]));
        assert_eq!(b(g, &[1], &[1]).join(&b(g, &[2], &[2])), b(g, &[1, 2], &[1, 2]));
        assert_eq!(b(g, &[1, 2], &[1, 2, 3]).diff(&b(g, &[3], &[3, 4])), b(g, &[1, 2], &[1, 2]));
    }

    #[test]
    fn relation_examples() {
        let g = v(4);
        let r = b(g, &[1, 2], &[1, 2]).relation(&b(g, &[2, 3], &[2, 3]));
        assert!(r.crossing);
        assert!(!r.is_independent());

        let g3 = v(3);
        let r = b(g3, &[1], &[1, 2]).relation(&b(g3, &[2], &[1, 2]));
        assert!(!r.crossing && !r.co_crossing);
        assert_eq!(r.witness, Some(IndependenceWitness::InnerAInBoundaryB));

        // Outer parts cover V, so not crossing; both differences are non-void.
        let r = b(g, &[1, 2], &[1, 2]).relation(&b(g, &[2, 3, 4], &[2, 3, 4]));
        assert!(!r.crossing);
        assert!(r.co_crossing);
        assert!(!r.is_independent());
    }

    #[test]
    fn covers_examples() {
        let g = v(3);
        let a = b(g, &[1], &[1, 2]);
        assert!(Edge::undirected(0, 0, 2).covers(&a));
        assert!(!Edge::undirected(0, 0, 1).covers(&a));
        assert!(!Edge::arc(0, 2, 0).covers(&a));
        assert!(Edge::arc(0, 0, 2).covers(&a));
    }

    #[test]
    fn delta_examples() {
        let g = v(3);
        let j = [Edge::undirected(0, 0, 1), Edge::undirected(1, 0, 2)];
        let d = delta(&j, &b(g, &[1], &[1, 2]));
        assert_eq!(d, vec![&j[1]]);
        assert!(delta(&[], &b(g, &[1], &[1, 2])).is_empty());

        let g4 = v(4);
        let star: Vec<Edge> = (1..4).map(|t| Edge::undirected(t, 0, t)).collect();
        assert_eq!(delta(&star, &b(g4, &[1], &[1])).len(), 3);
    }

    #[test]
    fn enumeration_examples() {
        let all: Vec<_> = enumerate_bisets(v(1), usize::MAX, BisetFilter::All, 14).unwrap().collect();
        let g = v(1);
        assert_eq!(all, vec![g.set(NodeSet::EMPTY), g.biset(NodeSet::EMPTY, NodeSet(1)), g.set(NodeSet(1))]);
        assert_eq!(enumerate_bisets(v(2), usize::MAX, BisetFilter::Proper, 14).unwrap().count(), 2);
        let flat: Vec<_> = enumerate_bisets(v(3), 0, BisetFilter::All, 14).unwrap().collect();
        assert_eq!(flat.len(), 8);
        assert!(flat.iter().all(|b| b.boundary().is_empty()));
    }

    #[test]
    fn enumeration_is_complete_and_ordered() {
        for n in 1..=6 {
            let g = v(n);
            let all: Vec<_> = all_bisets(g).collect();
            assert_eq!(all.len(), 3usize.pow(n as u32));
            for w in all.windows(2) {
                assert!((w[0].inner().0, w[0].outer().0) < (w[1].inner().0, w[1].outer().0));
            }
            let idx = BisetIndexer::new(g, 14).unwrap();
            let mut seen = vec![false; idx.len()];
            for b in &all {
                let i = idx.index(b);
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert_eq!(
            enumerate_bisets(v(15), 1, BisetFilter::All, 14).err(),
            Some(BisetError::EnumerationCap { n: 15, cap: 14 })
        );
    }

    #[test]
    fn co_biset_is_boundary_preserving_involution() {
        let g = v(4);
        for b in all_bisets(g) {
            assert_eq!(b.co_biset().co_biset(), b);
            assert_eq!(b.co_biset().boundary(), b.boundary());
        }
    }

    #[test]
    fn boundary_modularity_and_coverage_closure() {
        for n in 1..=4 {
            let g = v(n);
            let all: Vec<_> = all_bisets(g).collect();
            let mut edges = Vec::new();
            for u in 0..n {
                for w in 0..n {
                    if u != w {
                        edges.push(Edge::arc(0, u, w));
                        if u < w {
                            edges.push(Edge::undirected(0, u, w));
                        }
                    }
                }
            }
            for a in &all {
                for c in &all {
                    let (m, j) = (a.meet(c), a.join(c));
                    let (d1, d2) = (a.diff(c), c.diff(a));
                    let lhs = a.boundary().len() + c.boundary().len();
                    assert_eq!(lhs, m.boundary().len() + j.boundary().len());
                    assert_eq!(lhs, d1.boundary().len() + d2.boundary().len());
                    for e in &edges {
                        let hits_ac = e.covers(a) || e.covers(c);
                        if e.covers(&m) || e.covers(&j) {
                            assert!(hits_ac);
                        }
                        if !e.oriented && (e.covers(&d1) || e.covers(&d2)) {
                            assert!(hits_ac);
                        }
                    }
                }
            }
        }
    }
}
