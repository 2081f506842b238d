//! Statistics of explicit biset families and the weak posi-uncrossability check.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::classify::{Counterexample, Verdict};
use crate::bisets::{Biset, NodeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyStats {
    /// Largest inner part.
    pub p: usize,
    /// Largest boundary.
    pub q: usize,
    /// Maximum number of members with pairwise disjoint inner parts.
    pub nu: usize,
    /// Union of inner parts.
    pub union: NodeSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub stats: FamilyStats,
    pub weakly_posi_uncrossable: Verdict,
    /// `ν(2q(p−1) + p)`.
    pub union_bound: usize,
    /// Whether `|U|` respects the bound; only meaningful for uncrossable families.
    pub union_bound_holds: Option<bool>,
}

pub fn family_stats(family: &[Biset]) -> FamilyStats {
    let p = family.iter().map(|b| b.inner().len()).max().unwrap_or(0);
    let q = family.iter().map(|b| b.boundary().len()).max().unwrap_or(0);
    let union = family.iter().fold(NodeSet::EMPTY, |u, b| u.union(b.inner()));
    let inners: Vec<NodeSet> = family.iter().map(|b| b.inner()).collect();
    FamilyStats { p, q, nu: max_disjoint_inner_parts(&inners), union }
}

/// Exact maximum number of pairwise disjoint non-empty sets among `sets`.
///
/// Memoized recursion over the set of still-available nodes: either the
/// lowest available node is left unused, or it is covered by one of the sets
/// containing it.
pub fn max_disjoint_inner_parts(sets: &[NodeSet]) -> usize {
    let distinct: Vec<NodeSet> =
        sets.iter().copied().filter(|s| !s.is_empty()).collect::<BTreeSet<_>>().into_iter().collect();
    let universe = distinct.iter().fold(NodeSet::EMPTY, |u, s| u.union(*s));
    let mut memo = HashMap::new();
    pack(universe, &distinct, &mut memo)
}

fn pack(avail: NodeSet, sets: &[NodeSet], memo: &mut HashMap<u32, usize>) -> usize {
    if avail.is_empty() {
        return 0;
    }
    if let Some(&v) = memo.get(&avail.0) {
        return v;
    }
    let low = avail.0.trailing_zeros() as usize;
    let rest = NodeSet(avail.0 & (avail.0 - 1));
    let mut best = pack(rest, sets, memo);
    for s in sets {
        if s.contains(low) && s.is_subset(avail) {
            best = best.max(1 + pack(avail.difference(*s), sets, memo));
        }
    }
    memo.insert(avail.0, best);
    best
}

/// For every pair whose two differences are both non-void, one difference
/// must be a member.
pub fn check_weakly_posi_uncrossable(family: &[Biset]) -> Verdict {
    let members: HashSet<Biset> = family.iter().copied().collect();
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let (ab, ba) = (a.diff(b), b.diff(a));
            if !ab.is_void() && !ba.is_void() && !members.contains(&ab) && !members.contains(&ba) {
                return Verdict { holds: false, counterexample: Some(Counterexample { a: *a, b: *b }) };
            }
        }
    }
    Verdict { holds: true, counterexample: None }
}

pub fn analyze_family(family: &[Biset]) -> FamilyReport {
    let stats = family_stats(family);
    let verdict = check_weakly_posi_uncrossable(family);
    let union_bound = stats.nu * (2 * stats.q * stats.p.saturating_sub(1) + stats.p);
    let union_bound_holds = verdict.holds.then_some(stats.union.len() <= union_bound);
    FamilyReport { stats, weakly_posi_uncrossable: verdict, union_bound, union_bound_holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisets::{GroundSet, DEFAULT_ENUMERATION_CAP as CAP};
    use crate::functions::BisetFunction;

    #[test]
    fn singleton_family() {
        let v = GroundSet::new(4).unwrap();
        let r = analyze_family(&[v.set(NodeSet::from_nodes([0]))]);
        assert_eq!(r.stats.p, 1);
        assert_eq!(r.stats.q, 0);
        assert_eq!(r.stats.nu, 1);
        assert_eq!(r.stats.union.len(), 1);
        assert!(r.weakly_posi_uncrossable.holds);
        assert_eq!(r.union_bound, 1);
        assert_eq!(r.union_bound_holds, Some(true));
    }

    #[test]
    fn two_disjoint_singletons() {
        let v = GroundSet::new(4).unwrap();
        let r = analyze_family(&[v.set(NodeSet::from_nodes([0])), v.set(NodeSet::from_nodes([1]))]);
        assert_eq!(r.stats.nu, 2);
        assert_eq!(r.union_bound, 2);
        assert_eq!(r.union_bound_holds, Some(true));
    }

    #[test]
    fn kcs_positive_family_is_uncrossable() {
        let v = GroundSet::new(4).unwrap();
        let fam: Vec<Biset> =
            BisetFunction::kcs(v, 2).positive_bisets(CAP).unwrap().into_iter().map(|(b, _)| b).collect();
        let r = analyze_family(&fam);
        assert!(r.weakly_posi_uncrossable.holds);
        assert_eq!(r.stats.nu, 4);
        assert_eq!(r.union_bound_holds, Some(true));
    }

    #[test]
    fn non_uncrossable_family_is_detected() {
        let v = GroundSet::new(4).unwrap();
        // Differences ({0},{0}) and ({2},{2}) are both non-void and absent.
        let a = v.set(NodeSet::from_nodes([0, 1]));
        let b = v.set(NodeSet::from_nodes([1, 2]));
        let r = analyze_family(&[a, b]);
        assert!(!r.weakly_posi_uncrossable.holds);
        assert_eq!(r.union_bound_holds, None);
    }

    #[test]
    fn disjoint_packing_matches_brute_force() {
        let sets: Vec<NodeSet> = [0b0011, 0b0110, 0b1100, 0b1000, 0b0001, 0b1111].iter().map(|&m| NodeSet(m)).collect();
        let mut best = 0;
        for pick in 0u32..(1 << sets.len()) {
            let chosen: Vec<_> = (0..sets.len()).filter(|i| pick >> i & 1 == 1).collect();
            let disjoint = chosen
                .iter()
                .enumerate()
                .all(|(x, &i)| chosen[x + 1..].iter().all(|&j| sets[i].intersection(sets[j]).is_empty()));
            if disjoint {
                best = best.max(chosen.len());
            }
        }
        assert_eq!(max_disjoint_inner_parts(&sets), best);
    }
}
