//! Ground-truth checks: vertex connectivity by max-flow, minimum node cuts
//! as bisets, and certification of solver output.

use std::collections::{BTreeSet, VecDeque};

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::bisets::{all_bisets, Biset, BisetError, GroundSet, NodeSet};
use crate::covers::{CheckRecord, CoverReport};
use crate::instance::Instance;

/// Undirected simple graph on nodes `0..n` as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    ground: GroundSet,
    adj: Vec<NodeSet>,
}

impl SimpleGraph {
    pub fn new(ground: GroundSet) -> Self {
        SimpleGraph { ground, adj: vec![NodeSet::EMPTY; ground.n()] }
    }

    pub fn from_edges(ground: GroundSet, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(ground);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// The subgraph of `inst` formed by the given edge ids.
    pub fn from_instance(inst: &Instance, ids: &BTreeSet<usize>) -> Self {
        Self::from_edges(inst.ground(), ids.iter().map(|&id| (inst.edges()[id].u, inst.edges()[id].v)))
    }

    /// The subgraph of all finite-cost edges.
    pub fn finite_part(inst: &Instance) -> Self {
        Self::from_edges(inst.ground(), inst.finite_edges().iter().map(|e| (e.edge.u, e.edge.v)))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n() && v < self.n(), "bad edge {u}-{v}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Edges with one end in `inner(b)` and the other in its co-set.
    pub fn cut_size(&self, b: &Biset) -> usize {
        b.inner().iter().map(|u| self.adj[u].intersection(b.co_set()).len()).sum()
    }
}

/// Maximum number of internally disjoint `s`–`t` paths (a direct edge counts
/// as one path) together with a biset `A` with `s ∈ A`, `t ∈ A*` and
/// `|∂A| + |δ(A)|` equal to that number.
pub fn st_connectivity(g: &SimpleGraph, s: usize, t: usize) -> (usize, Biset) {
    assert!(s != t, "st_connectivity needs distinct nodes");
    let n = g.n();
    let big = n as i32 + 1;
    let (vin, vout) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let size = 2 * n;
    let mut cap = vec![vec![0i32; size]; size];
    for v in 0..n {
        cap[vin(v)][vout(v)] = if v == s || v == t { big } else { 1 };
    }
    for (u, v) in g.edges() {
        cap[vout(u)][vin(v)] = 1;
        cap[vout(v)][vin(u)] = 1;
    }
    let (source, sink) = (vin(s), vin(t));
    let mut flow = 0;
    loop {
        let parent = bfs(&cap, source);
        if parent[sink].is_none() {
            break;
        }
        let mut v = sink;
        while v != source {
            let u = parent[v].unwrap();
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
    let reached = bfs(&cap, source);
    let seen = |x: usize| x == source || reached[x].is_some();
    let inner: NodeSet = (0..n).filter(|&v| seen(vin(v)) && seen(vout(v))).collect();
    let outer: NodeSet = (0..n).filter(|&v| seen(vin(v))).collect();
    let witness = g.ground().biset(inner, outer);
    debug_assert_eq!(witness.boundary().len() + g.cut_size(&witness), flow);
    (flow, witness)
}

fn bfs(cap: &[Vec<i32>], source: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; cap.len()];
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for (v, &c) in cap[u].iter().enumerate() {
            if c > 0 && v != source && parent[v].is_none() {
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// The same minimum as [`st_connectivity`], by enumerating every biset.
pub fn st_connectivity_by_bisets(g: &SimpleGraph, s: usize, t: usize, cap: usize) -> Result<usize, BisetError> {
    g.ground().check_cap(cap)?;
    Ok(all_bisets(g.ground())
        .filter(|b| b.inner().contains(s) && b.co_set().contains(t))
        .map(|b| b.boundary().len() + g.cut_size(&b))
        .min()
        .expect("({s}, V - {t}) qualifies"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityCertificate {
    /// Minimum path count over the pairs examined.
    pub k_achieved: usize,
    /// A biset realizing `k_achieved`, if any pair was examined.
    pub witness_cut: Option<Biset>,
    pub pair: Option<(usize, usize)>,
}

/// Whether every pair of nodes is joined by `k` internally disjoint paths.
///
/// By default node 0 is tested against every other node, plus every
/// non-adjacent pair; `strict` tests all pairs, which makes `k_achieved` the
/// exact connectivity.
pub fn is_k_connected(g: &SimpleGraph, k: usize, strict: bool) -> (bool, ConnectivityCertificate) {
    let n = g.n();
    let mut cert = ConnectivityCertificate { k_achieved: n.saturating_sub(1), witness_cut: None, pair: None };
    let mut pairs = BTreeSet::new();
    for s in 0..n {
        for t in s + 1..n {
            if strict || s == 0 || !g.has_edge(s, t) {
                pairs.insert((s, t));
            }
        }
    }
    for (s, t) in pairs {
        let (count, witness) = st_connectivity(g, s, t);
        if cert.witness_cut.is_none() || count < cert.k_achieved {
            cert = ConnectivityCertificate { k_achieved: count, witness_cut: Some(witness), pair: Some((s, t)) };
        }
        if count < k && !strict {
            break;
        }
    }
    (n > k && cert.k_achieved >= k, cert)
}

/// `|δ(A)| ≥ k − |∂A|` for every proper biset, by enumeration; `None` when
/// it holds, else the first violated biset.
pub fn biset_connectivity_violation(g: &SimpleGraph, k: usize, cap: usize) -> Result<Option<Biset>, BisetError> {
    g.ground().check_cap(cap)?;
    Ok(all_bisets(g.ground()).filter(|b| b.is_proper()).find(|b| g.cut_size(b) + b.boundary().len() < k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

/// Re-verify a reported solution against the instance without rerunning the
/// solver: finite edges only, k-connected, within the ratio bound when the
/// guarantee applies, and no cheaper than the LP value.
pub fn certify_solution(inst: &Instance, k: usize, ids: &BTreeSet<usize>, report: &CoverReport) -> Certification {
    let mut checks = Vec::new();
    let forbidden: Vec<usize> = ids.iter().copied().filter(|&id| !inst.is_finite(id)).collect();
    checks.push(CheckRecord::fact(
        "finite edges only",
        forbidden.is_empty(),
        format!("forbidden or unknown ids {forbidden:?}"),
    ));
    if !forbidden.is_empty() {
        return Certification { passed: false, checks };
    }
    let g = SimpleGraph::from_instance(inst, ids);
    let (ok, cert) = is_k_connected(&g, k, false);
    let detail = match (&cert.witness_cut, cert.pair) {
        (Some(b), Some((s, t))) if !ok => format!("pair ({s}, {t}) has {} paths; cut {b:?}", cert.k_achieved),
        _ => String::new(),
    };
    checks.push(CheckRecord::fact("k-connected", ok, detail));
    let cost = inst.cost_of(ids).expect("ids checked finite");
    if !report.no_guarantee {
        checks.push(CheckRecord::le("cost within ratio bound", cost.clone(), &report.ratio_bound * &report.tau));
    }
    checks.push(CheckRecord::le("cost at least LP value", report.tau.clone(), cost.clone()));
    checks.push(CheckRecord::fact(
        "reported cost matches",
        cost == report.cost,
        format!("recomputed {cost}, reported {}", report.cost),
    ));
    Certification { passed: checks.iter().all(|c| c.passed), checks }
}

/// Cost of `ids` in `inst`, for callers holding only a report.
pub fn solution_cost(inst: &Instance, ids: &BTreeSet<usize>) -> Option<BigRational> {
    inst.cost_of(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisets::DEFAULT_ENUMERATION_CAP as CAP;

    fn ground(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(ground(n));
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(ground(n), (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn k4_pairs_have_three_paths() {
        let g = complete(4);
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    let (c, w) = st_connectivity(&g, s, t);
                    assert_eq!(c, 3);
                    assert!(w.inner().contains(s) && w.co_set().contains(t));
                    assert_eq!(w.boundary().len() + g.cut_size(&w), 3);
                }
            }
        }
    }

    #[test]
    fn path_endpoints_have_one_path() {
        let g = SimpleGraph::from_edges(ground(3), [(0, 1), (1, 2)]);
        assert_eq!(st_connectivity(&g, 0, 2).0, 1);
    }

    #[test]
    fn disconnected_pair_has_void_boundary_witness() {
        let g = SimpleGraph::from_edges(ground(4), [(0, 1), (2, 3)]);
        let (c, w) = st_connectivity(&g, 0, 3);
        assert_eq!(c, 0);
        assert!(w.boundary().is_empty());
        assert_eq!(g.cut_size(&w), 0);
    }

    #[test]
    fn cycles_are_two_but_not_three_connected() {
        let g = cycle(5);
        assert!(is_k_connected(&g, 2, false).0);
        let (ok, cert) = is_k_connected(&g, 3, true);
        assert!(!ok);
        assert_eq!(cert.k_achieved, 2);
        let w = cert.witness_cut.unwrap();
        assert_eq!(w.boundary().len() + g.cut_size(&w), 2);
    }

    #[test]
    fn complete_graphs() {
        for n in 2..=6 {
            let g = complete(n);
            for k in 1..n {
                assert!(is_k_connected(&g, k, false).0, "K{n} k={k}");
            }
            assert!(!is_k_connected(&g, n, false).0);
            assert!(!is_k_connected(&g, n + 1, true).0);
        }
    }

    #[test]
    fn flow_matches_enumeration_on_small_graphs() {
        let graphs = [
            cycle(5),
            complete(4),
            SimpleGraph::from_edges(ground(5), [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]),
        ];
        for g in &graphs {
            for s in 0..g.n() {
                for t in 0..g.n() {
                    if s != t {
                        assert_eq!(st_connectivity(g, s, t).0, st_connectivity_by_bisets(g, s, t, CAP).unwrap());
                    }
                }
            }
            for k in 1..=4 {
                let flow = is_k_connected(g, k, false).0;
                let bisets = biset_connectivity_violation(g, k, CAP).unwrap().is_none();
                assert_eq!(flow, bisets && g.n() > k);
            }
        }
    }

    #[test]
    fn fixed_node_plus_nonadjacent_pairs_agree_with_strict() {
        let g = SimpleGraph::from_edges(ground(6), [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 3), (1, 4)]);
        for k in 1..=3 {
            assert_eq!(is_k_connected(&g, k, false).0, is_k_connected(&g, k, true).0);
        }
    }
}
