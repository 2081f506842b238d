//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisets::GroundSet;
use crate::instance::{Instance, InstanceEdge};
use crate::verify::{is_k_connected, SimpleGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random k-connected instance on `n` nodes with at most `max_edges`
/// finite edges (integer costs in `1..=max_cost`); the remaining pairs are
/// omitted. Returns `None` if no such graph was found in `attempts` draws.
pub fn random_feasible_instance(
    rng: &mut impl Rng,
    n: usize,
    k: usize,
    max_edges: usize,
    max_cost: i64,
    attempts: usize,
) -> Option<Instance> {
    let ground = GroundSet::new(n).ok()?;
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let max_edges = max_edges.min(pairs.len());
    let min_edges = (n * k).div_ceil(2);
    if min_edges > max_edges || k >= n {
        return None;
    }
    for _ in 0..attempts {
        pairs.shuffle(rng);
        let m = rng.gen_range(min_edges..=max_edges);
        let chosen = &pairs[..m];
        let g = SimpleGraph::from_edges(ground, chosen.iter().copied());
        if !is_k_connected(&g, k, false).0 {
            continue;
        }
        let mut chosen = chosen.to_vec();
        chosen.sort_unstable();
        let edges =
            chosen.into_iter().map(|(u, v)| InstanceEdge { u, v, cost: rng.gen_range(1..=max_cost).into() }).collect();
        return Instance::new(n, k, edges).ok();
    }
    None
}

/// A random simple graph where each pair is present with probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> SimpleGraph {
    let ground = GroundSet::new(n).expect("valid node count");
    let mut g = SimpleGraph::new(ground);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}
