use std::collections::BTreeSet;

use num::BigRational;

use kcs_core::bisets::{NodeSet, DEFAULT_ENUMERATION_CAP as CAP};
use kcs_core::covers::{brute_force_opt, growing_cover, ratio_bound, solve_kcs, CoverError, SolverConfig};
use kcs_core::functions::BisetFunction;
use kcs_core::instance::{Cost, Instance, InstanceEdge};
use kcs_core::verify::{certify_solution, is_k_connected, SimpleGraph};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn cheap_cycle_beats_expensive_chords() {
    let mut triples = vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 0, 1)];
    triples.extend([(0, 3, 9), (1, 5, 9), (2, 6, 9)]);
    let inst = Instance::from_triples(7, 2, &triples).unwrap();
    let rep = solve_kcs(&inst, &SolverConfig::default()).unwrap();
    assert_eq!(rep.cost, q(7));
    assert_eq!(rep.solution, (0..7).collect::<BTreeSet<_>>());
    assert!(certify_solution(&inst, 2, &rep.solution, &rep).passed);
}

#[test]
fn forbidden_pairs_are_never_used() {
    // K6 where every pair touching node 0 except two is forbidden.
    let mut edges = Vec::new();
    for u in 0..6 {
        for v in u + 1..6 {
            let cost = if u == 0 && v > 2 { Cost::Infinite } else { Cost::from(1 + (u + v) as i64 % 3) };
            edges.push(InstanceEdge { u, v, cost });
        }
    }
    let inst = Instance::new(6, 2, edges).unwrap();
    let rep = solve_kcs(&inst, &SolverConfig::default()).unwrap();
    assert!(rep.solution.iter().all(|&id| inst.is_finite(id)));
    assert!(is_k_connected(&SimpleGraph::from_instance(&inst, &rep.solution), 2, true).0);
}

#[test]
fn k8_matches_brute_force_within_the_ratio() {
    let inst = Instance::complete(8, 2).unwrap();
    let rep = solve_kcs(&inst, &SolverConfig { strict_connectivity: true, ..SolverConfig::default() }).unwrap();
    assert_eq!(rep.ell, 1);
    assert_eq!(rep.tau, q(8));
    assert!(rep.cost <= ratio_bound(1) * &rep.tau);
    // The Hamiltonian cycle is optimal for unit costs.
    assert!(rep.cost >= q(8));
    assert!(rep.all_checks_passed());
}

#[test]
fn every_initial_area_set_yields_a_checked_cover() {
    let inst = Instance::from_triples(
        7,
        2,
        &[
            (0, 1, 3),
            (1, 2, 1),
            (2, 3, 4),
            (3, 4, 1),
            (4, 5, 5),
            (5, 6, 2),
            (6, 0, 6),
            (0, 3, 2),
            (1, 4, 7),
            (2, 5, 1),
            (3, 6, 3),
            (0, 5, 2),
        ],
    )
    .unwrap();
    let edges = inst.finite_edges();
    let f = BisetFunction::kcs(inst.ground(), 2);
    let opt: BigRational = brute_force_opt(&edges, &f, 16, CAP).unwrap().iter().map(|e| &e.cost).sum();
    for mask in 0u32..1 << 7 {
        let r = NodeSet(mask);
        if r.len() != 3 {
            continue;
        }
        let rep = growing_cover(&edges, &f, r, 1, &SolverConfig::default()).unwrap();
        assert!(rep.all_checks_passed(), "R = {r:?}");
        assert!(rep.cost >= opt);
        assert!(rep.cost <= ratio_bound(1) * &rep.tau, "R = {r:?}");
    }
}

#[test]
fn disconnected_input_is_reported_infeasible() {
    let inst =
        Instance::from_triples(6, 2, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)]).unwrap();
    match solve_kcs(&inst, &SolverConfig::default()) {
        Err(e) => assert!(e.is_infeasible(), "{e}"),
        Ok(rep) => panic!("expected infeasibility, got {rep:?}"),
    }
}

#[test]
fn too_large_ground_sets_are_refused() {
    let inst = Instance::complete(6, 2).unwrap();
    let cfg = SolverConfig { enumeration_cap: 5, ..SolverConfig::default() };
    assert!(matches!(solve_kcs(&inst, &cfg), Err(CoverError::Domain(_))));
}
