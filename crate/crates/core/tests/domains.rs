use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wastar_core::domains::generate::{random_pancake, random_routing, random_tile};
use wastar_core::domains::pancake::pancake_successors;
use wastar_core::domains::routing::routing_successors;
use wastar_core::domains::tile::tile_successors;
use wastar_core::domains::{
    gap_k, manhattan, mst_heuristic, GapHeuristic, PancakeProblem, PancakeState, RoutingInstance, RoutingProblem,
    RoutingState, TilePuzzle, TileState,
};
use wastar_core::oracle::{check_admissible, check_consistent, optimal_cost, Verdict};
use wastar_core::{Limits, StateSpace};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Tiles

fn manhattan_reference(width: usize, tiles: &[u8]) -> u32 {
    let mut total = 0;
    for (cell, &t) in tiles.iter().enumerate() {
        if t == 0 {
            continue;
        }
        let (r, c) = ((cell / width) as i32, (cell % width) as i32);
        let (gr, gc) = ((t as usize / width) as i32, (t as usize % width) as i32);
        total += (r - gr).unsigned_abs() + (c - gc).unsigned_abs();
    }
    total
}

#[test]
fn manhattan_matches_per_tile_sum() {
    let mut r = rng(1);
    for width in [3, 4] {
        for _ in 0..500 {
            let mut tiles: Vec<u8> = (0..(width * width) as u8).collect();
            tiles.shuffle(&mut r);
            let s = TileState::from_tiles(width, &tiles).unwrap();
            assert_eq!(manhattan(width, s), manhattan_reference(width, &tiles), "{tiles:?}");
        }
    }
}

#[test]
fn manhattan_near_goal() {
    assert_eq!(manhattan(3, TileState::goal(3)), 0);
    let one_move = TileState::from_tiles(3, &[1, 0, 2, 3, 4, 5, 6, 7, 8]).unwrap();
    assert_eq!(manhattan(3, one_move), 1);
}

#[test]
fn tile_branching_by_blank_position() {
    let at = |blank: usize| {
        let mut tiles: Vec<u8> = (1..9).collect();
        tiles.insert(blank, 0);
        tile_successors(3, TileState::from_tiles(3, &tiles).unwrap()).len()
    };
    assert_eq!(at(0), 2);
    assert_eq!(at(4), 4);
    assert_eq!(at(1), 3);
}

#[test]
fn tile_moves_are_reversible_unit_steps() {
    let p = TilePuzzle::<f64>::from_tiles(&random_tile(4, 3)).unwrap();
    let mut out = Vec::new();
    p.successors(&p.start(), &mut out);
    for (t, c) in &out {
        assert_eq!(*c, 1.0);
        assert!(tile_successors(4, *t).contains(&p.start()));
    }
}

// Pancakes

fn gap_reference(stack: &[u8], k: u8) -> u32 {
    let n = stack.len() as u8;
    let mut with_plate = stack.to_vec();
    with_plate.push(n + 1);
    with_plate
        .windows(2)
        .filter(|p| p[0] > k && p[1] > k && p[0].abs_diff(p[1]) > 1)
        .count() as u32
}

#[test]
fn gap_hand_enumeration() {
    // [2,4,1,3] over the plate 5: pairs (2,4) (4,1) (1,3) (3,5), all gaps.
    // GAP-1 drops the two pairs holding 1; GAP-2 also drops (2,4).
    let s = PancakeState::from_stack(&[2, 4, 1, 3]).unwrap();
    assert_eq!(gap_k(4, s, 0), 4);
    assert_eq!(gap_k(4, s, 1), 2);
    assert_eq!(gap_k(4, s, 2), 1);
    assert_eq!(gap_k(4, PancakeState::sorted(4), 2), 0);
}

#[test]
fn gap_matches_reference_and_is_monotone_in_k() {
    let mut r = rng(2);
    for i in 0..1000 {
        let n = r.gen_range(2..=16);
        let stack = random_pancake(n, i);
        let s = PancakeState::from_stack(&stack).unwrap();
        let g: Vec<u32> = (0..=2).map(|k| gap_k(n, s, k)).collect();
        for k in 0..=2u8 {
            assert_eq!(g[k as usize], gap_reference(&stack, k), "{stack:?} k={k}");
        }
        assert!(g[2] <= g[1] && g[1] <= g[0]);
    }
}

#[test]
fn pancake_flips() {
    let s = PancakeState::from_stack(&[1, 2, 3]).unwrap();
    let succ: Vec<Vec<u8>> = pancake_successors(3, s).iter().map(|t| t.stack(3)).collect();
    assert_eq!(succ, [vec![2, 1, 3], vec![3, 2, 1]]);
    assert_eq!(pancake_successors(2, PancakeState::sorted(2)).len(), 1);
    let t = PancakeState::from_stack(&random_pancake(12, 5)).unwrap();
    for k in 2..=12 {
        assert_eq!(t.flip(k).flip(k), t);
    }
}

// Routing

/// Minimum spanning tree weight by decoding every Prüfer sequence.
fn mst_by_enumeration(inst: &RoutingInstance, members: &[usize]) -> f64 {
    let k = members.len();
    if k <= 1 {
        return 0.0;
    }
    if k == 2 {
        return inst.distance(members[0], members[1]);
    }
    let total = k.pow(k as u32 - 2);
    let mut best = f64::INFINITY;
    let mut seq = vec![0usize; k - 2];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            *s = c % k;
            c /= k;
        }
        let mut degree = vec![1usize; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut weight = 0.0;
        for &s in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
            weight += inst.distance(members[leaf], members[s]);
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        weight += inst.distance(members[rest[0]], members[rest[1]]);
        best = best.min(weight);
    }
    best
}

#[test]
fn mst_matches_spanning_tree_enumeration() {
    let mut r = rng(3);
    for seed in 0..40 {
        let n = r.gen_range(2..=8);
        let inst = random_routing(n, seed);
        for _ in 0..5 {
            let current = r.gen_range(0..n);
            let mut visited = 1u32 | (1 << current);
            for c in 1..n {
                if r.gen_bool(0.4) {
                    visited |= 1 << c;
                }
            }
            let s = RoutingState {
                current: current as u8,
                visited,
            };
            let mut members = vec![current];
            if current != 0 {
                members.push(0);
            }
            members.extend((1..n).filter(|c| visited & (1 << c) == 0));
            let expected = mst_by_enumeration(&inst, &members);
            assert!((mst_heuristic(&inst, s) - expected).abs() < 1e-9, "seed {seed} {s:?}");
        }
    }
}

#[test]
fn mst_with_one_city_left() {
    let inst = RoutingInstance::new(vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]).unwrap();
    // current 1, city 2 unvisited: tree over {1, 0, 2} uses 1-0 (3) and 1-2 (4).
    let s = RoutingState {
        current: 1,
        visited: 0b011,
    };
    assert!((mst_heuristic(&inst, s) - 7.0).abs() < 1e-12);
    let home = RoutingState {
        current: 0,
        visited: 0b111,
    };
    assert_eq!(mst_heuristic(&inst, home), 0.0);
}

fn tour_cost(inst: &RoutingInstance, order: &[usize]) -> f64 {
    let mut full = vec![0];
    full.extend_from_slice(order);
    full.push(0);
    full.windows(2).map(|w| inst.distance(w[0], w[1])).sum()
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn best_tour(inst: &RoutingInstance) -> (f64, Vec<usize>) {
    let mut cities: Vec<usize> = (1..inst.len()).collect();
    let mut best = (f64::INFINITY, Vec::new());
    permutations(&mut cities, 0, &mut |order| {
        let c = tour_cost(inst, order);
        if c < best.0 {
            best = (c, order.to_vec());
        }
    });
    best
}

#[test]
fn mst_is_admissible_along_optimal_tours() {
    for seed in 0..12 {
        let n = 4 + (seed as usize % 6);
        let inst = random_routing(n, 100 + seed);
        let (best, order) = best_tour(&inst);
        let oracle = optimal_cost(&RoutingProblem::<f64>::new(inst.clone()), Limits::unlimited()).unwrap();
        assert!((oracle.optimal_cost - best).abs() < 1e-9, "seed {seed}");

        let mut visited = 1u32;
        let mut spent = 0.0;
        let mut prev = 0;
        let mut states = vec![(RoutingState { current: 0, visited }, 0.0)];
        for &c in &order {
            spent += inst.distance(prev, c);
            visited |= 1 << c;
            states.push((
                RoutingState {
                    current: c as u8,
                    visited,
                },
                spent,
            ));
            prev = c;
        }
        for (s, spent) in states {
            assert!(mst_heuristic(&inst, s) <= best - spent + 1e-9, "seed {seed} {s:?}");
        }
    }
}

#[test]
fn routing_successor_shapes() {
    let inst = random_routing(5, 1);
    let start = RoutingState { current: 0, visited: 1 };
    assert_eq!(routing_successors(&inst, start).len(), 4);
    let last = RoutingState {
        current: 3,
        visited: 0b11111,
    };
    let back = routing_successors(&inst, last);
    assert_eq!(back.len(), 1);
    assert_eq!(back[0].0.current, 0);
    assert_eq!(inst.distance(1, 3), inst.distance(3, 1));
}

// Heuristic properties on exhaustible spaces

#[test]
fn heuristics_are_admissible_and_consistent_on_small_spaces() {
    for seed in 0..2 {
        let p = TilePuzzle::<f64>::from_tiles(&random_tile(3, seed)).unwrap();
        assert_eq!(check_admissible(&p, 200_000), Verdict::Ok);
        assert_eq!(check_consistent(&p, 200_000), Verdict::Ok);
    }
    for seed in 0..5 {
        for ignore in 0..=2 {
            let p = PancakeProblem::<f64>::new(&random_pancake(7, seed), GapHeuristic { ignore }).unwrap();
            assert_eq!(check_admissible(&p, 10_000), Verdict::Ok);
            assert_eq!(check_consistent(&p, 10_000), Verdict::Ok);
        }
    }
    for seed in 0..5 {
        let p = RoutingProblem::<f64>::new(random_routing(7, seed));
        assert_eq!(check_admissible(&p, 10_000), Verdict::Ok);
        assert_eq!(check_consistent(&p, 10_000), Verdict::Ok);
    }
}

#[test]
fn tour_costs_do_not_depend_on_direction() {
    for seed in 0..50 {
        let inst = random_routing(9, seed);
        let order: Vec<usize> = (1..9).collect();
        let reversed: Vec<usize> = order.iter().rev().copied().collect();
        assert_eq!(tour_cost(&inst, &order), tour_cost(&inst, &reversed), "seed {seed}");
    }
}
