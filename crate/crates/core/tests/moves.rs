//! Incremental cost deltas against full recomputation, and structural
//! checks on the moves.

use hamanneal::anneal::{apply_move, move_delta, propose_swap, propose_transport, Move};
use hamanneal::seed::rng_from_seed;
use hamanneal::{tour_length, GeneratorKind, GeneratorSpec, Instance, Tour};
use proptest::prelude::*;
use rand::Rng;

/// Reference cost: rebuild the city sequence and count missing roads.
fn full_length(inst: &Instance, order: &[usize]) -> i64 {
    let n = order.len();
    let mut missing = 0;
    for i in 0..n {
        if !inst.has_edge(order[i], order[(i + 1) % n]).unwrap() {
            missing += 1;
        }
    }
    missing
}

/// Reference move application on a plain vector, by splicing.
fn splice(order: &[usize], mv: Move) -> Vec<usize> {
    let n = order.len();
    match mv {
        Move::Swap { p, q } => {
            let mut v = order.to_vec();
            v.swap(p, q);
            v
        }
        Move::Transport { start, len, shift } => {
            // Rotate so the segment starts at 0, then cut and reinsert.
            let mut rot: Vec<usize> = (0..n).map(|i| order[(start + i) % n]).collect();
            let seg: Vec<usize> = rot.drain(..len).collect();
            // rot[0] is the old successor; insert after rot[shift].
            let at = shift + 1;
            let mut out = rot[..at].to_vec();
            out.extend(&seg);
            out.extend(&rot[at..]);
            out
        }
    }
}

fn random_instance(n: usize, m: f64, seed: u64) -> Instance {
    let plantable = hamanneal::road_count(m, n).unwrap() >= n;
    let kind =
        if plantable && seed.is_multiple_of(2) { GeneratorKind::RandomPlanted } else { GeneratorKind::RandomUnplanted };
    GeneratorSpec::new(kind, n, m, seed).unwrap().generate().unwrap()
}

fn all_moves(n: usize) -> Vec<Move> {
    let mut moves = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                moves.push(Move::Swap { p, q });
            }
        }
    }
    for start in 0..n {
        for len in 1..=n - 2 {
            for shift in 0..n - len - 1 {
                moves.push(Move::Transport { start, len, shift });
            }
        }
    }
    moves
}

#[test]
fn exhaustive_delta_exactness_small_n() {
    let mut rng = rng_from_seed(8);
    for n in 4..=8 {
        let moves = all_moves(n);
        for trial in 0..6u64 {
            let inst = random_instance(n, 0.6 + 0.3 * trial as f64, trial * 31 + n as u64);
            let tour = Tour::random(n, &mut rng);
            let before = full_length(&inst, tour.order());
            for &mv in &moves {
                let after = splice(tour.order(), mv);
                let expected = full_length(&inst, &after) - before;
                assert_eq!(move_delta(&inst, tour.order(), mv), expected, "n={n} {mv:?}");
                let mut applied = tour.clone();
                apply_move(&mut applied, mv, &mut Vec::new());
                assert!(applied.same_cycle(&Tour::from_order(after).unwrap()), "apply {mv:?}");
            }
        }
    }
}

#[test]
fn random_swaps_match_recompute_at_n12() {
    let mut rng = rng_from_seed(12);
    let mut scratch = Vec::new();
    for round in 0..10u64 {
        let inst = random_instance(12, 0.5 + 0.2 * round as f64, round);
        let mut tour = Tour::random(12, &mut rng);
        for _ in 0..1000 {
            let before = tour_length(&inst, &tour).unwrap() as i64;
            let md = propose_swap(&inst, &tour, &mut rng);
            apply_move(&mut tour, md.mv, &mut scratch);
            assert_eq!(md.delta, tour_length(&inst, &tour).unwrap() as i64 - before);
        }
    }
}

#[test]
fn random_transports_match_recompute_at_n12() {
    let mut rng = rng_from_seed(13);
    let mut scratch = Vec::new();
    for round in 0..10u64 {
        let inst = random_instance(12, 0.5 + 0.2 * round as f64, round + 100);
        let mut tour = Tour::random(12, &mut rng);
        for _ in 0..1000 {
            let before = tour_length(&inst, &tour).unwrap() as i64;
            let md = propose_transport(&inst, &tour, 10, &mut rng);
            apply_move(&mut tour, md.mv, &mut scratch);
            assert_eq!(md.delta, tour_length(&inst, &tour).unwrap() as i64 - before);
        }
    }
}

#[test]
fn swap_moves_exactly_two_positions() {
    let mut rng = rng_from_seed(3);
    let inst = random_instance(20, 0.8, 3);
    let mut scratch = Vec::new();
    for _ in 0..500 {
        let tour = Tour::random(20, &mut rng);
        let md = propose_swap(&inst, &tour, &mut rng);
        let mut after = tour.clone();
        apply_move(&mut after, md.mv, &mut scratch);
        let changed: Vec<usize> = (0..20).filter(|&i| tour.order()[i] != after.order()[i]).collect();
        let Move::Swap { p, q } = md.mv else { panic!("expected swap") };
        assert_eq!(changed.len(), 2);
        assert!(changed.contains(&p) && changed.contains(&q));
        assert_eq!(after.order()[p], tour.order()[q]);
    }
}

#[test]
fn transport_keeps_segment_order() {
    let mut rng = rng_from_seed(4);
    let inst = random_instance(25, 0.8, 4);
    let mut scratch = Vec::new();
    for _ in 0..500 {
        let tour = Tour::random(25, &mut rng);
        let md = propose_transport(&inst, &tour, 23, &mut rng);
        let Move::Transport { start, len, .. } = md.mv else { panic!("expected transport") };
        let segment: Vec<usize> = (0..len).map(|i| tour.order()[(start + i) % 25]).collect();
        let mut after = tour.clone();
        apply_move(&mut after, md.mv, &mut scratch);
        assert_ne!(after.canonical_form(), tour.canonical_form(), "no-op transport proposed");
        let pos = after.order().iter().position(|&c| c == segment[0]).unwrap();
        let moved: Vec<usize> = (0..len).map(|i| after.order()[(pos + i) % 25]).collect();
        assert_eq!(moved, segment);
    }
}

/// Reversing a stretch of a one-way cycle turns every road inside the
/// stretch around; none of the reversed roads exist. This is why the
/// solver has no reversal move.
#[test]
fn reversal_breaks_directed_roads() {
    let spec = GeneratorSpec::new(GeneratorKind::RandomPlanted, 10, 10.0 / (10.0 * 10f64.ln()), 6).unwrap();
    let inst = spec.generate().unwrap();
    let cycle = inst.planted_cycle().unwrap().clone();
    assert_eq!(tour_length(&inst, &cycle).unwrap(), 0);
    for len in 2..=8 {
        let mut order = cycle.order().to_vec();
        order[1..1 + len].reverse();
        let reversed = Tour::from_order(order).unwrap();
        // the len - 1 internal edges all point the wrong way
        assert!(tour_length(&inst, &reversed).unwrap() >= len - 1);
    }
    // whereas a transport of the same stretch keeps its internal roads
    let mut moved = cycle.clone();
    apply_move(&mut moved, Move::Transport { start: 1, len: 4, shift: 2 }, &mut Vec::new());
    assert!(tour_length(&inst, &moved).unwrap() <= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_preserve_permutation_and_bounds(n in 4usize..50, seed in any::<u64>(), steps in 1usize..200) {
        let mut rng = rng_from_seed(seed);
        let inst = random_instance(n, 0.4 + rng.random::<f64>(), seed);
        let mut tour = Tour::random(n, &mut rng);
        let mut length = tour_length(&inst, &tour).unwrap() as i64;
        let mut scratch = Vec::new();
        for _ in 0..steps {
            let md = if rng.random::<bool>() {
                propose_swap(&inst, &tour, &mut rng)
            } else {
                propose_transport(&inst, &tour, n - 2, &mut rng)
            };
            apply_move(&mut tour, md.mv, &mut scratch);
            length += md.delta;
            prop_assert!(Tour::from_order(tour.order().to_vec()).is_ok());
            prop_assert_eq!(length, full_length(&inst, tour.order()));
            prop_assert!((0..=n as i64).contains(&length));
        }
    }
}
