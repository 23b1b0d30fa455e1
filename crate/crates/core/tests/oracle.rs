//! Cross-checks between the independent exactness routes: the Held–Karp
//! oracle, an exhaustive permutation scan, `verify_hc` and `tour_length`.

use hamanneal::seed::rng_from_seed;
use hamanneal::{brute_force_hc, tour_length, verify_hc, GeneratorKind, GeneratorSpec, Instance, Tour};
use rand::Rng;

/// Tries every ordering of cities 1..n after city 0.
fn exhaustive_hc(inst: &Instance) -> bool {
    fn extend(inst: &Instance, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = used.len();
        if path.len() == n {
            return verify_hc(inst, path).unwrap();
        }
        for c in 1..n {
            if !used[c] {
                used[c] = true;
                path.push(c);
                if extend(inst, path, used) {
                    return true;
                }
                path.pop();
                used[c] = false;
            }
        }
        false
    }
    let n = inst.n_cities();
    let mut used = vec![false; n];
    used[0] = true;
    extend(inst, &mut vec![0], &mut used)
}

#[test]
fn held_karp_agrees_with_exhaustive_scan() {
    let mut rng = rng_from_seed(200);
    let mut positives = 0;
    for i in 0..200u64 {
        let m = 0.6 + 1.6 * rng.random::<f64>();
        let kind = if i % 3 == 0 { GeneratorKind::RandomPlanted } else { GeneratorKind::RandomUnplanted };
        let inst = GeneratorSpec::new(kind, 8, m, i).unwrap().generate().unwrap();
        let oracle = brute_force_hc(&inst).unwrap();
        if let Some(t) = &oracle {
            assert!(verify_hc(&inst, t.order()).unwrap());
            positives += 1;
        }
        assert_eq!(oracle.is_some(), exhaustive_hc(&inst), "instance {i}");
    }
    // both outcomes exercised
    assert!(positives > 20 && positives < 180, "positives = {positives}");
}

#[test]
fn verify_hc_agrees_with_zero_length() {
    let mut rng = rng_from_seed(10_000);
    let mut hits = 0;
    for i in 0..10_000u64 {
        let m = 1.0 + 2.5 * rng.random::<f64>();
        let kind = if i % 2 == 0 { GeneratorKind::RandomPlanted } else { GeneratorKind::RandomUnplanted };
        let inst = GeneratorSpec::new(kind, 10, m, i).unwrap().generate().unwrap();
        let tour = match (i % 4, inst.planted_cycle()) {
            (0, Some(c)) => c.clone(),
            _ => Tour::random(10, &mut rng),
        };
        let zero = tour_length(&inst, &tour).unwrap() == 0;
        assert_eq!(verify_hc(&inst, tour.order()).unwrap(), zero);
        hits += zero as usize;
    }
    assert!(hits > 1000);
}
