//! Exact Hamiltonian-cycle search for small instances.
//!
//! Held–Karp over subsets: `reach[mask]` holds, as a bitset, every city `v`
//! such that some path starting at city 0 visits exactly the cities in
//! `mask ∪ {0}` and ends at `v`. Cycles are closed by a road back to 0.

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::tour::{City, Tour};

/// Largest instance the oracle accepts.
pub const MAX_ORACLE_CITIES: usize = 14;

/// Returns some Hamiltonian cycle of `inst` if one exists.
pub fn brute_force_hc(inst: &Instance) -> Result<Option<Tour>> {
    let n = inst.n_cities();
    if n > MAX_ORACLE_CITIES {
        return Err(Error::OracleTooLarge { n, max: MAX_ORACLE_CITIES });
    }
    // Masks range over cities 1..n, bit (v - 1) for city v.
    let others = n - 1;
    let full = (1usize << others) - 1;
    let bit = |v: City| 1usize << (v - 1);

    let mut succ = vec![0usize; n];
    for &(u, v) in inst.roads() {
        if v != 0 {
            succ[u] |= bit(v);
        }
    }

    let mut reach = vec![0usize; full + 1];
    reach[0] = 0;
    for v in 1..n {
        if inst.is_road(0, v) {
            reach[bit(v)] |= bit(v);
        }
    }
    for mask in 1..=full {
        let mut ends = reach[mask];
        while ends != 0 {
            let v = ends.trailing_zeros() as usize + 1;
            ends &= ends - 1;
            let mut next = succ[v] & !mask;
            while next != 0 {
                let w = next.trailing_zeros() as usize + 1;
                next &= next - 1;
                reach[mask | bit(w)] |= bit(w);
            }
        }
    }

    let Some(last) = (1..n).find(|&v| reach[full] & bit(v) != 0 && inst.is_road(v, 0)) else {
        return Ok(None);
    };

    // Walk backwards through the table.
    let mut order = vec![0; n];
    let mut mask = full;
    let mut cur = last;
    for pos in (1..n).rev() {
        order[pos] = cur;
        let prev_mask = mask & !bit(cur);
        if pos == 1 {
            break;
        }
        let prev = (1..n)
            .find(|&u| reach[prev_mask] & bit(u) != 0 && inst.is_road(u, cur))
            .expect("reachability table is consistent");
        mask = prev_mask;
        cur = prev;
    }
    Ok(Some(Tour::from_order(order).expect("reconstruction yields a permutation")))
}
