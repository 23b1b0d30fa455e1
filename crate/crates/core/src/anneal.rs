//! Simulated annealing over cyclic tours.
//!
//! The cost of a tour is the number of consecutive pairs (including the
//! wraparound pair) with no road between them, so cost 0 means a Hamiltonian
//! cycle. Two moves perturb a tour:
//!
//! ```text
//! transport   ... a [s0 .. sl] b ... c d ...   ->   ... a b ... c [s0 .. sl] d ...
//! swap        ... x p y ... u q w ...          ->   ... x q y ... u p w ...
//! ```
//!
//! Transport keeps the segment's direction, which matters because roads are
//! one-way. Both moves touch a constant number of edges, so their cost
//! change is evaluated from those edges alone.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::seed::{rng_from_seed, Rng as SolverRng};
use crate::tour::{check_permutation, City, Tour};

/// Tunables for a single annealing run.
///
/// The defaults take `k * T` from 0.14 down to about 0.04, through the band
/// where worsening moves are still taken now and then but the tour no longer
/// melts. At N = 150 the budget is 270 million proposals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    /// Initial temperature.
    pub t0: f64,
    /// Geometric cooling factor applied after every step, in (0, 1).
    pub fc: f64,
    /// Maximum number of annealing steps.
    pub na: u32,
    /// Moves proposed per step are `round(moves_mult * N^2)`.
    pub moves_mult: f64,
    /// Boltzmann-like constant scaling the acceptance of worsening moves.
    pub k: f64,
    /// Probability that a proposal is a swap rather than a transport.
    pub swap_prob: f64,
    /// Longest transported segment; `None` means `N - 2`.
    pub max_segment: Option<usize>,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            t0: 0.35,
            fc: 0.99915,
            na: 1500,
            moves_mult: 8.0,
            k: 0.4,
            swap_prob: 0.1,
            max_segment: None,
            seed: 0,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return Err(Error::param("t0", format!("must be positive, got {}", self.t0)));
        }
        if !(self.fc > 0.0 && self.fc < 1.0) {
            return Err(Error::param("fc", format!("must lie in (0, 1), got {}", self.fc)));
        }
        if self.na == 0 {
            return Err(Error::param("na", "must be at least 1"));
        }
        if !(self.moves_mult.is_finite() && self.moves_mult > 0.0) {
            return Err(Error::param("moves_mult", format!("must be positive, got {}", self.moves_mult)));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::param("k", format!("must be positive, got {}", self.k)));
        }
        if !(0.0..=1.0).contains(&self.swap_prob) {
            return Err(Error::param("swap_prob", format!("must lie in [0, 1], got {}", self.swap_prob)));
        }
        if self.max_segment == Some(0) {
            return Err(Error::param("max_segment", "must be at least 1"));
        }
        Ok(())
    }

    pub fn moves_per_step(&self, n: usize) -> Result<u64> {
        let moves = (self.moves_mult * (n * n) as f64).round();
        if moves < 1.0 {
            return Err(Error::param(
                "moves_mult",
                format!("{} * {n}^2 rounds to zero moves per step", self.moves_mult),
            ));
        }
        Ok(moves as u64)
    }

    /// Effective transport segment cap for `n` cities: at most `n - 2`.
    pub fn segment_cap(&self, n: usize) -> usize {
        self.max_segment.unwrap_or(n).min(n.saturating_sub(2)).max(1)
    }

    /// Temperature during step `i`, `t0 * fc^i`.
    pub fn temperature(&self, step: u32) -> f64 {
        self.t0 * self.fc.powi(step as i32)
    }
}

/// Outcome of one annealing run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub found: bool,
    pub tour: Tour,
    pub final_length: usize,
    /// Steps started, including the one in which the run stopped. Zero when
    /// the initial tour was already a cycle.
    pub steps_used: u32,
    pub moves_proposed: u64,
    pub moves_accepted: u64,
}

/// A proposed perturbation, in tour positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Move {
    /// Exchange the cities at positions `p` and `q`.
    Swap { p: usize, q: usize },
    /// Lift the `len` cities starting at `start` and reinsert them after the
    /// city `shift` positions past the segment's old successor.
    Transport { start: usize, len: usize, shift: usize },
}

/// A move together with the change in tour length it causes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveDelta {
    pub mv: Move,
    pub delta: i64,
}

/// `i mod n` for `i < 2n`.
#[inline]
fn wrap(i: usize, n: usize) -> usize {
    i - n * (i >= n) as usize
}

#[inline]
fn gap(inst: &Instance, u: City, v: City) -> i64 {
    !inst.is_road(u, v) as i64
}

fn check_size(inst: &Instance, tour_len: usize) -> Result<()> {
    if tour_len != inst.n_cities() {
        return Err(Error::SizeMismatch { tour: tour_len, instance: inst.n_cities() });
    }
    Ok(())
}

/// Number of consecutive tour pairs, wraparound included, lacking a road.
pub fn tour_length(inst: &Instance, tour: &Tour) -> Result<usize> {
    check_size(inst, tour.len())?;
    Ok(length_unchecked(inst, tour.order()))
}

fn length_unchecked(inst: &Instance, order: &[City]) -> usize {
    let n = order.len();
    (0..n).filter(|&i| !inst.is_road(order[i], order[(i + 1) % n])).count()
}

/// Independent Hamiltonian-cycle check on a raw city order: a permutation
/// whose every directed step, wraparound included, is a road.
pub fn verify_hc(inst: &Instance, order: &[City]) -> Result<bool> {
    check_size(inst, order.len())?;
    if check_permutation(order).is_err() {
        return Ok(false);
    }
    let mut prev = order[order.len() - 1];
    for &c in order {
        if !inst.has_edge(prev, c)? {
            return Ok(false);
        }
        prev = c;
    }
    Ok(true)
}

/// Cost change of swapping positions `p` and `q` (distinct).
pub fn swap_delta(inst: &Instance, order: &[City], p: usize, q: usize) -> i64 {
    let n = order.len();
    debug_assert!(p != q && p < n && q < n);
    // Edge slot i is the edge order[i] -> order[i + 1].
    let mut slots = [wrap(p + n - 1, n), p, wrap(q + n - 1, n), q];
    slots.sort_unstable();
    let after = |i: usize| {
        if i == p {
            order[q]
        } else if i == q {
            order[p]
        } else {
            order[i]
        }
    };
    let mut delta = 0;
    for (j, &s) in slots.iter().enumerate() {
        if j > 0 && slots[j - 1] == s {
            continue;
        }
        let t = wrap(s + 1, n);
        delta += gap(inst, after(s), after(t)) - gap(inst, order[s], order[t]);
    }
    delta
}

/// Cost change of a transport: three edges broken, three created.
pub fn transport_delta(inst: &Instance, order: &[City], start: usize, len: usize, shift: usize) -> i64 {
    let n = order.len();
    debug_assert!(len >= 1 && len + shift + 2 <= n && start < n);
    let at = |i: usize| order[wrap(start + i, n)];
    let a = order[wrap(start + n - 1, n)];
    let s0 = at(0);
    let sl = at(len - 1);
    let b = at(len);
    let c = at(len + shift);
    let d = at(len + shift + 1);
    gap(inst, a, b) + gap(inst, c, s0) + gap(inst, sl, d) - gap(inst, a, s0) - gap(inst, sl, b) - gap(inst, c, d)
}

/// Cost change of `mv` on `order`.
pub fn move_delta(inst: &Instance, order: &[City], mv: Move) -> i64 {
    match mv {
        Move::Swap { p, q } => swap_delta(inst, order, p, q),
        Move::Transport { start, len, shift } => transport_delta(inst, order, start, len, shift),
    }
}

/// Draws a uniform swap of two distinct positions.
pub fn propose_swap<R: Rng + ?Sized>(inst: &Instance, tour: &Tour, rng: &mut R) -> MoveDelta {
    let n = tour.len() as u32;
    let p = rng.random_range(0..n) as usize;
    let mut q = rng.random_range(0..n - 1) as usize;
    if q >= p {
        q += 1;
    }
    let mv = Move::Swap { p, q };
    MoveDelta { mv, delta: swap_delta(inst, tour.order(), p, q) }
}

/// Draws a transport: segment length uniform in `1..=segment_cap`, start
/// uniform, and insertion point uniform among the `N - len - 1` gaps that
/// actually change the tour.
pub fn propose_transport<R: Rng + ?Sized>(inst: &Instance, tour: &Tour, segment_cap: usize, rng: &mut R) -> MoveDelta {
    let n = tour.len();
    debug_assert!(n >= 4);
    let cap = segment_cap.clamp(1, n - 2) as u32;
    let len = rng.random_range(1..=cap) as usize;
    let start = rng.random_range(0..n as u32) as usize;
    let shift = rng.random_range(0..(n - len - 1) as u32) as usize;
    let mv = Move::Transport { start, len, shift };
    MoveDelta { mv, delta: transport_delta(inst, tour.order(), start, len, shift) }
}

/// Applies `mv` in place.
///
/// A transport turns the cyclic sequence `S B R` (segment, the stretch it
/// jumps over, the rest) into `B S R`, which is also `S R B` and `R S B`
/// read from another city. Rotating whichever of `S B`, `B R` or `R S` is
/// shortest gives the same cycle.
pub fn apply_move(tour: &mut Tour, mv: Move, scratch: &mut Vec<City>) {
    let order = tour.order_mut();
    match mv {
        Move::Swap { p, q } => order.swap(p, q),
        Move::Transport { start, len, shift } => {
            let n = order.len();
            let jumped = shift + 1;
            let rest = n - len - jumped;
            let (from, span, by) = if len + jumped <= jumped + rest && len + jumped <= rest + len {
                (start, len + jumped, len)
            } else if jumped + rest <= rest + len {
                (start + len, jumped + rest, jumped)
            } else {
                (start + len + jumped, rest + len, rest)
            };
            rotate_cyclic(order, from % n, span, by, scratch);
        }
    }
}

/// Rotates the cyclic range of `span` positions beginning at `from` left by
/// `by`.
fn rotate_cyclic(order: &mut [City], from: usize, span: usize, by: usize, scratch: &mut Vec<City>) {
    let n = order.len();
    if from + span <= n {
        order[from..from + span].rotate_left(by);
    } else {
        scratch.clear();
        scratch.extend_from_slice(&order[from..]);
        scratch.extend_from_slice(&order[..from + span - n]);
        scratch.rotate_left(by);
        let (head, tail) = scratch.split_at(n - from);
        order[from..].copy_from_slice(head);
        order[..tail.len()].copy_from_slice(tail);
    }
}

/// Metropolis rule: improving and neutral moves are always taken, a move
/// that lengthens the tour by `delta` is taken with probability
/// `exp(-delta / (k * temperature))`.
pub fn metropolis_accept<R: Rng + ?Sized>(delta: i64, temperature: f64, k: f64, rng: &mut R) -> Result<bool> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::param("temperature", format!("must be positive, got {temperature}")));
    }
    if k.is_nan() || k <= 0.0 {
        return Err(Error::param("k", format!("must be positive, got {k}")));
    }
    Ok(accept(delta, k * temperature, rng))
}

#[inline]
fn accept<R: Rng + ?Sized>(delta: i64, kt: f64, rng: &mut R) -> bool {
    delta <= 0 || rng.random::<f64>() < (-(delta as f64) / kt).exp()
}

/// Runs one annealing trial from a uniformly random tour.
///
/// Step `i` runs at temperature `t0 * fc^i` and proposes
/// `round(moves_mult * N^2)` moves. The run stops the moment the tour
/// length reaches zero.
pub fn anneal(inst: &Instance, params: &AnnealParams) -> Result<TrialResult> {
    params.validate()?;
    let n = inst.n_cities();
    let moves_per_step = params.moves_per_step(n)?;
    let cap = params.segment_cap(n);
    // Transport needs a segment plus two other cities.
    let swap_prob = if n < 4 { 1.0 } else { params.swap_prob };

    let mut rng: SolverRng = rng_from_seed(params.seed);
    let mut tour = Tour::random(n, &mut rng);
    let mut length = length_unchecked(inst, tour.order()) as i64;
    let mut scratch = Vec::with_capacity(n);
    let mut proposed = 0u64;
    let mut accepted = 0u64;
    let mut steps_used = 0u32;

    if length > 0 {
        'steps: for step in 0..params.na {
            steps_used = step + 1;
            let kt = params.k * params.temperature(step);
            // A single move changes the length by at most 4.
            let uphill: [f64; 5] = std::array::from_fn(|d| (-(d as f64) / kt).exp());
            for _ in 0..moves_per_step {
                let md = if rng.random::<f64>() < swap_prob {
                    propose_swap(inst, &tour, &mut rng)
                } else {
                    propose_transport(inst, &tour, cap, &mut rng)
                };
                proposed += 1;
                if md.delta <= 0 || rng.random::<f64>() < uphill[md.delta as usize] {
                    apply_move(&mut tour, md.mv, &mut scratch);
                    length += md.delta;
                    accepted += 1;
                    if length == 0 {
                        break 'steps;
                    }
                }
            }
        }
    }

    debug_assert_eq!(length as usize, length_unchecked(inst, tour.order()));
    let found = length == 0;
    debug_assert!(!found || verify_hc(inst, tour.order()).unwrap_or(false));
    Ok(TrialResult {
        found,
        tour,
        final_length: length as usize,
        steps_used,
        moves_proposed: proposed,
        moves_accepted: accepted,
    })
}
