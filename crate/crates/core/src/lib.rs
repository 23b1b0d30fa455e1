//! Simulated annealing for the directed Hamiltonian cycle problem.
//!
//! A candidate solution is a [`Tour`], a cyclic permutation of the cities.
//! Its cost is the number of consecutive city pairs that are not joined by a
//! directed road, so a tour of cost zero is a Hamiltonian cycle. The
//! [`anneal`] module searches for such a tour with transport and swap moves
//! under Metropolis acceptance and geometric cooling. [`instances`] builds
//! the random, planted and stride-pattern road sets the solver is studied on,
//! and [`experiments`] runs the multi-trial batches and parameter sweeps.

pub mod anneal;
pub mod error;
pub mod experiments;
pub mod instances;
pub mod oracle;
pub mod seed;
pub mod tour;

pub use anneal::{anneal, metropolis_accept, tour_length, verify_hc, AnnealParams, TrialResult};
pub use error::{Error, Result};
pub use instances::{road_count, GeneratorKind, GeneratorSpec, Instance, Provenance};
pub use oracle::brute_force_hc;
pub use tour::{City, Tour};
