//! Multi-trial batches, parameter sweeps and the augment-then-anneal
//! decision procedure.
//!
//! Every trial draws its instance seed and anneal seed from
//! [`derive_seed`]`(master, [point, trial, stream])`, so results do not
//! depend on scheduling and a report can be regenerated from its master
//! seed alone.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anneal::{anneal, verify_hc, AnnealParams, TrialResult};
use crate::error::{Error, Result};
use crate::instances::{road_count, GeneratorSpec, Instance};
use crate::seed::{derive_seed, RNG_ALGORITHM};
use crate::tour::Tour;

const STREAM_INSTANCE: u64 = 0;
const STREAM_ANNEAL: u64 = 1;
const STREAM_AUGMENT: u64 = 2;

/// Road multiplier the decision procedure augments up to.
pub const DECIDE_ROAD_MULTIPLIER: f64 = 0.58;
pub const DEFAULT_DECIDE_ATTEMPTS: u32 = 4;

pub const CSV_HEADER: &str = "value,trials,found,unique,planted_found,mean_steps,mean_wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchOptions {
    /// Draw a new instance for every trial instead of sharing one.
    pub fresh_instance_per_trial: bool,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs inline.
    pub jobs: Option<usize>,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions { fresh_instance_per_trial: true, jobs: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub instance_seed: u64,
    pub anneal_seed: u64,
    pub found: bool,
    pub final_length: usize,
    pub steps_used: u32,
    pub moves_proposed: u64,
    pub planted_found: bool,
    pub wall_ms: f64,
}

/// Aggregate over one batch of trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub trials: u64,
    pub found_count: u64,
    pub unique_hc_count: u64,
    pub planted_found_count: u64,
    pub mean_steps_to_success: Option<f64>,
    pub mean_wall_ms: f64,
    pub details: Vec<TrialRecord>,
}

impl BatchRecord {
    fn zero_timing(&mut self) {
        self.mean_wall_ms = 0.0;
        for d in &mut self.details {
            d.wall_ms = 0.0;
        }
    }
}

struct TrialOutput {
    record: TrialRecord,
    canonical: Option<Tour>,
}

fn run_trial(
    gen: &GeneratorSpec,
    params: &AnnealParams,
    master_seed: u64,
    point: u64,
    trial: u64,
    opts: &BatchOptions,
    shared: Option<&Instance>,
) -> Result<TrialOutput> {
    let start = Instant::now();
    let instance_trial = if opts.fresh_instance_per_trial { trial } else { 0 };
    let instance_seed = derive_seed(master_seed, &[point, instance_trial, STREAM_INSTANCE]);
    let anneal_seed = derive_seed(master_seed, &[point, trial, STREAM_ANNEAL]);

    let owned;
    let inst = match shared {
        Some(inst) => inst,
        None => {
            owned = GeneratorSpec { seed: instance_seed, ..*gen }.generate()?;
            &owned
        }
    };
    let result: TrialResult = anneal(inst, &AnnealParams { seed: anneal_seed, ..*params })?;
    let found = result.found && verify_hc(inst, result.tour.order())?;
    assert_eq!(found, result.found, "annealer reported a tour that does not verify");
    let canonical = found.then(|| result.tour.canonical_form());
    let planted_found = match (&canonical, inst.planted_cycle()) {
        (Some(c), Some(p)) => *c == p.canonical_form(),
        _ => false,
    };
    Ok(TrialOutput {
        record: TrialRecord {
            trial,
            instance_seed,
            anneal_seed,
            found,
            final_length: result.final_length,
            steps_used: result.steps_used,
            moves_proposed: result.moves_proposed,
            planted_found,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        canonical,
    })
}

fn run_point(
    gen: &GeneratorSpec,
    params: &AnnealParams,
    trials: u64,
    master_seed: u64,
    point: u64,
    opts: &BatchOptions,
) -> Result<BatchRecord> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    gen.validate()?;
    params.validate()?;
    let shared = if opts.fresh_instance_per_trial {
        None
    } else {
        let seed = derive_seed(master_seed, &[point, 0, STREAM_INSTANCE]);
        Some(GeneratorSpec { seed, ..*gen }.generate()?)
    };
    let one = |t: u64| run_trial(gen, params, master_seed, point, t, opts, shared.as_ref());

    let outputs: Vec<TrialOutput> = match opts.jobs {
        Some(1) => (0..trials).map(one).collect::<Result<_>>()?,
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::param("jobs", e.to_string()))?
            .install(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())?,
        None => (0..trials).into_par_iter().map(one).collect::<Result<_>>()?,
    };
    Ok(aggregate(outputs))
}

fn aggregate(outputs: Vec<TrialOutput>) -> BatchRecord {
    let trials = outputs.len() as u64;
    let mut unique = HashSet::new();
    let mut found_count = 0;
    let mut planted_found_count = 0;
    let mut steps_sum = 0u64;
    let mut wall_sum = 0.0;
    let mut details = Vec::with_capacity(outputs.len());
    for out in outputs {
        if let Some(c) = out.canonical {
            found_count += 1;
            steps_sum += out.record.steps_used as u64;
            unique.insert(c);
        }
        planted_found_count += out.record.planted_found as u64;
        wall_sum += out.record.wall_ms;
        details.push(out.record);
    }
    BatchRecord {
        trials,
        found_count,
        unique_hc_count: unique.len() as u64,
        planted_found_count,
        mean_steps_to_success: (found_count > 0).then(|| steps_sum as f64 / found_count as f64),
        mean_wall_ms: wall_sum / trials as f64,
        details,
    }
}

/// Runs `trials` independent anneals. Identical to the single row of a
/// one-value sweep with the same master seed.
pub fn run_batch(
    gen: &GeneratorSpec,
    params: &AnnealParams,
    trials: u64,
    master_seed: u64,
    opts: &BatchOptions,
) -> Result<BatchRecord> {
    run_point(gen, params, trials, master_seed, 0, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    /// Boltzmann-like constant.
    K,
    /// Road multiplier.
    M,
    /// City count.
    N,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(SweepParameter::K),
            "m" => Ok(SweepParameter::M),
            "n" => Ok(SweepParameter::N),
            _ => Err(Error::param("swept_parameter", format!("expected k, m or n, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub generator: GeneratorSpec,
    pub swept_parameter: SweepParameter,
    pub values: Vec<f64>,
    pub trials: u64,
    pub params: AnnealParams,
    pub master_seed: u64,
    pub fresh_instance_per_trial: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::param("values", "at least one value is required"));
        }
        if self.values.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::param("values", "must be strictly increasing"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        for &v in &self.values {
            let (gen, params) = self.point(v)?;
            gen.validate()?;
            params.validate()?;
        }
        Ok(())
    }

    /// Generator and anneal parameters at one sweep value.
    pub fn point(&self, value: f64) -> Result<(GeneratorSpec, AnnealParams)> {
        let mut gen = self.generator;
        let mut params = self.params;
        match self.swept_parameter {
            SweepParameter::K => params.k = value,
            SweepParameter::M => gen.m = value,
            SweepParameter::N => {
                if value.fract() != 0.0 || value < 3.0 {
                    return Err(Error::param("values", format!("city count {value} is not an integer >= 3")));
                }
                gen.n_cities = value as usize;
            }
        }
        Ok((gen, params))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(flatten)]
    pub batch: BatchRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub rng: String,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Copy with every wall-clock field zeroed, for determinism checks.
    pub fn without_timing(&self) -> SweepReport {
        let mut r = self.clone();
        for row in &mut r.rows {
            row.batch.zero_timing();
        }
        r
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            let b = &row.batch;
            let steps = b.mean_steps_to_success.map(|x| format!("{x:.3}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{:.3}",
                row.value, b.trials, b.found_count, b.unique_hc_count, b.planted_found_count, steps, b.mean_wall_ms
            );
        }
        s
    }
}

/// One batch per swept value, rows in value order.
pub fn sweep(spec: &SweepSpec, jobs: Option<usize>) -> Result<SweepReport> {
    spec.validate()?;
    let opts = BatchOptions { fresh_instance_per_trial: spec.fresh_instance_per_trial, jobs };
    let rows = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let (gen, params) = spec.point(value)?;
            let batch = run_point(&gen, &params, spec.trials, spec.master_seed, i as u64, &opts)?;
            Ok(SweepRow { value, batch })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport { spec: spec.clone(), rng: RNG_ALGORITHM.to_string(), rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HcFound,
    NoHcDetected,
}

/// Result of the augment-then-anneal rule. A negative verdict is not a
/// proof, hence `heuristic` is always set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub heuristic: bool,
    pub tour: Option<Tour>,
    /// Whether the cycle found uses only roads of the input instance. Only
    /// then does the cycle certify the input.
    pub uses_only_original_roads: Option<bool>,
    pub original_roads: usize,
    pub target_roads: usize,
    pub augmentation_size: usize,
    pub attempts_used: u32,
    pub augment_seed: u64,
    pub anneal_seeds: Vec<u64>,
}

impl Decision {
    /// True when the answer certifies a cycle in the input itself.
    pub fn certifies_original(&self) -> bool {
        self.verdict == Verdict::HcFound && self.uses_only_original_roads == Some(true)
    }
}

/// Adds random roads up to `0.58 * N * ln N` (never removing any) and anneals
/// up to `attempts` times on the augmented copy.
pub fn decide_hcp(inst: &Instance, params: &AnnealParams, attempts: u32, seed: u64) -> Result<Decision> {
    if attempts == 0 {
        return Err(Error::param("attempts", "must be at least 1"));
    }
    params.validate()?;
    let n = inst.n_cities();
    let target = road_count(DECIDE_ROAD_MULTIPLIER, n)?.max(inst.road_count());
    let augment_seed = derive_seed(seed, &[0, 0, STREAM_AUGMENT]);
    let augmented = inst.augment(target, augment_seed)?;

    let mut anneal_seeds = Vec::new();
    for attempt in 0..attempts {
        let s = derive_seed(seed, &[0, attempt as u64, STREAM_ANNEAL]);
        anneal_seeds.push(s);
        let r = anneal(&augmented, &AnnealParams { seed: s, ..*params })?;
        if r.found && verify_hc(&augmented, r.tour.order())? {
            let original = r.tour.edges().all(|(u, v)| inst.is_road(u, v));
            return Ok(Decision {
                verdict: Verdict::HcFound,
                heuristic: true,
                tour: Some(r.tour),
                uses_only_original_roads: Some(original),
                original_roads: inst.road_count(),
                target_roads: target,
                augmentation_size: target - inst.road_count(),
                attempts_used: attempt + 1,
                augment_seed,
                anneal_seeds,
            });
        }
    }
    Ok(Decision {
        verdict: Verdict::NoHcDetected,
        heuristic: true,
        tour: None,
        uses_only_original_roads: None,
        original_roads: inst.road_count(),
        target_roads: target,
        augmentation_size: target - inst.road_count(),
        attempts_used: attempts,
        augment_seed,
        anneal_seeds,
    })
}
