//! Monte Carlo estimation of logical X error rates and α-sweep search.
//!
//! Every trial derives its own RNG from `(master_seed, trial_index)` by
//! counter-based mixing, so results are bit-identical regardless of thread
//! count or execution order. Early stopping, when enabled, is evaluated on
//! fixed-size chunk boundaries for the same reason.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::CodeSpec;
use crate::construction::{build_code, ConstructionMethod};
use crate::decoder::{DecodeTask, ListDecoder};
use crate::error::{Error, Result};
use crate::polar::{polar_transform, BitVector};

/// Trials per deterministic scheduling chunk.
const CHUNK: u64 = 4096;

/// 95% normal quantile for the Wilson interval.
const Z_95: f64 = 1.959963984540054;

/// SplitMix64 finalizer.
fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Per-trial RNG derived from the master seed and a counter.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix64(master_seed ^ mix64(index)))
}

/// i.i.d. Bernoulli(q) error indicator vector.
pub fn sample_error(q: f64, len: usize, rng: &mut impl Rng) -> Result<BitVector> {
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::invalid(format!("q must lie in [0, 1/2], got {q}")));
    }
    let mut e = BitVector::zeros(len);
    if q > 0.0 {
        let dist = rand::distributions::Bernoulli::new(q).expect("q validated");
        for i in 0..len {
            if rng.sample(dist) {
                e.set(i, true);
            }
        }
    }
    Ok(e)
}

/// One decoding trial: sample an error, extract its syndrome, decode, and
/// compare information bits (stabilizer-equivalent estimates count as
/// success).
pub fn run_trial(
    spec: &CodeSpec,
    q: f64,
    list_size: usize,
    coset_aggregation: bool,
    rng: &mut impl Rng,
) -> Result<bool> {
    if !spec.valid {
        return Err(Error::precondition("simulation requires a valid spec"));
    }
    if q == 0.0 {
        return Ok(true);
    }
    let mut task = DecodeTask::for_spec(
        spec,
        &vec![0u8; spec.frozen_z.len()],
        q,
        list_size,
        coset_aggregation,
    )?;
    let mut decoder = ListDecoder::new(spec.n, list_size)?;
    trial_body(spec, q, &mut task, &mut decoder, rng)
}

fn trial_body(
    spec: &CodeSpec,
    q: f64,
    task: &mut DecodeTask,
    decoder: &mut ListDecoder,
    rng: &mut impl Rng,
) -> Result<bool> {
    let e = sample_error(q, spec.block_length, rng)?;
    let u = polar_transform(&e)?;
    let syndrome: Vec<u8> = spec.frozen_z.iter().map(|&i| u.get(i)).collect();
    task.set_syndrome(&syndrome)?;
    let result = decoder.decode(task)?;
    let truth_ok = spec
        .information
        .iter()
        .zip(&result.u_hat_information)
        .all(|(&i, &bit)| u.get(i) == bit);
    Ok(truth_ok)
}

/// Simulation request.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub spec: CodeSpec,
    pub q: f64,
    pub list_size: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub coset_aggregation: bool,
    /// Stop (on a chunk boundary) once this many failures accumulate.
    pub max_failures: Option<u64>,
}

/// Scalar echo of the settings a result was produced under.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimSettings {
    pub q: f64,
    pub alpha: f64,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub list_size: usize,
    pub coset_aggregation: bool,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimResult {
    pub trials: u64,
    pub failures: u64,
    pub logical_error_rate: f64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub wall_time_s: f64,
    pub settings: SimSettings,
}

/// Wilson 95% score interval; always contains the point estimate.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1 && failures <= trials);
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The exact endpoints are 0 and 1 at the boundary counts; clamp away
    // the rounding residue of center ± half there.
    let low = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if failures == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

/// Monte Carlo logical error rate, deterministic for a fixed master seed
/// under any thread count.
pub fn estimate_logical_error_rate(config: &SimConfig) -> Result<SimResult> {
    if config.trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    if !config.spec.valid {
        return Err(Error::precondition("simulation requires a valid spec"));
    }
    if !(0.0..=0.5).contains(&config.q) {
        return Err(Error::invalid(format!(
            "q must lie in [0, 1/2], got {}",
            config.q
        )));
    }
    let start = std::time::Instant::now();
    let spec = &config.spec;
    let q = config.q;

    let mut failures: u64 = 0;
    let mut done: u64 = 0;
    while done < config.trials {
        let hi = (done + CHUNK).min(config.trials);
        let chunk_failures: u64 = if q == 0.0 {
            0
        } else {
            (done..hi)
                .into_par_iter()
                .map_init(
                    || {
                        let task = DecodeTask::for_spec(
                            spec,
                            &vec![0u8; spec.frozen_z.len()],
                            q,
                            config.list_size,
                            config.coset_aggregation,
                        )
                        .expect("validated config");
                        let decoder =
                            ListDecoder::new(spec.n, config.list_size).expect("validated config");
                        (task, decoder)
                    },
                    |(task, decoder), t| {
                        let mut rng = trial_rng(config.master_seed, t);
                        match trial_body(spec, q, task, decoder, &mut rng) {
                            Ok(true) => 0u64,
                            Ok(false) => 1u64,
                            Err(_) => unreachable!("validated inputs"),
                        }
                    },
                )
                .sum()
        };
        failures += chunk_failures;
        done = hi;
        if let Some(cap) = config.max_failures {
            if failures >= cap {
                break;
            }
        }
    }

    let (ci_low, ci_high) = wilson_interval(failures, done);
    Ok(SimResult {
        trials: done,
        failures,
        logical_error_rate: failures as f64 / done as f64,
        ci_low,
        ci_high,
        wall_time_s: start.elapsed().as_secs_f64(),
        settings: SimSettings {
            q,
            alpha: spec.alpha,
            n: spec.n,
            k1: spec.k1,
            k2: spec.k2,
            list_size: config.list_size,
            coset_aggregation: config.coset_aggregation,
            master_seed: config.master_seed,
        },
    })
}

/// α values to evaluate in a sweep.
#[derive(Debug, Clone)]
pub enum AlphaGrid {
    Explicit(Vec<f64>),
    /// Draw this many values uniformly from (0, 1] with the sweep seed.
    Random(usize),
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub q: f64,
    pub alphas: AlphaGrid,
    pub trials: u64,
    pub list_size: usize,
    pub mu: usize,
    pub master_seed: u64,
    pub coset_aggregation: bool,
    pub max_failures: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub alpha: f64,
    pub valid: bool,
    /// Present for valid constructions only.
    pub result: Option<SimResult>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    /// Valid α with the lowest logical error rate (ties -> smaller α).
    pub alpha_star: Option<f64>,
    /// Index into `entries` of the α* row.
    pub alpha_star_index: Option<usize>,
}

/// Distinct seed stream for drawing random α values.
const ALPHA_STREAM: u64 = 0x616C7068615F7374;

/// Builds and evaluates one code per α. Invalid constructions are recorded
/// and skipped; an all-invalid grid is not an error.
pub fn alpha_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let alphas: Vec<f64> = match &config.alphas {
        AlphaGrid::Explicit(list) => list.clone(),
        AlphaGrid::Random(count) => {
            let mut rng = trial_rng(config.master_seed, ALPHA_STREAM);
            (0..*count).map(|_| 1.0 - rng.gen::<f64>()).collect()
        }
    };

    let mut entries = Vec::with_capacity(alphas.len());
    let mut best: Option<(f64, f64, usize)> = None; // (rate, alpha, entry index)
    for (idx, &alpha) in alphas.iter().enumerate() {
        let spec = build_code(
            config.n,
            config.k1,
            config.k2,
            config.q,
            alpha,
            ConstructionMethod::PolarInterpolated,
            config.mu,
        )?;
        if !spec.valid {
            entries.push(SweepEntry {
                alpha,
                valid: false,
                result: None,
            });
            continue;
        }
        let sim = estimate_logical_error_rate(&SimConfig {
            spec,
            q: config.q,
            list_size: config.list_size,
            trials: config.trials,
            master_seed: mix64(config.master_seed ^ (idx as u64 + 1)),
            coset_aggregation: config.coset_aggregation,
            max_failures: config.max_failures,
        })?;
        let rate = sim.logical_error_rate;
        let better = match best {
            None => true,
            Some((best_rate, best_alpha, _)) => {
                rate < best_rate || (rate == best_rate && alpha < best_alpha)
            }
        };
        if better {
            best = Some((rate, alpha, idx));
        }
        entries.push(SweepEntry {
            alpha,
            valid: true,
            result: Some(sim),
        });
    }
    Ok(SweepResult {
        entries,
        alpha_star: best.map(|(_, alpha, _)| alpha),
        alpha_star_index: best.map(|(_, _, idx)| idx),
    })
}

/// Caps the global worker pool; later calls are no-ops once a pool exists.
pub fn configure_threads(limit: Option<usize>) {
    if let Some(count) = limit {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global();
    }
}
