//! Monte Carlo simulation of the box-filling device.
//!
//! [`run_trials`] repeats the experiment: each trial draws one outcome with
//! its exact probability and appends that outcome's tokens to the box.
//! Estimators then read probabilities off the box as relative frequencies.
//!
//! The box stores the token multiset in compressed form — per-outcome trial
//! counts plus the outcome's token template — which is exact: every token of
//! outcome `o` appears exactly `trials(o)` times. Counting over this form is
//! the zero-variance equivalent of redrawing tokens one by one;
//! [`draw_token`] still models the literal single draw.
//!
//! Trials are generated in fixed-size batches, each from its own
//! counter-derived sub-seed, so identical `(scenario, n, seed)` give
//! bit-identical results for any number of worker threads.

mod rng;
mod sampler;

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rng::{batch_seed, SplitMix64, Xoshiro256PlusPlus};
pub use sampler::CategoricalSampler;

use crate::model::{Query, Scenario, Token};
use crate::rational::Rational;

/// Trials per generation batch. Fixed: the batch layout is part of the
/// reproducibility contract.
pub const BATCH_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("the box contains no tokens")]
    EmptyBox,
    #[error("trial-frame query must not reference token structure (index/tag)")]
    IllegalTrialQuery,
}

/// The filled box: the outcome of `trials` simulated trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenBox {
    scenario: Scenario,
    seed: u64,
    trials: u64,
    outcome_trials: Vec<u64>,
}

impl TokenBox {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Trials that drew each outcome, in scenario order.
    pub fn outcome_trials(&self) -> &[u64] {
        &self.outcome_trials
    }

    /// Total number of tokens in the box.
    pub fn total_tokens(&self) -> u64 {
        self.scenario
            .outcomes
            .iter()
            .zip(&self.outcome_trials)
            .map(|(o, &t)| o.weight.checked_mul(t).expect("token count fits u64"))
            .try_fold(0u64, |acc, c| acc.checked_add(c))
            .expect("token count fits u64")
    }

    pub fn is_empty(&self) -> bool {
        self.total_tokens() == 0
    }

    /// The token multiset as distinct tokens with multiplicities.
    pub fn token_counts(&self) -> impl Iterator<Item = (Token, u64)> + '_ {
        self.scenario
            .outcomes
            .iter()
            .zip(&self.outcome_trials)
            .flat_map(|(o, &trials)| {
                (0..o.weight).map(move |i| (o.token_at(i).expect("index < weight"), trials))
            })
    }

    /// Tokens in the box that satisfy the query.
    pub fn matching_tokens(&self, query: &Query) -> u64 {
        self.scenario
            .outcomes
            .iter()
            .zip(&self.outcome_trials)
            .map(|(o, &trials)| {
                let per_trial = (0..o.weight)
                    .filter(|&i| query.eval_parts(&o.label, i, o.tag_at(i)))
                    .count() as u64;
                per_trial.checked_mul(trials).expect("hit count fits u64")
            })
            .try_fold(0u64, |acc, c| acc.checked_add(c))
            .expect("hit count fits u64")
    }
}

/// A frequency estimate with its sampling uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub seed: u64,
    pub hits: u64,
    pub total: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
}

impl SimReport {
    fn from_counts(trials: u64, seed: u64, hits: u64, total: u64) -> Self {
        let estimate = hits as f64 / total as f64;
        let std_error = (estimate * (1.0 - estimate) / total as f64).sqrt();
        let half_width = 1.96 * std_error;
        Self {
            trials,
            seed,
            hits,
            total,
            estimate,
            std_error,
            ci95: (estimate - half_width, estimate + half_width),
        }
    }
}

/// Runs `n` trials and fills the box, using one worker per available CPU.
pub fn run_trials(scenario: &Scenario, n: u64, seed: u64) -> TokenBox {
    let workers = thread::available_parallelism().unwrap_or(NonZeroUsize::MIN);
    run_trials_with_workers(scenario, n, seed, workers)
}

/// Runs `n` trials sharded over exactly `workers` threads.
///
/// Each fixed-size batch of trials owns a generator seeded by
/// [`batch_seed`], and per-outcome tallies merge by addition, so the result
/// is identical for every worker count.
pub fn run_trials_with_workers(
    scenario: &Scenario,
    n: u64,
    seed: u64,
    workers: NonZeroUsize,
) -> TokenBox {
    let probs: Vec<Rational> = scenario.outcomes.iter().map(|o| o.prob.clone()).collect();
    let sampler = CategoricalSampler::new(&probs);
    let k = scenario.outcomes.len();
    let batches = n.div_ceil(BATCH_TRIALS);

    let run_batch = |batch: u64| {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(batch_seed(seed, batch));
        let lo = batch * BATCH_TRIALS;
        let hi = lo.saturating_add(BATCH_TRIALS).min(n);
        let mut counts = vec![0u64; k];
        for _ in lo..hi {
            counts[sampler.sample(rng.next_u64())] += 1;
        }
        counts
    };

    let mut outcome_trials = vec![0u64; k];
    if workers.get() == 1 || batches <= 1 {
        for batch in 0..batches {
            for (total, c) in outcome_trials.iter_mut().zip(run_batch(batch)) {
                *total += c;
            }
        }
    } else {
        let next_batch = AtomicU64::new(0);
        let partials = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers.get())
                .map(|_| {
                    scope.spawn(|| {
                        let mut local = vec![0u64; k];
                        loop {
                            let batch = next_batch.fetch_add(1, Ordering::Relaxed);
                            if batch >= batches {
                                return local;
                            }
                            for (total, c) in local.iter_mut().zip(run_batch(batch)) {
                                *total += c;
                            }
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Vec<_>>()
        });
        for partial in partials {
            for (total, c) in outcome_trials.iter_mut().zip(partial) {
                *total += c;
            }
        }
    }

    TokenBox {
        scenario: scenario.clone(),
        seed,
        trials: n,
        outcome_trials,
    }
}

/// Estimates the observation-frame probability of `query` as the fraction
/// of tokens in the box that satisfy it.
pub fn estimate_observation(tokens: &TokenBox, query: &Query) -> Result<SimReport, SimError> {
    let total = tokens.total_tokens();
    if total == 0 {
        return Err(SimError::EmptyBox);
    }
    let hits = tokens.matching_tokens(query);
    Ok(SimReport::from_counts(
        tokens.trials,
        tokens.seed,
        hits,
        total,
    ))
}

/// Estimates the trial-frame probability of an outcome-only `query` as the
/// fraction of trials whose outcome satisfies it.
pub fn estimate_trial(
    scenario: &Scenario,
    query: &Query,
    n: u64,
    seed: u64,
) -> Result<SimReport, SimError> {
    estimate_trial_in_box(&run_trials(scenario, n, seed), query)
}

/// Trial-frame estimate over an existing box.
pub fn estimate_trial_in_box(tokens: &TokenBox, query: &Query) -> Result<SimReport, SimError> {
    if !query.is_outcome_only() {
        return Err(SimError::IllegalTrialQuery);
    }
    if tokens.trials == 0 {
        return Err(SimError::EmptyBox);
    }
    let hits = tokens
        .scenario
        .outcomes
        .iter()
        .zip(&tokens.outcome_trials)
        .filter(|(o, _)| query.eval_outcome(&o.label))
        .map(|(_, &t)| t)
        .sum();
    Ok(SimReport::from_counts(
        tokens.trials,
        tokens.seed,
        hits,
        tokens.trials,
    ))
}

/// Picks one token from the box uniformly at random.
pub fn draw_token(tokens: &TokenBox, seed: u64) -> Result<Token, SimError> {
    let total = tokens.total_tokens();
    if total == 0 {
        return Err(SimError::EmptyBox);
    }
    let total_rational = Rational::from(total);
    let (candidates, probs): (Vec<Token>, Vec<Rational>) = tokens
        .token_counts()
        .map(|(token, count)| (token, Rational::from(count) / total_rational.clone()))
        .unzip();
    let sampler = CategoricalSampler::new(&probs);
    let draw = Xoshiro256PlusPlus::seed_from_u64(seed).next_u64();
    Ok(candidates[sampler.sample(draw)].clone())
}
