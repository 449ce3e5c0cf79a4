//! Exact probabilities under both frames, by full enumeration.
//!
//! Every operation here is a finite sum of exact rationals over the
//! scenario's outcomes and their tokens. The trial frame weighs each outcome
//! by its probability alone; the observation frame reweighs it by the number
//! of tokens it emits, normalised by the expected token count per trial —
//! the size-biased measure that makes the two frames disagree whenever
//! weights differ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Frame, OutcomeSpec, Query, Scenario};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// The trial frame cannot see token structure (`index==`/`tag==`).
    #[error("trial-frame query must not reference token structure (index/tag)")]
    IllegalTrialQuery,
    /// The scenario almost surely puts nothing in the box, so the
    /// observation measure is undefined rather than zero.
    #[error("expected token count is zero; the observation measure is undefined")]
    NoObservations,
    /// Conditioning on an event of observation-probability zero.
    #[error("conditioning event has probability zero under the observation frame")]
    ConditionOnNull,
}

/// An exact frame-indexed probability, ready for rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub scenario: String,
    pub frame: Frame,
    pub query: String,
    pub value: Rational,
}

impl ExactResult {
    pub fn new(scenario: &Scenario, frame: Frame, query: &Query, value: Rational) -> Self {
        Self {
            scenario: scenario.name.clone(),
            frame,
            query: query.to_string(),
            value,
        }
    }
}

/// Count of this outcome's tokens that satisfy the query.
fn matching_tokens(outcome: &OutcomeSpec, query: &Query) -> u64 {
    (0..outcome.weight)
        .filter(|&i| query.eval_parts(&outcome.label, i, outcome.tag_at(i)))
        .count() as u64
}

/// Expected number of tokens added to the box per trial: `Σ p(o)·w(o)`.
fn expected_tokens(scenario: &Scenario) -> Rational {
    scenario
        .outcomes
        .iter()
        .map(|o| &o.prob * &Rational::from(o.weight))
        .sum()
}

/// Probability of the query under the per-trial setup: `Σ p(o)` over
/// outcomes satisfying it.
///
/// The query must be outcome-only; asking the trial frame about token
/// structure is a category error, not probability zero.
pub fn trial_probability(scenario: &Scenario, query: &Query) -> Result<Rational, ExactError> {
    if !query.is_outcome_only() {
        return Err(ExactError::IllegalTrialQuery);
    }
    Ok(scenario
        .outcomes
        .iter()
        .filter(|o| query.eval_outcome(&o.label))
        .map(|o| o.prob.clone())
        .sum())
}

/// Probability of the query under the per-observation setup:
/// `Σ p(o)·|matching tokens of o|  /  Σ p(o)·w(o)`.
///
/// This is the exact large-N limit of the relative-frequency ratio over the
/// box's contents. Undefined when the box is almost surely empty.
pub fn observation_probability(scenario: &Scenario, query: &Query) -> Result<Rational, ExactError> {
    let denominator = expected_tokens(scenario);
    if denominator.is_zero() {
        return Err(ExactError::NoObservations);
    }
    let numerator: Rational = scenario
        .outcomes
        .iter()
        .map(|o| &o.prob * &Rational::from(matching_tokens(o, query)))
        .sum();
    Ok(numerator / denominator)
}

/// Conditional probability under the observation frame:
/// `P_obs(a ∧ b) / P_obs(b)`.
pub fn observation_conditional(
    scenario: &Scenario,
    query: &Query,
    given: &Query,
) -> Result<Rational, ExactError> {
    let p_given = observation_probability(scenario, given)?;
    if p_given.is_zero() {
        return Err(ExactError::ConditionOnNull);
    }
    let joint = query.clone().and(given.clone());
    let p_joint = observation_probability(scenario, &joint)?;
    Ok(p_joint / p_given)
}

/// Expected count of query-satisfying tokens added to the box per trial:
/// `Σ p(o)·|matching tokens of o|`.
pub fn average_tokens_per_trial(scenario: &Scenario, query: &Query) -> Rational {
    scenario
        .outcomes
        .iter()
        .map(|o| &o.prob * &Rational::from(matching_tokens(o, query)))
        .sum()
}

/// Trial-frame probability that at least one query-satisfying token is put
/// in the box: `Σ p(o)` over outcomes emitting one or more matching tokens.
///
/// When exactly the outcomes in the query's support emit matching tokens,
/// this coincides with [`trial_probability`] of the outcome event — putting
/// a token in the box and the outcome occurring are the same trial event.
pub fn production_event_probability(scenario: &Scenario, query: &Query) -> Rational {
    scenario
        .outcomes
        .iter()
        .filter(|o| matching_tokens(o, query) > 0)
        .map(|o| o.prob.clone())
        .sum()
}
