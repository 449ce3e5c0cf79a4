//! The shared data model: scenarios, observation tokens, frames and queries.
//!
//! A [`Scenario`] is a one-shot branching experiment: a single categorical
//! draw whose outcomes each emit a fixed number of tagged observation tokens.
//! A [`Frame`] picks which experimental setup individuates an event — the
//! per-trial draw or the per-token observation — and a [`Query`] is a
//! predicate that can be asked under either frame.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

/// One branch of the experiment: its label, probability, and the
/// observation tokens it emits per trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpec {
    pub label: String,
    pub prob: Rational,
    /// Number of observation tokens this outcome adds per trial. Zero is
    /// legal and means the outcome is never observed.
    pub weight: u64,
    /// Optional per-token tags; when present there are exactly `weight` of them.
    pub tags: Option<Vec<String>>,
}

impl OutcomeSpec {
    pub fn new(label: impl Into<String>, prob: Rational, weight: u64) -> Self {
        Self {
            label: label.into(),
            prob,
            weight,
            tags: None,
        }
    }

    pub fn with_tags(
        label: impl Into<String>,
        prob: Rational,
        weight: u64,
        tags: Vec<impl Into<String>>,
    ) -> Self {
        Self {
            label: label.into(),
            prob,
            weight,
            tags: Some(tags.into_iter().map(Into::into).collect()),
        }
    }

    pub fn tag_at(&self, index: u64) -> Option<&str> {
        self.tags
            .as_ref()
            .and_then(|t| t.get(index as usize))
            .map(String::as_str)
    }

    /// The token this outcome emits at `index`, or `None` past its weight.
    pub fn token_at(&self, index: u64) -> Option<Token> {
        if index >= self.weight {
            return None;
        }
        Some(Token {
            outcome: self.label.clone(),
            index,
            tag: self.tag_at(index).map(str::to_string),
        })
    }
}

/// A one-shot experiment: a named, exhaustive set of outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub outcomes: Vec<OutcomeSpec>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, outcomes: Vec<OutcomeSpec>) -> Self {
        Self {
            name: name.into(),
            outcomes,
        }
    }

    pub fn outcome(&self, label: &str) -> Option<&OutcomeSpec> {
        self.outcomes.iter().find(|o| o.label == label)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        validate_scenario(self)
    }
}

/// A single observation instance — one awakening, one ball in the box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub outcome: String,
    pub index: u64,
    pub tag: Option<String>,
}

/// Which experimental setup individuates the event being asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// One event per run of the experiment (the per-toss setup).
    Trial,
    /// One event per observation token drawn from the box (the size-biased setup).
    Observation,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Trial => f.write_str("trial"),
            Frame::Observation => f.write_str("observation"),
        }
    }
}

/// A predicate over outcomes and tokens.
///
/// `OutcomeIs` is meaningful under both frames; `IndexIs` and `TagIs` inspect
/// token structure and are only legal under the observation frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    True,
    OutcomeIs(String),
    IndexIs(u64),
    TagIs(String),
    And(Box<Query>, Box<Query>),
    Or(Box<Query>, Box<Query>),
    Not(Box<Query>),
}

impl Query {
    pub fn outcome_is(label: impl Into<String>) -> Self {
        Query::OutcomeIs(label.into())
    }

    pub fn tag_is(tag: impl Into<String>) -> Self {
        Query::TagIs(tag.into())
    }

    pub fn and(self, rhs: Query) -> Self {
        Query::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Query) -> Self {
        Query::Or(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Query::Not(Box::new(self))
    }

    /// Evaluates the predicate against a token. `TagIs` on a tagless token
    /// is false.
    pub fn eval(&self, token: &Token) -> bool {
        self.eval_parts(&token.outcome, token.index, token.tag.as_deref())
    }

    /// Token evaluation without materialising a [`Token`].
    pub fn eval_parts(&self, outcome: &str, index: u64, tag: Option<&str>) -> bool {
        match self {
            Query::True => true,
            Query::OutcomeIs(label) => label == outcome,
            Query::IndexIs(n) => *n == index,
            Query::TagIs(t) => tag == Some(t.as_str()),
            Query::And(a, b) => {
                a.eval_parts(outcome, index, tag) && b.eval_parts(outcome, index, tag)
            }
            Query::Or(a, b) => {
                a.eval_parts(outcome, index, tag) || b.eval_parts(outcome, index, tag)
            }
            Query::Not(q) => !q.eval_parts(outcome, index, tag),
        }
    }

    /// Evaluates against a bare outcome, as the trial frame sees it.
    ///
    /// Token-structure leaves never match a bare outcome; trial-frame entry
    /// points reject such queries up front via [`Query::is_outcome_only`].
    pub fn eval_outcome(&self, outcome: &str) -> bool {
        match self {
            Query::True => true,
            Query::OutcomeIs(label) => label == outcome,
            Query::IndexIs(_) | Query::TagIs(_) => false,
            Query::And(a, b) => a.eval_outcome(outcome) && b.eval_outcome(outcome),
            Query::Or(a, b) => a.eval_outcome(outcome) || b.eval_outcome(outcome),
            Query::Not(q) => !q.eval_outcome(outcome),
        }
    }

    /// True when the query contains no `IndexIs`/`TagIs` leaves and is
    /// therefore legal under the trial frame.
    pub fn is_outcome_only(&self) -> bool {
        match self {
            Query::True | Query::OutcomeIs(_) => true,
            Query::IndexIs(_) | Query::TagIs(_) => false,
            Query::And(a, b) | Query::Or(a, b) => a.is_outcome_only() && b.is_outcome_only(),
            Query::Not(q) => q.is_outcome_only(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Query::Or(..) => 0,
            Query::And(..) => 1,
            Query::Not(..) => 2,
            _ => 3,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        let needs_parens = self.precedence() < parent || (right && self.precedence() == parent);
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Query {
    /// Canonical text form; re-parsing it yields the same AST.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::True => f.write_str("true"),
            Query::OutcomeIs(label) => write!(f, "outcome=={label}"),
            Query::IndexIs(n) => write!(f, "index=={n}"),
            Query::TagIs(t) => write!(f, "tag=={t}"),
            Query::And(a, b) => {
                a.fmt_child(f, 1, false)?;
                f.write_str(" && ")?;
                b.fmt_child(f, 1, true)
            }
            Query::Or(a, b) => {
                a.fmt_child(f, 0, false)?;
                f.write_str(" || ")?;
                b.fmt_child(f, 0, true)
            }
            Query::Not(q) => {
                f.write_str("!")?;
                q.fmt_child(f, 2, false)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("scenario has no outcomes")]
    EmptyScenario,
    #[error("outcome probabilities sum to {sum}, expected exactly 1")]
    ProbSumNotOne { sum: Rational },
    #[error("duplicate outcome label `{label}`")]
    DuplicateLabel { label: String },
    #[error("outcome `{label}` declares {tags} tags but weight {weight}")]
    TagArityMismatch {
        label: String,
        weight: u64,
        tags: usize,
    },
    #[error("outcome `{label}` has probability {prob}, outside [0, 1]")]
    ProbOutOfRange { label: String, prob: Rational },
}

/// Checks every scenario invariant, reporting the first violation found.
///
/// Outcomes are checked in order (probability range, tag arity, duplicate
/// label), then the probabilities are summed.
pub fn validate_scenario(scenario: &Scenario) -> Result<(), ValidationError> {
    if scenario.outcomes.is_empty() {
        return Err(ValidationError::EmptyScenario);
    }
    let mut seen = HashSet::new();
    for outcome in &scenario.outcomes {
        if !outcome.prob.in_unit_interval() {
            return Err(ValidationError::ProbOutOfRange {
                label: outcome.label.clone(),
                prob: outcome.prob.clone(),
            });
        }
        if let Some(tags) = &outcome.tags {
            if tags.len() as u64 != outcome.weight {
                return Err(ValidationError::TagArityMismatch {
                    label: outcome.label.clone(),
                    weight: outcome.weight,
                    tags: tags.len(),
                });
            }
        }
        if !seen.insert(outcome.label.as_str()) {
            return Err(ValidationError::DuplicateLabel {
                label: outcome.label.clone(),
            });
        }
    }
    let sum: Rational = scenario.outcomes.iter().map(|o| o.prob.clone()).sum();
    if !sum.is_one() {
        return Err(ValidationError::ProbSumNotOne { sum });
    }
    Ok(())
}
