//! Shared test support: reference scenarios, an independent brute-force
//! oracle, and proptest generators.
//!
//! The oracle materialises the experiment over a common denominator `D`
//! (the lcm of all probability denominators): each outcome occurs in
//! exactly `p·D` of `D` equally likely trial instances, and every instance
//! contributes its outcome's full token list. All probabilities are then
//! integer counts over these lists divided by their lengths — no weighted
//! sums, so the path is independent of the engine it checks.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use credence::model::{OutcomeSpec, Query, Scenario, Token};
use credence::rational::Rational;

pub fn sb() -> Scenario {
    Scenario::new(
        "sb",
        vec![
            OutcomeSpec::new("heads", Rational::new(1, 2), 1),
            OutcomeSpec::new("tails", Rational::new(1, 2), 2),
        ],
    )
}

pub fn sb_tagged() -> Scenario {
    Scenario::new(
        "sb",
        vec![
            OutcomeSpec::with_tags("heads", Rational::new(1, 2), 1, vec!["monday"]),
            OutcomeSpec::with_tags("tails", Rational::new(1, 2), 2, vec!["monday", "tuesday"]),
        ],
    )
}

pub fn new_year() -> Scenario {
    Scenario::new(
        "ny",
        vec![
            OutcomeSpec::new("heads", Rational::new(1, 2), 1),
            OutcomeSpec::new("tails", Rational::new(1, 2), 365),
        ],
    )
}

pub fn three_outcome() -> Scenario {
    Scenario::new(
        "abc",
        vec![
            OutcomeSpec::new("a", Rational::new(1, 6), 3),
            OutcomeSpec::new("b", Rational::new(1, 3), 0),
            OutcomeSpec::new("c", Rational::new(1, 2), 1),
        ],
    )
}

/// The experiment materialised as equally likely trial instances.
pub struct Materialised {
    /// Outcome index of each of the `D` trial instances.
    pub trial_outcomes: Vec<usize>,
    /// All tokens those instances put in the box, in order.
    pub tokens: Vec<Token>,
    pub scenario: Scenario,
}

pub fn materialise(scenario: &Scenario) -> Materialised {
    let common_den: BigInt = scenario
        .outcomes
        .iter()
        .fold(BigInt::from(1), |acc, o| acc.lcm(o.prob.denom()));
    let mut trial_outcomes = Vec::new();
    let mut tokens = Vec::new();
    for (idx, outcome) in scenario.outcomes.iter().enumerate() {
        let copies = (outcome.prob.numer() * &common_den / outcome.prob.denom())
            .to_usize()
            .expect("oracle scenarios stay small");
        for _ in 0..copies {
            trial_outcomes.push(idx);
            for i in 0..outcome.weight {
                tokens.push(outcome.token_at(i).unwrap());
            }
        }
    }
    Materialised {
        trial_outcomes,
        tokens,
        scenario: scenario.clone(),
    }
}

impl Materialised {
    fn count_rational(count: usize, total: usize) -> Rational {
        Rational::checked_new(count as i64, total as i64).expect("nonempty")
    }

    /// Fraction of trial instances whose outcome satisfies the query.
    pub fn trial_probability(&self, query: &Query) -> Rational {
        let hits = self
            .trial_outcomes
            .iter()
            .filter(|&&idx| query.eval_outcome(&self.scenario.outcomes[idx].label))
            .count();
        Self::count_rational(hits, self.trial_outcomes.len())
    }

    /// Fraction of the materialised token list satisfying the query, or
    /// `None` when the list is empty.
    pub fn observation_probability(&self, query: &Query) -> Option<Rational> {
        if self.tokens.is_empty() {
            return None;
        }
        let hits = self.tokens.iter().filter(|t| query.eval(t)).count();
        Some(Self::count_rational(hits, self.tokens.len()))
    }

    pub fn observation_conditional(&self, query: &Query, given: &Query) -> Option<Rational> {
        let given_hits: Vec<&Token> = self.tokens.iter().filter(|t| given.eval(t)).collect();
        if given_hits.is_empty() {
            return None;
        }
        let joint = given_hits.iter().filter(|t| query.eval(t)).count();
        Some(Self::count_rational(joint, given_hits.len()))
    }

    /// Matching tokens per trial instance, averaged over instances.
    pub fn average_tokens_per_trial(&self, query: &Query) -> Rational {
        let matching = self.tokens.iter().filter(|t| query.eval(t)).count();
        Self::count_rational(matching, self.trial_outcomes.len())
    }

    /// Fraction of trial instances that put at least one matching token in
    /// the box.
    pub fn production_event_probability(&self, query: &Query) -> Rational {
        let hits = self
            .trial_outcomes
            .iter()
            .filter(|&&idx| {
                let o = &self.scenario.outcomes[idx];
                (0..o.weight).any(|i| query.eval(&o.token_at(i).unwrap()))
            })
            .count();
        Self::count_rational(hits, self.trial_outcomes.len())
    }
}

/// Scenarios with ≤ 5 outcomes and weights ≤ 6; probabilities are integer
/// parts over their sum, so they total exactly 1.
pub fn arb_small_scenario() -> impl Strategy<Value = Scenario> {
    let outcome = (1u64..=12, 0u64..=6, proptest::bool::ANY);
    proptest::collection::vec(outcome, 1..=5).prop_map(|raw| {
        let total: u64 = raw.iter().map(|(part, _, _)| part).sum();
        let tag_pool = ["red", "green", "monday", "tuesday"];
        let outcomes = raw
            .into_iter()
            .enumerate()
            .map(|(i, (part, weight, tagged))| {
                let prob = Rational::checked_new(part as i64, total as i64).unwrap();
                let label = format!("o{i}");
                // a present-but-empty tag list is not representable in the
                // file format, so weight-0 outcomes stay untagged
                if tagged && weight > 0 {
                    let tags: Vec<String> = (0..weight)
                        .map(|j| tag_pool[(i + j as usize) % tag_pool.len()].to_string())
                        .collect();
                    OutcomeSpec::with_tags(label, prob, weight, tags)
                } else {
                    OutcomeSpec::new(label, prob, weight)
                }
            })
            .collect();
        Scenario::new("random", outcomes)
    })
}

/// Queries over the label/tag pools used by [`arb_small_scenario`].
pub fn arb_query() -> impl Strategy<Value = Query> {
    let leaf = prop_oneof![
        Just(Query::True),
        (0usize..6).prop_map(|i| Query::outcome_is(format!("o{i}"))),
        (0u64..7).prop_map(Query::IndexIs),
        prop_oneof![
            Just("red"),
            Just("green"),
            Just("monday"),
            Just("tuesday"),
            Just("absent")
        ]
        .prop_map(Query::tag_is),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(Query::not),
        ]
    })
}

/// Outcome-only queries over the same label pool.
pub fn arb_outcome_query() -> impl Strategy<Value = Query> {
    let leaf = prop_oneof![
        Just(Query::True),
        (0usize..6).prop_map(|i| Query::outcome_is(format!("o{i}"))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(Query::not),
        ]
    })
}
