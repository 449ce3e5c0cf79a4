//! The betting harness: unit-payoff bets placed at every observation.
//!
//! At each token the agent pays `price` and receives 1 if the query holds of
//! that token. Because one bet is placed per observation, not per trial, the
//! stake that breaks even is the observation-frame probability, and
//! [`fair_price`] simply returns it. Payoffs are fixed at 1 and stakes do
//! not compound. A protocol that asked a single question per trial would
//! make the trial-frame probability fair instead; that variant is left
//! unmodelled.

use serde::{Deserialize, Serialize};

use crate::exact::{observation_probability, ExactError};
use crate::mc::{run_trials, TokenBox};
use crate::model::{Query, Scenario};
use crate::rational::Rational;

/// Outcome of a betting run. `wins` and `questions` are exact counts;
/// profits are derived floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetReport {
    pub price: Rational,
    pub questions: u64,
    pub wins: u64,
    pub avg_profit_per_question: f64,
    pub total_profit: f64,
}

/// The stake per unit payoff at which expected profit per question is zero:
/// the observation-frame probability of the query.
pub fn fair_price(scenario: &Scenario, query: &Query) -> Result<Rational, ExactError> {
    observation_probability(scenario, query)
}

/// Runs `n` trials and settles one bet per token generated.
pub fn simulate_betting(
    scenario: &Scenario,
    query: &Query,
    price: &Rational,
    n: u64,
    seed: u64,
) -> BetReport {
    settle_bets(&run_trials(scenario, n, seed), query, price)
}

/// Settles bets over an existing box: one question per token in it.
///
/// A box with no tokens means no questions were ever asked; both profit
/// figures are reported as zero.
pub fn settle_bets(tokens: &TokenBox, query: &Query, price: &Rational) -> BetReport {
    let questions = tokens.total_tokens();
    let wins = tokens.matching_tokens(query);
    if questions == 0 {
        return BetReport {
            price: price.clone(),
            questions: 0,
            wins: 0,
            avg_profit_per_question: 0.0,
            total_profit: 0.0,
        };
    }
    // exact bookkeeping, rounded only for the report
    let total = Rational::from(wins) - price * &Rational::from(questions);
    let average = &total / &Rational::from(questions);
    BetReport {
        price: price.clone(),
        questions,
        wins,
        avg_profit_per_question: average.to_f64(),
        total_profit: total.to_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OutcomeSpec;

    fn sb() -> Scenario {
        Scenario::new(
            "sb",
            vec![
                OutcomeSpec::new("heads", Rational::new(1, 2), 1),
                OutcomeSpec::new("tails", Rational::new(1, 2), 2),
            ],
        )
    }

    #[test]
    fn fair_price_for_sb_heads_is_a_third() {
        assert_eq!(
            fair_price(&sb(), &Query::outcome_is("heads")).unwrap(),
            Rational::new(1, 3)
        );
    }

    #[test]
    fn fair_price_equals_trial_probability_at_unit_weights() {
        let s = Scenario::new(
            "unit",
            vec![
                OutcomeSpec::new("a", Rational::new(1, 4), 1),
                OutcomeSpec::new("b", Rational::new(3, 4), 1),
            ],
        );
        let q = Query::outcome_is("b");
        assert_eq!(
            fair_price(&s, &q).unwrap(),
            crate::exact::trial_probability(&s, &q).unwrap()
        );
    }

    #[test]
    fn fair_price_for_new_year_heads() {
        let ny = Scenario::new(
            "ny",
            vec![
                OutcomeSpec::new("heads", Rational::new(1, 2), 1),
                OutcomeSpec::new("tails", Rational::new(1, 2), 365),
            ],
        );
        assert_eq!(
            fair_price(&ny, &Query::outcome_is("heads")).unwrap(),
            Rational::new(1, 366)
        );
    }

    #[test]
    fn fair_price_undefined_without_observations() {
        let s = Scenario::new("silent", vec![OutcomeSpec::new("a", Rational::one(), 0)]);
        assert_eq!(
            fair_price(&s, &Query::True),
            Err(ExactError::NoObservations)
        );
    }

    #[test]
    fn expected_profit_at_fair_price_is_exactly_zero() {
        // per question: P_obs(q)·1 − price, which vanishes at the fair price
        let q = Query::outcome_is("heads");
        let price = fair_price(&sb(), &q).unwrap();
        let expected = crate::exact::observation_probability(&sb(), &q).unwrap() - price;
        assert!(expected.is_zero());
    }

    #[test]
    fn free_certain_bet_pays_one_per_question() {
        let report = simulate_betting(&sb(), &Query::True, &Rational::zero(), 10, 1);
        assert_eq!(report.avg_profit_per_question, 1.0);
        assert_eq!(report.wins, report.questions);
    }

    #[test]
    fn fair_price_betting_breaks_even_statistically() {
        let n = 100_000u64;
        let report = simulate_betting(
            &sb(),
            &Query::outcome_is("heads"),
            &Rational::new(1, 3),
            n,
            7,
        );
        let p = report.wins as f64 / report.questions as f64;
        let se = (p * (1.0 - p) / report.questions as f64).sqrt();
        assert!(
            report.avg_profit_per_question.abs() < 3.0 * se,
            "avg profit {} exceeds 3se {}",
            report.avg_profit_per_question,
            3.0 * se
        );
    }

    #[test]
    fn profit_difference_between_prices_is_exact() {
        let p1 = Rational::new(1, 3);
        let p2 = Rational::new(1, 2);
        let a = simulate_betting(&sb(), &Query::outcome_is("heads"), &p1, 5000, 9);
        let b = simulate_betting(&sb(), &Query::outcome_is("heads"), &p2, 5000, 9);
        // same seed, same box: the integer tallies must coincide
        assert_eq!(a.wins, b.wins);
        assert_eq!(a.questions, b.questions);
        // avg(p1) − avg(p2) = p2 − p1, reconstructed exactly from the tallies
        let q = Rational::from(a.questions);
        let avg1 = (Rational::from(a.wins) - &p1 * &q) / q.clone();
        let avg2 = (Rational::from(b.wins) - &p2 * &q) / q;
        assert_eq!(avg1 - avg2, p2 - p1);
    }

    #[test]
    fn report_invariant_holds() {
        let price = Rational::new(1, 4);
        let report = simulate_betting(&sb(), &Query::outcome_is("tails"), &price, 2000, 13);
        let q = Rational::from(report.questions);
        let expected = (Rational::from(report.wins) - &price * &q) / q;
        assert_eq!(report.avg_profit_per_question, expected.to_f64());
    }

    #[test]
    fn no_questions_reports_zero_profit() {
        let s = Scenario::new("silent", vec![OutcomeSpec::new("a", Rational::one(), 0)]);
        let report = simulate_betting(&s, &Query::True, &Rational::new(1, 2), 50, 3);
        assert_eq!(report.questions, 0);
        assert_eq!(report.avg_profit_per_question, 0.0);
        assert_eq!(report.total_profit, 0.0);
    }

    #[test]
    fn bet_report_json_round_trip() {
        let report = simulate_betting(
            &sb(),
            &Query::outcome_is("heads"),
            &Rational::new(1, 3),
            100,
            2,
        );
        let json = serde_json::to_string(&report).unwrap();
        let back: BetReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
