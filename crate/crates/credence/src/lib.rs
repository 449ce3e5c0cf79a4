//! A probability-experiment engine that individuates events by their
//! experimental setup.
//!
//! A [`model::Scenario`] describes a one-shot branching experiment: one
//! categorical draw whose outcomes each put a fixed number of tagged
//! observation tokens "in the box". The same predicate can then be priced
//! under two different measures:
//!
//! * the **trial frame** — one event per run of the experiment, weighing
//!   each outcome by its probability ([`exact::trial_probability`]);
//! * the **observation frame** — one event per token drawn from the box,
//!   which size-biases outcomes by how many tokens they emit
//!   ([`exact::observation_probability`]).
//!
//! For the classic two-outcome coin experiment (heads wakes once, tails
//! twice) the same words "the coin landed heads" are worth exactly 1/2 in
//! the trial frame and exactly 1/3 in the observation frame; both numbers
//! are correct answers to different questions, and the engine computes
//! each exactly, verifies them by reproducible simulation ([`mc`]), and
//! operationalises the observation value as fair betting odds
//! ([`betting`]).
//!
//! All model values are immutable after construction and every engine
//! operation is a pure function, so everything here is safe to share
//! across threads.

pub mod betting;
pub mod exact;
pub mod io;
pub mod mc;
pub mod model;
pub mod rational;

pub use betting::{fair_price, settle_bets, simulate_betting, BetReport};
pub use exact::{
    average_tokens_per_trial, observation_conditional, observation_probability,
    production_event_probability, trial_probability, ExactError, ExactResult,
};
pub use mc::{
    draw_token, estimate_observation, estimate_trial, estimate_trial_in_box, run_trials,
    run_trials_with_workers, SimError, SimReport, TokenBox,
};
pub use model::{validate_scenario, Frame, OutcomeSpec, Query, Scenario, Token, ValidationError};
pub use rational::{Rational, RationalError};
