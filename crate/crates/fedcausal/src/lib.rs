//! Simulation and analysis toolkit for federated multi-agent hypothesis
//! inference with causal influence scores.
//!
//! A group of agents observes streaming data, runs local Bayesian updates,
//! and shares intermediate beliefs with a fusion center that aggregates
//! them by confidence-weighted geometric averaging and broadcasts the
//! result. Three collaboration protocols are covered: synchronous (all
//! agents transmit every step), asymmetric (agents transmit with their own
//! Bernoulli participation probability but always receive the broadcast)
//! and symmetric (non-transmitting agents receive nothing and continue
//! from their own beliefs).
//!
//! The causal influence of one agent on the joint decision is measured by
//! a do-intervention: pin that agent's intermediate belief to a fixed pmf
//! and record how much steady-state belief mass the fusion center loses on
//! the true hypothesis. The toolkit computes this impact three ways and
//! checks them against one another:
//!
//! 1. closed forms for the steady-state log-belief ratio under all three
//!    protocols ([`analytics`]),
//! 2. an independent matrix steady state — a linear expected-value
//!    recursion solved numerically ([`oracle`]),
//! 3. seeded Monte Carlo ensembles of the actual protocols ([`ensemble`],
//!    [`protocol`]).
//!
//! # Library layout
//!
//! - [`belief`] — hypothesis spaces, log-domain beliefs, log-belief ratios
//! - [`likelihood`] — Gaussian / categorical models, informativeness (KL),
//!   likelihood-stream replay from CSV
//! - [`protocol`] — scenarios, trial execution, interventions
//! - [`analytics`] — closed-form impacts, misinformation thresholds,
//!   normalized rankings
//! - [`oracle`] — expected-LBR recursion matrices and the matrix
//!   steady-state solver
//! - [`ensemble`] — parallel seeded ensembles, theory comparison,
//!   empirical impact, parameter sweeps
//! - [`config`] / [`report`] / [`cli`] — experiment files, CSV/JSON
//!   emission, command front end
//!
//! # Runnable examples
//!
//! One example per capability lives under `examples/`:
//!
//! ```text
//! cargo run --example belief_basics          # log-domain belief primitives
//! cargo run --example likelihoods            # models, sampling, informativeness
//! cargo run --example single_trial           # one trial per protocol
//! cargo run --example intervention_impact    # closed forms + matrix oracle
//! cargo run --example ensemble_vs_theory     # Monte Carlo vs closed forms
//! cargo run --example participation_sweep    # impact vs participation rate
//! cargo run --example misinformation_sweep   # impact vs intervention dose
//! cargo run --example impact_rankings        # normalized per-agent scores
//! cargo run --example stream_replay          # file-based likelihood replay
//! ```
//!
//! The `fedcausal` binary exposes the same machinery as subcommands; see
//! the README for the config schema and output formats.

pub mod analytics;
pub mod belief;
pub mod cli;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod fingerprint;
pub mod likelihood;
mod linalg;
pub mod oracle;
pub mod protocol;
pub mod report;
pub mod rng;

pub use belief::{Belief, HypothesisSpace, LogBeliefRatioVector};
pub use error::{Error, Result};
pub use likelihood::{
    CategoricalModel, GaussianMeanModel, InformativenessMatrix, LikelihoodModel,
    LikelihoodStreamSource, Observation,
};
pub use protocol::{
    AgentSpec, InterventionSpec, ParticipationMask, ProtocolMode, Scenario, Trace,
};
pub use rng::TrialRng;
