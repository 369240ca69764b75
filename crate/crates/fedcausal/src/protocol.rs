//! Trial execution for the three collaboration protocols: adapt,
//! participate, combine, broadcast — with an optional do-intervention that
//! pins one agent's intermediate belief to a fixed pmf.
//!
//! A single trial is strictly sequential (the fusion-center belief is a
//! serial dependency); distinct trials are independent and may run
//! concurrently on shared immutable scenarios.

use crate::belief::{Belief, HypothesisSpace, LogBeliefRatioVector};
use crate::error::{Error, Result};
use crate::fingerprint::FingerprintHasher;
use crate::likelihood::LikelihoodModel;
use crate::rng::TrialRng;
use rand::Rng;

/// Collaboration protocol between the agents and the fusion center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolMode {
    /// Every agent transmits every step.
    Synchronous,
    /// Agents transmit with probability `p_k`; idle agents still receive
    /// the broadcast, and the fusion center fills their slots with its own
    /// prior.
    Asymmetric,
    /// Non-transmitting agents receive nothing back and continue from
    /// their own intermediate beliefs.
    Symmetric,
}

impl ProtocolMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolMode::Synchronous => "synchronous",
            ProtocolMode::Asymmetric => "asymmetric",
            ProtocolMode::Symmetric => "symmetric",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "synchronous" => Ok(ProtocolMode::Synchronous),
            "asymmetric" => Ok(ProtocolMode::Asymmetric),
            "symmetric" => Ok(ProtocolMode::Symmetric),
            other => Err(Error::invalid(
                "protocol mode",
                format!("{other:?} (expected synchronous, asymmetric or symmetric)"),
            )),
        }
    }

    pub fn all() -> [ProtocolMode; 3] {
        [
            ProtocolMode::Synchronous,
            ProtocolMode::Asymmetric,
            ProtocolMode::Symmetric,
        ]
    }
}

/// One agent: its observation model, the fusion-center confidence weight
/// assigned to it, and its participation probability.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSpec {
    pub model: LikelihoodModel,
    pub confidence_weight: f64,
    pub participation_prob: f64,
}

/// Pin agent `target`'s intermediate belief to `fixed_belief` at every
/// step. The agent's observations are neither sampled nor consumed;
/// participation sampling is unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct InterventionSpec {
    pub target: usize,
    pub fixed_belief: Belief,
}

/// A fully validated experiment scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    mode: ProtocolMode,
    space: HypothesisSpace,
    agents: Vec<AgentSpec>,
    intervention: Option<InterventionSpec>,
    initial_prior: Belief,
}

impl Scenario {
    pub fn new(
        mode: ProtocolMode,
        space: HypothesisSpace,
        agents: Vec<AgentSpec>,
        intervention: Option<InterventionSpec>,
        initial_prior: Option<Belief>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::invalid("scenario", "agent roster is empty"));
        }
        let h = space.len();
        let mut weight_sum = 0.0;
        for (k, agent) in agents.iter().enumerate() {
            if agent.model.hypothesis_count() != h {
                return Err(Error::invalid(
                    "scenario",
                    format!(
                        "agent {k} model covers {} hypotheses, space has {h}",
                        agent.model.hypothesis_count()
                    ),
                ));
            }
            if !(agent.confidence_weight > 0.0 && agent.confidence_weight <= 1.0) {
                return Err(Error::invalid(
                    "scenario",
                    format!(
                        "agent {k} confidence weight {} outside (0, 1]",
                        agent.confidence_weight
                    ),
                ));
            }
            if !(0.0..=1.0).contains(&agent.participation_prob) {
                return Err(Error::invalid(
                    "scenario",
                    format!(
                        "agent {k} participation probability {} outside [0, 1]",
                        agent.participation_prob
                    ),
                ));
            }
            weight_sum += agent.confidence_weight;
        }
        if (weight_sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "scenario",
                format!("confidence weights sum to {weight_sum}, expected 1 within 1e-9"),
            ));
        }
        if let Some(iv) = &intervention {
            if iv.target >= agents.len() {
                return Err(Error::invalid(
                    "scenario",
                    format!("intervention target {} out of range", iv.target),
                ));
            }
            if iv.fixed_belief.len() != h {
                return Err(Error::invalid(
                    "scenario",
                    "intervention belief length does not match the hypothesis space",
                ));
            }
        }
        let initial_prior = match initial_prior {
            Some(p) => {
                if p.len() != h {
                    return Err(Error::invalid(
                        "scenario",
                        "initial prior length does not match the hypothesis space",
                    ));
                }
                p
            }
            None => Belief::uniform(h),
        };
        Ok(Self {
            mode,
            space,
            agents,
            intervention,
            initial_prior,
        })
    }

    pub fn mode(&self) -> ProtocolMode {
        self.mode
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn intervention(&self) -> Option<&InterventionSpec> {
        self.intervention.as_ref()
    }

    pub fn initial_prior(&self) -> &Belief {
        &self.initial_prior
    }

    pub fn weights(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.confidence_weight).collect()
    }

    pub fn participation(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.participation_prob).collect()
    }

    /// Copy with a different protocol mode.
    pub fn with_mode(&self, mode: ProtocolMode) -> Scenario {
        let mut s = self.clone();
        s.mode = mode;
        s
    }

    /// Copy with a different intervention (or none).
    pub fn with_intervention(&self, intervention: Option<InterventionSpec>) -> Result<Scenario> {
        Scenario::new(
            self.mode,
            self.space.clone(),
            self.agents.clone(),
            intervention,
            Some(self.initial_prior.clone()),
        )
    }

    /// Copy with one agent's participation probability replaced.
    pub fn with_participation(&self, agent: usize, p: f64) -> Result<Scenario> {
        let mut agents = self.agents.clone();
        if agent >= agents.len() {
            return Err(Error::invalid("scenario", "agent index out of range"));
        }
        agents[agent].participation_prob = p;
        Scenario::new(
            self.mode,
            self.space.clone(),
            agents,
            self.intervention.clone(),
            Some(self.initial_prior.clone()),
        )
    }

    /// Fingerprint of every field, including the intervention.
    pub fn fingerprint(&self) -> String {
        let mut h = FingerprintHasher::new();
        self.fingerprint_core_into(&mut h);
        match &self.intervention {
            None => h.write_str("no-intervention"),
            Some(iv) => {
                h.write_str("intervention");
                h.write_usize(iv.target);
                for &lm in iv.fixed_belief.log_mass() {
                    h.write_f64(lm);
                }
            }
        }
        h.finish_hex()
    }

    /// Fingerprint of everything except the intervention; two scenarios
    /// that differ only in the intervention share this value.
    pub fn core_fingerprint(&self) -> String {
        let mut h = FingerprintHasher::new();
        self.fingerprint_core_into(&mut h);
        h.finish_hex()
    }

    fn fingerprint_core_into(&self, h: &mut FingerprintHasher) {
        h.write_str(self.mode.as_str());
        h.write_usize(self.space.len());
        for label in self.space.labels() {
            h.write_str(label);
        }
        h.write_usize(self.space.true_index());
        h.write_usize(self.agents.len());
        for agent in &self.agents {
            agent.model.fingerprint_into(h);
            h.write_f64(agent.confidence_weight);
            h.write_f64(agent.participation_prob);
        }
        for &lm in self.initial_prior.log_mass() {
            h.write_f64(lm);
        }
    }
}

/// Which agents transmitted at one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipationMask {
    q: Vec<bool>,
}

impl ParticipationMask {
    pub fn new(q: Vec<bool>) -> Self {
        Self { q }
    }

    pub fn all_true(len: usize) -> Self {
        Self {
            q: vec![true; len],
        }
    }

    pub fn get(&self, agent: usize) -> bool {
        self.q[agent]
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.q
    }
}

/// Time-indexed record of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// Fusion-center belief after each combine.
    pub fc_beliefs: Vec<Belief>,
    /// Fusion-center log-belief ratios after each combine.
    pub fc_lbr: Vec<LogBeliefRatioVector>,
    /// Participation mask at each step.
    pub masks: Vec<ParticipationMask>,
    /// Per-agent held beliefs after each step; populated in symmetric mode
    /// only (elsewhere every agent holds the broadcast).
    pub agent_beliefs: Option<Vec<Vec<Belief>>>,
    /// Per-step log-likelihood ratios `log L(x|true)/L(x|theta)` per agent;
    /// `None` for the intervened agent, whose observation is never drawn.
    pub llr: Option<Vec<Vec<Option<Vec<f64>>>>>,
}

impl Trace {
    pub fn horizon(&self) -> usize {
        self.fc_beliefs.len()
    }
}

/// Bayes update of a prior by one row of log-likelihoods.
pub fn adapt(prior: &Belief, log_lik_row: &[f64]) -> Belief {
    let weights: Vec<f64> = prior
        .log_mass()
        .iter()
        .zip(log_lik_row)
        .map(|(lm, ll)| lm + ll)
        .collect();
    Belief::normalize_unchecked(&weights)
}

enum Slot<'a> {
    /// The agent's transmitted belief (or the fill-in chosen by the
    /// fusion center) enters the geometric average with its weight.
    Belief(&'a Belief),
    /// The slot is left out of the average entirely; normalization
    /// absorbs the missing weight.
    Absent,
}

/// Weighted geometric average in the log domain. One shared kernel so all
/// protocol modes execute identical floating-point operations when their
/// slot choices coincide.
fn combine_slots(slots: &[Slot<'_>], weights: &[f64], hypotheses: usize) -> Belief {
    let mut acc = vec![0.0; hypotheses];
    for (slot, &w) in slots.iter().zip(weights) {
        if let Slot::Belief(b) = slot {
            for (a, &lm) in acc.iter_mut().zip(b.log_mass()) {
                *a += w * lm;
            }
        }
    }
    Belief::normalize_unchecked(&acc)
}

/// Fusion rule of the synchronous protocol: weighted geometric average of
/// all intermediate beliefs.
pub fn combine_synchronous(intermediates: &[Belief], weights: &[f64]) -> Belief {
    let slots: Vec<Slot<'_>> = intermediates.iter().map(Slot::Belief).collect();
    combine_slots(&slots, weights, intermediates[0].len())
}

/// Fusion rule of the asynchronous protocols: transmitting agents
/// contribute their intermediate beliefs, idle agents' slots are filled
/// with the fusion center's own prior. With an all-true mask this is
/// bit-for-bit `combine_synchronous`.
pub fn combine_asymmetric(
    intermediates: &[Belief],
    mask: &ParticipationMask,
    fc_prior: &Belief,
    weights: &[f64],
) -> Belief {
    let slots: Vec<Slot<'_>> = intermediates
        .iter()
        .enumerate()
        .map(|(k, b)| {
            if mask.get(k) {
                Slot::Belief(b)
            } else {
                Slot::Belief(fc_prior)
            }
        })
        .collect();
    combine_slots(&slots, weights, intermediates[0].len())
}

/// Independent Bernoulli participation draw for every agent, in roster
/// order, from the trial's dedicated participation stream.
pub fn sample_participation(agents: &[AgentSpec], rng: &mut rand_chacha::ChaCha12Rng) -> ParticipationMask {
    let q = agents
        .iter()
        .map(|a| rng.random::<f64>() < a.participation_prob)
        .collect();
    ParticipationMask::new(q)
}

/// Agent-side update of the symmetric protocol: adapt over the previous
/// broadcast if the agent received one (it transmitted last step),
/// otherwise over its own previous intermediate belief.
pub fn step_symmetric_agent(
    agent_state: &Belief,
    prev_q: bool,
    fc_belief_prev: &Belief,
    log_lik_row: &[f64],
) -> Belief {
    adapt(if prev_q { fc_belief_prev } else { agent_state }, log_lik_row)
}

/// Replace the intervened agent's intermediate belief with the fixed pmf.
/// Identity when no intervention is configured.
pub fn apply_intervention(intermediates: &mut [Belief], intervention: Option<&InterventionSpec>) {
    if let Some(iv) = intervention {
        intermediates[iv.target] = iv.fixed_belief.clone();
    }
}

/// Options for one trial.
#[derive(Debug, Clone, Copy)]
pub struct TrialOptions {
    pub horizon: usize,
    /// Record per-step log-likelihood ratios for diagnostics.
    pub record_llr: bool,
}

/// Run one trial over `horizon` steps: sample observations, adapt,
/// intervene, sample participation, combine, record. Fully deterministic
/// given the trial RNG.
pub fn run_trial(scenario: &Scenario, horizon: usize, rng: &mut TrialRng) -> Result<Trace> {
    run_trial_with_options(
        scenario,
        &TrialOptions {
            horizon,
            record_llr: false,
        },
        rng,
    )
}

pub fn run_trial_with_options(
    scenario: &Scenario,
    options: &TrialOptions,
    rng: &mut TrialRng,
) -> Result<Trace> {
    let horizon = options.horizon;
    let agents = scenario.agents();
    let k = agents.len();
    let h = scenario.space().len();
    let true_index = scenario.space().true_index();
    let weights = scenario.weights();
    let intervened = scenario.intervention().map(|iv| iv.target);

    // Streams consumed by the trial must cover the horizon. The intervened
    // agent's rows are ignored entirely, so its stream does not constrain.
    for (ki, agent) in agents.iter().enumerate() {
        if Some(ki) == intervened {
            continue;
        }
        if let Some(stream) = agent.model.as_stream() {
            if horizon > stream.horizon() {
                return Err(Error::ExhaustedStream {
                    agent: ki,
                    requested: horizon,
                    available: stream.horizon(),
                });
            }
        }
    }

    let symmetric = scenario.mode() == ProtocolMode::Symmetric;
    let mut fc = scenario.initial_prior().clone();
    // Symmetric agent-side state: previous intermediate beliefs, with the
    // shared prior standing in before the first step. All agents are
    // treated as having received the initial broadcast (q at step 0 is 1).
    let mut prev_psi: Vec<Belief> = vec![fc.clone(); k];
    let mut prev_mask = ParticipationMask::all_true(k);

    let mut trace = Trace {
        fc_beliefs: Vec::with_capacity(horizon),
        fc_lbr: Vec::with_capacity(horizon),
        masks: Vec::with_capacity(horizon),
        agent_beliefs: symmetric.then(|| Vec::with_capacity(horizon)),
        llr: options.record_llr.then(|| Vec::with_capacity(horizon)),
    };

    for step in 0..horizon {
        // Observations and per-hypothesis log-likelihood rows. The
        // intervened agent's observation substream is never advanced.
        let mut rows: Vec<Option<Vec<f64>>> = Vec::with_capacity(k);
        for (ki, agent) in agents.iter().enumerate() {
            if Some(ki) == intervened {
                rows.push(None);
                continue;
            }
            let row = match &agent.model {
                LikelihoodModel::Stream(source) => source.row(step).to_vec(),
                model => {
                    let obs = model.sample_observation(true_index, rng.observation(ki))?;
                    model.log_likelihood_row(&obs)?
                }
            };
            rows.push(Some(row));
        }

        // Adapt.
        let mut intermediates: Vec<Belief> = Vec::with_capacity(k);
        for ki in 0..k {
            match &rows[ki] {
                // Placeholder; replaced by the intervention right below.
                None => intermediates.push(fc.clone()),
                Some(row) => {
                    let psi = if symmetric {
                        step_symmetric_agent(&prev_psi[ki], prev_mask.get(ki), &fc, row)
                    } else {
                        adapt(&fc, row)
                    };
                    intermediates.push(psi);
                }
            }
        }

        apply_intervention(&mut intermediates, scenario.intervention());

        // Participate. The synchronous protocol has no participation
        // concept; its mask is recorded as all-true without touching the
        // participation stream.
        let mask = match scenario.mode() {
            ProtocolMode::Synchronous => ParticipationMask::all_true(k),
            _ => sample_participation(agents, rng.participation()),
        };

        // Combine.
        let next_fc = match scenario.mode() {
            ProtocolMode::Synchronous => combine_synchronous(&intermediates, &weights),
            ProtocolMode::Asymmetric => {
                let slots: Vec<Slot<'_>> = intermediates
                    .iter()
                    .enumerate()
                    .map(|(ki, b)| {
                        if mask.get(ki) {
                            Slot::Belief(b)
                        } else if Some(ki) == intervened {
                            // The intervened agent's belief is pinned to a
                            // constant; when it stays silent there is no
                            // information to impute, and its slot is left
                            // out of the average. This is the dynamics the
                            // closed-form steady state describes.
                            Slot::Absent
                        } else {
                            Slot::Belief(&fc)
                        }
                    })
                    .collect();
                combine_slots(&slots, &weights, h)
            }
            ProtocolMode::Symmetric => combine_asymmetric(&intermediates, &mask, &fc, &weights),
        };

        // Record.
        trace.fc_lbr.push(next_fc.to_lbr(scenario.space()));
        if let Some(agent_series) = trace.agent_beliefs.as_mut() {
            // What each agent holds after the round: the broadcast if it
            // participated, its own intermediate belief otherwise.
            let held: Vec<Belief> = (0..k)
                .map(|ki| {
                    if mask.get(ki) {
                        next_fc.clone()
                    } else {
                        intermediates[ki].clone()
                    }
                })
                .collect();
            agent_series.push(held);
        }
        if let Some(llr_series) = trace.llr.as_mut() {
            let step_llr: Vec<Option<Vec<f64>>> = rows
                .iter()
                .map(|row| {
                    row.as_ref()
                        .map(|r| r.iter().map(|v| r[true_index] - v).collect())
                })
                .collect();
            llr_series.push(step_llr);
        }
        trace.masks.push(mask.clone());

        if symmetric {
            prev_psi = intermediates;
            prev_mask = mask;
        }
        trace.fc_beliefs.push(next_fc.clone());
        fc = next_fc;
    }

    Ok(trace)
}
