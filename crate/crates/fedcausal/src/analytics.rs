//! Closed-form steady-state log-belief ratios under an intervention, the
//! causal impact they induce, the misinformation threshold separating the
//! two asynchronous protocols, and normalized per-agent impact rankings.
//!
//! Everything here is a pure function of the roster parameters
//! (confidence weights, participation probabilities, informativeness) and
//! the intervention belief.

use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::likelihood::InformativenessMatrix;
use crate::protocol::ProtocolMode;

/// Per-agent steady-state ratios, causal impacts and normalized scores for
/// one protocol under a common intervention belief.
#[derive(Debug, Clone)]
pub struct ImpactReport {
    pub mode: ProtocolMode,
    pub true_index: usize,
    /// Steady-state log-belief ratio vector per intervened agent; entry at
    /// the true hypothesis is 0, entries may be `+inf`.
    pub lambda_inf: Vec<Vec<f64>>,
    /// Causal impact per agent, in `[0, 1)`.
    pub impact: Vec<f64>,
    /// Impacts normalized to sum to one across the roster.
    pub normalized: Vec<f64>,
}

/// `log mass(true)/mass(theta)` of the intervention belief, the additive
/// misinformation term of every closed form.
fn intervention_log_ratios(mu_m: &Belief, true_index: usize) -> Vec<f64> {
    let lm = mu_m.log_mass();
    lm.iter().map(|&v| lm[true_index] - v).collect()
}

/// Steady-state log-belief ratios when agent `m` is intervened under the
/// synchronous protocol: the other agents' confidence-weighted
/// informativeness, rescaled by `1/weight_m`, plus the intervention's own
/// log ratio.
pub fn lambda_inf_synchronous(
    weights: &[f64],
    d: &InformativenessMatrix,
    m: usize,
    mu_m: &Belief,
) -> Vec<f64> {
    let t = d.true_index();
    let ratios = intervention_log_ratios(mu_m, t);
    (0..d.hypothesis_count())
        .map(|theta| {
            if theta == t {
                return 0.0;
            }
            let info: f64 = (0..d.agent_count())
                .filter(|&k| k != m)
                .map(|k| weights[k] * d.value(k, theta))
                .sum();
            info / weights[m] + ratios[theta]
        })
        .collect()
}

/// Asymmetric-protocol counterpart: other agents enter with effective
/// weights `weight * participation`, and the misinformation term is scaled
/// by the intervened agent's own participation probability.
pub fn lambda_inf_asymmetric(
    weights: &[f64],
    participation: &[f64],
    d: &InformativenessMatrix,
    m: usize,
    mu_m: &Belief,
) -> Vec<f64> {
    let t = d.true_index();
    let ratios = intervention_log_ratios(mu_m, t);
    (0..d.hypothesis_count())
        .map(|theta| {
            if theta == t {
                return 0.0;
            }
            let info: f64 = (0..d.agent_count())
                .filter(|&k| k != m)
                .map(|k| weights[k] * participation[k] * d.value(k, theta))
                .sum();
            info / weights[m] + participation[m] * ratios[theta]
        })
        .collect()
}

/// Symmetric-protocol counterpart. An agent that never participates has no
/// impact at all: at `participation[m] = 0` every wrong-hypothesis entry is
/// `+inf` and the causal impact is exactly zero.
pub fn lambda_inf_symmetric(
    weights: &[f64],
    participation: &[f64],
    d: &InformativenessMatrix,
    m: usize,
    mu_m: &Belief,
) -> Vec<f64> {
    let t = d.true_index();
    let ratios = intervention_log_ratios(mu_m, t);
    (0..d.hypothesis_count())
        .map(|theta| {
            if theta == t {
                return 0.0;
            }
            if participation[m] == 0.0 {
                return f64::INFINITY;
            }
            let info: f64 = (0..d.agent_count())
                .filter(|&k| k != m)
                .map(|k| {
                    weights[k] * d.value(k, theta) / (1.0 - weights[k] * (1.0 - participation[k]))
                })
                .sum();
            info / (weights[m] * participation[m]) + ratios[theta]
        })
        .collect()
}

/// Steady-state loss of belief mass on the true hypothesis:
/// `1 - 1/(1 + sum over wrong theta of exp(-lambda(theta)))`.
/// Strictly decreasing in every entry; `+inf` entries contribute nothing.
pub fn causal_impact(lambda_inf: &[f64], true_index: usize) -> f64 {
    let tail: f64 = lambda_inf
        .iter()
        .enumerate()
        .filter(|(theta, _)| *theta != true_index)
        .map(|(_, &v)| (-v).exp())
        .sum();
    1.0 - 1.0 / (1.0 + tail)
}

/// Misinformation strength above which the intervened agent exerts a
/// stronger causal impact under the symmetric protocol than under the
/// asymmetric one, for one wrong hypothesis.
///
/// At `participation[m] = 1` the two protocols coincide with the
/// synchronous one and the threshold is undefined; at 0 the comparison is
/// degenerate as well.
pub fn misinformation_threshold(
    weights: &[f64],
    participation: &[f64],
    d: &InformativenessMatrix,
    m: usize,
    theta: usize,
) -> Result<f64> {
    let pm = participation[m];
    if pm <= 0.0 || pm >= 1.0 {
        return Err(Error::UndefinedThreshold(format!(
            "intervened agent participation must lie strictly between 0 and 1, got {pm}; \
             at 1 both protocols coincide and at 0 the agent has no impact either way"
        )));
    }
    if theta == d.true_index() {
        return Err(Error::UndefinedThreshold(
            "threshold is defined for wrong hypotheses only".into(),
        ));
    }
    let sum: f64 = (0..d.agent_count())
        .filter(|&k| k != m)
        .map(|k| {
            let pk = participation[k];
            let bracket = 1.0 / (pm * (1.0 - weights[k] * (1.0 - pk))) - pk;
            weights[k] * d.value(k, theta) / (weights[m] * (1.0 - pm)) * bracket
        })
        .sum();
    Ok(sum)
}

/// Belief whose log ratio `log mass(true)/mass(theta)` equals `c` for every
/// wrong hypothesis; `c = 0` is the uniform belief. This is the
/// single-knob intervention used by sweeps over misinformation strength.
pub fn belief_from_log_ratio(c: f64, hypotheses: usize, true_index: usize) -> Result<Belief> {
    let weights: Vec<f64> = (0..hypotheses)
        .map(|i| if i == true_index { c } else { 0.0 })
        .collect();
    Belief::from_log_weights(&weights)
}

/// Closed-form impact of every agent under one protocol, with a common
/// intervention belief (uniform by default, making the ranking independent
/// of intervention dose).
pub fn impact_report(
    mode: ProtocolMode,
    weights: &[f64],
    participation: &[f64],
    d: &InformativenessMatrix,
    intervention_belief: Option<&Belief>,
) -> Result<ImpactReport> {
    let k = d.agent_count();
    if weights.len() != k || participation.len() != k {
        return Err(Error::invalid(
            "impact report",
            "weights/participation length does not match the informativeness matrix",
        ));
    }
    let uniform = Belief::uniform(d.hypothesis_count());
    let mu = intervention_belief.unwrap_or(&uniform);
    let lambda_inf: Vec<Vec<f64>> = (0..k)
        .map(|m| match mode {
            ProtocolMode::Synchronous => lambda_inf_synchronous(weights, d, m, mu),
            ProtocolMode::Asymmetric => lambda_inf_asymmetric(weights, participation, d, m, mu),
            ProtocolMode::Symmetric => lambda_inf_symmetric(weights, participation, d, m, mu),
        })
        .collect();
    let impact: Vec<f64> = lambda_inf
        .iter()
        .map(|lam| causal_impact(lam, d.true_index()))
        .collect();
    let total: f64 = impact.iter().sum();
    let normalized = if total > 0.0 {
        impact.iter().map(|c| c / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    };
    Ok(ImpactReport {
        mode,
        true_index: d.true_index(),
        lambda_inf,
        impact,
        normalized,
    })
}
