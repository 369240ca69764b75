//! Ensemble execution and theory-vs-simulation comparison.
//!
//! Replicas run concurrently with no shared mutable state; each derives its
//! own substreams from `(master_seed, replica_index)`. Reduction happens
//! after all replicas complete, in replica-index order, with pairwise tree
//! summation — so the result is bitwise independent of the parallelism
//! degree and of scheduling order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::fingerprint::FingerprintHasher;
use crate::likelihood::InformativenessMatrix;
use crate::protocol::{run_trial, ProtocolMode, Scenario};
use crate::rng::TrialRng;
use crate::analytics;

/// Execution parameters of one ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub horizon: usize,
    pub replicas: usize,
    pub master_seed: u64,
    /// Worker threads; affects runtime only, never results.
    pub parallelism: usize,
}

/// Fraction of the horizon treated as "steady state" when a terminal
/// statistic is needed: the mean over the final tenth of the steps, which
/// averages out single-step Monte Carlo noise.
pub const TAIL_FRACTION: f64 = 0.1;

/// Number of trailing steps in the steady-state window.
pub fn tail_window(horizon: usize) -> usize {
    if horizon == 0 {
        0
    } else {
        ((horizon as f64 * TAIL_FRACTION).ceil() as usize).max(1)
    }
}

struct ReplicaSeries {
    lbr: Vec<Vec<f64>>, // [wrong-theta][step]
    belief_true: Vec<f64>,
    tail_lbr: Vec<f64>, // [wrong-theta]
    tail_belief: f64,
}

/// Ensemble-mean trajectories and steady-state summaries.
#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub mode: ProtocolMode,
    pub true_index: usize,
    /// Wrong-hypothesis indices, in hypothesis order; all LBR series and
    /// tail statistics are aligned with this list.
    pub wrong_thetas: Vec<usize>,
    pub mean_lbr: Vec<Vec<f64>>,
    pub se_lbr: Vec<Vec<f64>>,
    pub mean_belief_true: Vec<f64>,
    pub se_belief_true: Vec<f64>,
    /// Mean over replicas of the per-replica steady-state (tail) LBR mean.
    pub tail_lbr_mean: Vec<f64>,
    /// Standard error of that mean across replicas.
    pub tail_lbr_se: Vec<f64>,
    pub tail_belief_mean: f64,
    pub tail_belief_se: f64,
    pub horizon: usize,
    pub replicas: usize,
    pub master_seed: u64,
    /// Hash of the scenario alone; pairs results with analytics.
    pub scenario_fingerprint: String,
    /// Hash of scenario, horizon, replica count and master seed.
    pub run_fingerprint: String,
}

fn run_fingerprint(scenario: &Scenario, settings: &RunSettings) -> String {
    let mut h = FingerprintHasher::new();
    h.write_str(&scenario.fingerprint());
    h.write_usize(settings.horizon);
    h.write_usize(settings.replicas);
    h.write_u64(settings.master_seed);
    h.finish_hex()
}

/// Element-wise pairwise-tree sum of one extracted series across a replica
/// range. Fixed association order makes the reduction deterministic.
fn tree_sum<F>(replicas: &[ReplicaSeries], extract: &F, lo: usize, hi: usize) -> Vec<f64>
where
    F: Fn(&ReplicaSeries) -> Vec<f64>,
{
    if hi - lo == 1 {
        return extract(&replicas[lo]);
    }
    let mid = lo + (hi - lo) / 2;
    let mut left = tree_sum(replicas, extract, lo, mid);
    let right = tree_sum(replicas, extract, mid, hi);
    for (a, b) in left.iter_mut().zip(&right) {
        *a += b;
    }
    left
}

fn mean_and_se<F>(replicas: &[ReplicaSeries], extract: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&ReplicaSeries) -> Vec<f64>,
{
    let n = replicas.len();
    let sums = tree_sum(replicas, &extract, 0, n);
    let mean: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    if n < 2 {
        let se = vec![0.0; mean.len()];
        return (mean, se);
    }
    let mean_ref = &mean;
    let sq = tree_sum(
        replicas,
        &|r: &ReplicaSeries| {
            extract(r)
                .iter()
                .zip(mean_ref)
                .map(|(x, m)| (x - m) * (x - m))
                .collect()
        },
        0,
        n,
    );
    let se = sq
        .iter()
        .map(|s| (s / ((n - 1) as f64 * n as f64)).sqrt())
        .collect();
    (mean, se)
}

/// Run `settings.replicas` independent trials of the scenario and reduce
/// them into ensemble means with standard errors.
pub fn run_ensemble(scenario: &Scenario, settings: &RunSettings) -> Result<EnsembleResult> {
    if settings.replicas == 0 {
        return Err(Error::invalid("run settings", "replicas must be >= 1"));
    }
    let n = settings.replicas;
    let horizon = settings.horizon;
    let true_index = scenario.space().true_index();
    let wrong_thetas: Vec<usize> = scenario.space().wrong_indices().collect();
    let tail = tail_window(horizon);
    let k = scenario.agent_count();

    let slots: Mutex<Vec<Option<std::result::Result<ReplicaSeries, Error>>>> =
        Mutex::new((0..n).map(|_| None).collect());
    let next_replica = AtomicUsize::new(0);
    let workers = settings.parallelism.max(1).min(n);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let r = next_replica.fetch_add(1, Ordering::Relaxed);
                if r >= n {
                    break;
                }
                let outcome = (|| -> Result<ReplicaSeries> {
                    let mut rng = TrialRng::for_replica(settings.master_seed, r as u64, k);
                    let trace = run_trial(scenario, horizon, &mut rng)?;
                    let lbr: Vec<Vec<f64>> = wrong_thetas
                        .iter()
                        .map(|&theta| {
                            trace.fc_lbr.iter().map(|l| l.values()[theta]).collect()
                        })
                        .collect();
                    let belief_true: Vec<f64> = trace
                        .fc_beliefs
                        .iter()
                        .map(|b| b.mass(true_index))
                        .collect();
                    let tail_lbr = lbr
                        .iter()
                        .map(|series| {
                            if tail == 0 {
                                f64::NAN
                            } else {
                                series[horizon - tail..].iter().sum::<f64>() / tail as f64
                            }
                        })
                        .collect();
                    let tail_belief = if tail == 0 {
                        f64::NAN
                    } else {
                        belief_true[horizon - tail..].iter().sum::<f64>() / tail as f64
                    };
                    Ok(ReplicaSeries {
                        lbr,
                        belief_true,
                        tail_lbr,
                        tail_belief,
                    })
                })();
                slots.lock().expect("replica slot lock")[r] = Some(outcome);
            });
        }
    });

    let collected = slots.into_inner().expect("replica slots");
    let mut series = Vec::with_capacity(n);
    for (r, slot) in collected.into_iter().enumerate() {
        match slot {
            Some(Ok(s)) => series.push(s),
            Some(Err(e)) => {
                return Err(Error::ReplicaFailed {
                    replica: r,
                    source: Box::new(e),
                })
            }
            None => {
                return Err(Error::InternalConsistency(format!(
                    "replica {r} never produced a result"
                )))
            }
        }
    }

    let theta_count = wrong_thetas.len();
    let mut mean_lbr = Vec::with_capacity(theta_count);
    let mut se_lbr = Vec::with_capacity(theta_count);
    for ti in 0..theta_count {
        let (mean, se) = mean_and_se(&series, |r| r.lbr[ti].clone());
        mean_lbr.push(mean);
        se_lbr.push(se);
    }
    let (mean_belief_true, se_belief_true) = mean_and_se(&series, |r| r.belief_true.clone());
    let (tail_lbr_mean, tail_lbr_se) = mean_and_se(&series, |r| r.tail_lbr.clone());
    let (tail_belief_vec, tail_belief_se_vec) =
        mean_and_se(&series, |r| vec![r.tail_belief]);

    Ok(EnsembleResult {
        mode: scenario.mode(),
        true_index,
        wrong_thetas,
        mean_lbr,
        se_lbr,
        mean_belief_true,
        se_belief_true,
        tail_lbr_mean,
        tail_lbr_se,
        tail_belief_mean: tail_belief_vec[0],
        tail_belief_se: tail_belief_se_vec[0],
        horizon,
        replicas: n,
        master_seed: settings.master_seed,
        scenario_fingerprint: scenario.fingerprint(),
        run_fingerprint: run_fingerprint(scenario, settings),
    })
}

/// Closed-form prediction to hold a simulation against.
#[derive(Debug, Clone)]
pub struct TheoryPrediction {
    pub scenario_fingerprint: String,
    /// Expected steady-state LBR per wrong hypothesis, in hypothesis order.
    pub lambda_inf: Vec<f64>,
}

impl TheoryPrediction {
    /// Extract the wrong-hypothesis entries from a full-length vector.
    pub fn from_lambda_vector(scenario: &Scenario, lambda: &[f64]) -> Self {
        let wrong: Vec<f64> = scenario
            .space()
            .wrong_indices()
            .map(|t| lambda[t])
            .collect();
        Self {
            scenario_fingerprint: scenario.fingerprint(),
            lambda_inf: wrong,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub theta: usize,
    pub simulated: f64,
    pub theoretical: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
    pub all_pass: bool,
}

/// Compare the ensemble's steady-state LBR means against a closed-form
/// prediction at a relative tolerance. Refuses to pair results built from
/// different scenarios.
pub fn compare_to_theory(
    result: &EnsembleResult,
    theory: &TheoryPrediction,
    relative_tolerance: f64,
) -> Result<ComparisonReport> {
    if result.scenario_fingerprint != theory.scenario_fingerprint {
        return Err(Error::FingerprintMismatch(format!(
            "ensemble was built from scenario {} but the prediction is for {}",
            result.scenario_fingerprint, theory.scenario_fingerprint
        )));
    }
    if result.horizon == 0 {
        return Err(Error::invalid(
            "comparison",
            "cannot compare a zero-horizon ensemble",
        ));
    }
    if theory.lambda_inf.len() != result.wrong_thetas.len() {
        return Err(Error::invalid(
            "comparison",
            "prediction length does not match the hypothesis space",
        ));
    }
    let rows: Vec<ComparisonRow> = result
        .wrong_thetas
        .iter()
        .zip(result.tail_lbr_mean.iter())
        .zip(theory.lambda_inf.iter())
        .map(|((&theta, &sim), &th)| {
            let abs_dev = (sim - th).abs();
            let rel_dev = if th != 0.0 { abs_dev / th.abs() } else { f64::INFINITY };
            let pass = if th != 0.0 {
                rel_dev <= relative_tolerance
            } else {
                abs_dev <= relative_tolerance
            };
            ComparisonRow {
                theta,
                simulated: sim,
                theoretical: th,
                abs_dev,
                rel_dev,
                pass,
            }
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(ComparisonReport {
        tolerance: relative_tolerance,
        rows,
        all_pass,
    })
}

/// Monte Carlo estimate of one agent's causal impact.
#[derive(Debug, Clone)]
pub struct EmpiricalImpact {
    pub target: usize,
    /// Steady-state LBR estimate per wrong hypothesis.
    pub lambda_tail: Vec<f64>,
    pub lambda_tail_se: Vec<f64>,
    /// Impact derived from the steady-state LBR estimate.
    pub impact: f64,
    /// Delta-method standard error of the impact estimate.
    pub impact_se: f64,
}

/// Estimate the causal impact of the intervened agent by simulation: run
/// the intervened scenario, average the fusion-center LBR over the final
/// tenth of the horizon and across replicas, and map the steady-state
/// estimate through the belief transform. This is the only impact path
/// available when agents are backed by likelihood streams.
///
/// `baseline` documents the pre-intervention system; the two scenarios
/// must differ only in the intervention.
pub fn empirical_impact(
    baseline: &Scenario,
    intervened: &Scenario,
    settings: &RunSettings,
) -> Result<EmpiricalImpact> {
    if baseline.intervention().is_some() {
        return Err(Error::invalid(
            "empirical impact",
            "baseline scenario must not carry an intervention",
        ));
    }
    let intervention = intervened.intervention().ok_or_else(|| {
        Error::invalid("empirical impact", "intervened scenario carries no intervention")
    })?;
    if baseline.core_fingerprint() != intervened.core_fingerprint() {
        return Err(Error::FingerprintMismatch(
            "baseline and intervened scenarios must differ only in the intervention".into(),
        ));
    }
    let result = run_ensemble(intervened, settings)?;
    let lambda_se = tail_lbr_se_for(intervened, &result);
    Ok(impact_from_tail(
        intervention.target,
        &result.tail_lbr_mean,
        &lambda_se,
    ))
}

/// Standard error of the steady-state LBR estimate.
///
/// The cross-replica spread is exact when replicas are fully independent.
/// A roster with stream-backed agents replays one shared observation path
/// in every replica, so the path's serially correlated noise does not
/// shrink with the replica count; a batch-means estimate over the
/// ensemble-mean tail series accounts for it.
fn tail_lbr_se_for(scenario: &Scenario, result: &EnsembleResult) -> Vec<f64> {
    let has_stream = scenario.agents().iter().any(|a| a.model.is_stream());
    if !has_stream {
        return result.tail_lbr_se.clone();
    }
    let window = tail_window(result.horizon);
    result
        .tail_lbr_se
        .iter()
        .enumerate()
        .map(|(ti, &replica_se)| {
            let series = &result.mean_lbr[ti][result.horizon - window..];
            let path_se = batch_means_se(series);
            (replica_se * replica_se + path_se * path_se).sqrt()
        })
        .collect()
}

/// Batch-means standard error of the mean of a serially correlated series.
fn batch_means_se(series: &[f64]) -> f64 {
    let batches = 10usize;
    if series.len() < 2 * batches {
        // window too short to resolve the correlation structure; fall back
        // to treating the whole window as one draw with unknown error
        return if series.len() < 2 {
            0.0
        } else {
            let mean = series.iter().sum::<f64>() / series.len() as f64;
            (series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                / (series.len() - 1) as f64)
                .sqrt()
        };
    }
    let len = series.len() / batches;
    let used = &series[series.len() - batches * len..];
    let means: Vec<f64> = used
        .chunks_exact(len)
        .map(|chunk| chunk.iter().sum::<f64>() / len as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means
        .iter()
        .map(|m| (m - grand) * (m - grand))
        .sum::<f64>()
        / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

fn impact_from_tail(target: usize, lambda: &[f64], lambda_se: &[f64]) -> EmpiricalImpact {
    let tail_sum: f64 = lambda.iter().map(|&l| (-l).exp()).sum();
    let denom = 1.0 + tail_sum;
    let impact = 1.0 - 1.0 / denom;
    // d impact / d lambda_theta = -exp(-lambda_theta) / denom^2
    let var: f64 = lambda
        .iter()
        .zip(lambda_se)
        .map(|(&l, &se)| {
            let g = (-l).exp() / (denom * denom);
            g * g * se * se
        })
        .sum();
    EmpiricalImpact {
        target,
        lambda_tail: lambda.to_vec(),
        lambda_tail_se: lambda_se.to_vec(),
        impact,
        impact_se: var.sqrt(),
    }
}

/// Sweepable experiment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Participation probability of the intervened agent.
    TargetParticipation,
    /// Intervention log ratio `log mass(true)/mass(wrong)`.
    InterventionLogRatio,
    Replicas,
    Horizon,
}

impl SweepParameter {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "p_m" => Ok(SweepParameter::TargetParticipation),
            "c" => Ok(SweepParameter::InterventionLogRatio),
            "replicas" => Ok(SweepParameter::Replicas),
            "horizon" => Ok(SweepParameter::Horizon),
            other => Err(Error::Usage(format!(
                "unknown sweep parameter {other:?} (expected p_m, c, replicas or horizon)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::TargetParticipation => "p_m",
            SweepParameter::InterventionLogRatio => "c",
            SweepParameter::Replicas => "replicas",
            SweepParameter::Horizon => "horizon",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    /// Closed-form steady-state LBR per wrong hypothesis, when the roster
    /// has generative models.
    pub analytic_lambda: Option<Vec<f64>>,
    pub analytic_impact: Option<f64>,
    pub empirical_impact: f64,
    pub empirical_se: f64,
    /// Simulated steady-state LBR per wrong hypothesis.
    pub empirical_lambda: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub mode: ProtocolMode,
    pub wrong_thetas: Vec<usize>,
    pub rows: Vec<SweepRow>,
}

/// Sweep one parameter over the given values. Every row reuses the same
/// master seed, so rows are coupled by common random numbers and the sweep
/// varies only the parameter of interest.
pub fn sweep(
    parameter: SweepParameter,
    values: &[f64],
    base: &Scenario,
    settings: &RunSettings,
) -> Result<SweepTable> {
    let intervention = base.intervention().cloned();
    if matches!(
        parameter,
        SweepParameter::TargetParticipation | SweepParameter::InterventionLogRatio
    ) && intervention.is_none()
    {
        return Err(Error::invalid(
            "sweep",
            "p_m and c sweeps need a scenario with an intervention",
        ));
    }
    let informativeness = {
        let models: Vec<&crate::likelihood::LikelihoodModel> =
            base.agents().iter().map(|a| &a.model).collect();
        InformativenessMatrix::from_models(&models, base.space()).ok()
    };

    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut row_settings = *settings;
        let row_scenario = match parameter {
            SweepParameter::TargetParticipation => {
                let target = intervention.as_ref().expect("checked above").target;
                base.with_participation(target, value)?
            }
            SweepParameter::InterventionLogRatio => {
                let target = intervention.as_ref().expect("checked above").target;
                let belief = analytics::belief_from_log_ratio(
                    value,
                    base.space().len(),
                    base.space().true_index(),
                )?;
                base.with_intervention(Some(crate::protocol::InterventionSpec {
                    target,
                    fixed_belief: belief,
                }))?
            }
            SweepParameter::Replicas => {
                if value < 1.0 {
                    return Err(Error::invalid("sweep", "replicas values must be >= 1"));
                }
                row_settings.replicas = value as usize;
                base.clone()
            }
            SweepParameter::Horizon => {
                row_settings.horizon = value as usize;
                base.clone()
            }
        };

        let (analytic_lambda, analytic_impact) = match (&informativeness, row_scenario.intervention())
        {
            (Some(d), Some(iv)) => {
                let lambda_full = match row_scenario.mode() {
                    ProtocolMode::Synchronous => analytics::lambda_inf_synchronous(
                        &row_scenario.weights(),
                        d,
                        iv.target,
                        &iv.fixed_belief,
                    ),
                    ProtocolMode::Asymmetric => analytics::lambda_inf_asymmetric(
                        &row_scenario.weights(),
                        &row_scenario.participation(),
                        d,
                        iv.target,
                        &iv.fixed_belief,
                    ),
                    ProtocolMode::Symmetric => analytics::lambda_inf_symmetric(
                        &row_scenario.weights(),
                        &row_scenario.participation(),
                        d,
                        iv.target,
                        &iv.fixed_belief,
                    ),
                };
                let impact = analytics::causal_impact(&lambda_full, d.true_index());
                let wrong: Vec<f64> = row_scenario
                    .space()
                    .wrong_indices()
                    .map(|t| lambda_full[t])
                    .collect();
                (Some(wrong), Some(impact))
            }
            _ => (None, None),
        };

        let result = run_ensemble(&row_scenario, &row_settings)?;
        let lambda_se = tail_lbr_se_for(&row_scenario, &result);
        let empirical = impact_from_tail(
            row_scenario.intervention().map(|iv| iv.target).unwrap_or(0),
            &result.tail_lbr_mean,
            &lambda_se,
        );
        rows.push(SweepRow {
            value,
            analytic_lambda,
            analytic_impact,
            empirical_impact: empirical.impact,
            empirical_se: empirical.impact_se,
            empirical_lambda: empirical.lambda_tail,
        });
    }
    Ok(SweepTable {
        parameter,
        mode: base.mode(),
        wrong_thetas: base.space().wrong_indices().collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::{Belief, HypothesisSpace};
    use crate::likelihood::{GaussianMeanModel, LikelihoodModel};
    use crate::protocol::{AgentSpec, InterventionSpec};

    fn small_scenario(mode: ProtocolMode) -> Scenario {
        let agents = vec![
            AgentSpec {
                model: LikelihoodModel::Gaussian(
                    GaussianMeanModel::new(vec![0.0, 0.5], 1.0).unwrap(),
                ),
                confidence_weight: 0.5,
                participation_prob: 0.7,
            },
            AgentSpec {
                model: LikelihoodModel::Gaussian(
                    GaussianMeanModel::new(vec![0.0, 1.0], 1.0).unwrap(),
                ),
                confidence_weight: 0.5,
                participation_prob: 0.4,
            },
        ];
        Scenario::new(
            mode,
            HypothesisSpace::indexed(2, 0).unwrap(),
            agents,
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_replica_equals_its_trace() {
        let scenario = small_scenario(ProtocolMode::Asymmetric);
        let settings = RunSettings {
            horizon: 20,
            replicas: 1,
            master_seed: 5,
            parallelism: 1,
        };
        let result = run_ensemble(&scenario, &settings).unwrap();
        let mut rng = TrialRng::for_replica(5, 0, 2);
        let trace = run_trial(&scenario, 20, &mut rng).unwrap();
        for (t, lbr) in trace.fc_lbr.iter().enumerate() {
            assert_eq!(result.mean_lbr[0][t], lbr.values()[1]);
            assert_eq!(result.se_lbr[0][t], 0.0);
        }
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let scenario = small_scenario(ProtocolMode::Symmetric);
        let base = RunSettings {
            horizon: 30,
            replicas: 16,
            master_seed: 99,
            parallelism: 1,
        };
        let serial = run_ensemble(&scenario, &base).unwrap();
        let parallel = run_ensemble(
            &scenario,
            &RunSettings {
                parallelism: 8,
                ..base
            },
        )
        .unwrap();
        assert_eq!(serial.mean_lbr, parallel.mean_lbr);
        assert_eq!(serial.se_lbr, parallel.se_lbr);
        assert_eq!(serial.mean_belief_true, parallel.mean_belief_true);
        assert_eq!(serial.run_fingerprint, parallel.run_fingerprint);
    }

    #[test]
    fn comparison_accepts_exact_and_rejects_bogus() {
        let scenario = small_scenario(ProtocolMode::Asymmetric);
        let settings = RunSettings {
            horizon: 60,
            replicas: 8,
            master_seed: 1,
            parallelism: 2,
        };
        let result = run_ensemble(&scenario, &settings).unwrap();

        let exact = TheoryPrediction {
            scenario_fingerprint: scenario.fingerprint(),
            lambda_inf: result.tail_lbr_mean.clone(),
        };
        let report = compare_to_theory(&result, &exact, 0.05).unwrap();
        assert!(report.all_pass);
        assert_eq!(report.rows[0].abs_dev, 0.0);

        let bogus = TheoryPrediction {
            scenario_fingerprint: scenario.fingerprint(),
            lambda_inf: result.tail_lbr_mean.iter().map(|v| v * 10.0).collect(),
        };
        let report = compare_to_theory(&result, &bogus, 0.05).unwrap();
        assert!(!report.all_pass);

        let mismatched = TheoryPrediction {
            scenario_fingerprint: "deadbeef".into(),
            lambda_inf: result.tail_lbr_mean.clone(),
        };
        assert!(matches!(
            compare_to_theory(&result, &mismatched, 0.05),
            Err(Error::FingerprintMismatch(_))
        ));
    }

    #[test]
    fn empirical_impact_requires_matching_cores() {
        let base = small_scenario(ProtocolMode::Symmetric);
        let intervened = base
            .with_intervention(Some(InterventionSpec {
                target: 0,
                fixed_belief: Belief::uniform(2),
            }))
            .unwrap();
        let settings = RunSettings {
            horizon: 40,
            replicas: 4,
            master_seed: 2,
            parallelism: 1,
        };
        assert!(empirical_impact(&base, &intervened, &settings).is_ok());

        let other = small_scenario(ProtocolMode::Asymmetric);
        assert!(matches!(
            empirical_impact(&other, &intervened, &settings),
            Err(Error::FingerprintMismatch(_))
        ));
        assert!(empirical_impact(&base, &base, &settings).is_err());
    }

    #[test]
    fn sweep_over_empty_values_is_empty() {
        let base = small_scenario(ProtocolMode::Symmetric)
            .with_intervention(Some(InterventionSpec {
                target: 0,
                fixed_belief: Belief::uniform(2),
            }))
            .unwrap();
        let settings = RunSettings {
            horizon: 10,
            replicas: 2,
            master_seed: 3,
            parallelism: 1,
        };
        let table = sweep(SweepParameter::TargetParticipation, &[], &base, &settings).unwrap();
        assert!(table.rows.is_empty());
    }

    #[test]
    fn asymmetric_analytic_column_is_flat_in_participation() {
        let base = small_scenario(ProtocolMode::Asymmetric)
            .with_intervention(Some(InterventionSpec {
                target: 0,
                fixed_belief: Belief::uniform(2),
            }))
            .unwrap();
        let settings = RunSettings {
            horizon: 30,
            replicas: 3,
            master_seed: 4,
            parallelism: 2,
        };
        let table = sweep(
            SweepParameter::TargetParticipation,
            &[0.2, 0.5, 0.9],
            &base,
            &settings,
        )
        .unwrap();
        let first = table.rows[0].analytic_impact.unwrap();
        for row in &table.rows[1..] {
            assert_eq!(row.analytic_impact.unwrap(), first);
        }
    }

    #[test]
    fn unknown_sweep_parameter_is_a_usage_error() {
        assert!(matches!(
            SweepParameter::parse("sigma"),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn replica_errors_carry_the_failing_index() {
        use crate::likelihood::LikelihoodStreamSource;
        // stream shorter than the horizon fails inside the replica
        let agents = vec![AgentSpec {
            model: LikelihoodModel::Stream(
                LikelihoodStreamSource::new("s".into(), 2, vec![vec![0.0, -0.5]; 3]).unwrap(),
            ),
            confidence_weight: 1.0,
            participation_prob: 1.0,
        }];
        let scenario = Scenario::new(
            ProtocolMode::Synchronous,
            HypothesisSpace::indexed(2, 0).unwrap(),
            agents,
            None,
            None,
        )
        .unwrap();
        let settings = RunSettings {
            horizon: 10,
            replicas: 3,
            master_seed: 0,
            parallelism: 2,
        };
        match run_ensemble(&scenario, &settings) {
            Err(Error::ReplicaFailed { replica, source }) => {
                assert_eq!(replica, 0);
                assert!(matches!(*source, Error::ExhaustedStream { .. }));
            }
            other => panic!("expected replica failure, got {other:?}"),
        }
    }
}
