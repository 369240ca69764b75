//! Property suites over fuzzed inputs: simplex preservation, shift
//! invariance, round trips, mode-reduction identities, row-stochasticity
//! and threshold direction.

use fedcausal::analytics::{
    belief_from_log_ratio, causal_impact, lambda_inf_asymmetric, lambda_inf_symmetric,
    lambda_inf_synchronous, misinformation_threshold,
};
use fedcausal::belief::{Belief, HypothesisSpace};
use fedcausal::ensemble::{run_ensemble, RunSettings};
use fedcausal::likelihood::{GaussianMeanModel, InformativenessMatrix, LikelihoodModel};
use fedcausal::oracle::{build_recursion, intervened_steady_state, reduce_for_intervention};
use fedcausal::protocol::{run_trial, AgentSpec, InterventionSpec, ProtocolMode, Scenario};
use fedcausal::rng::TrialRng;

use proptest::prelude::*;

fn simplex(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, k).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    })
}

#[derive(Debug, Clone)]
struct FuzzScenario {
    scenario: Scenario,
    seed: u64,
    horizon: usize,
}

fn fuzz_scenario(full_participation: bool) -> impl Strategy<Value = FuzzScenario> {
    (2usize..=4, 1usize..=4).prop_flat_map(move |(h, k)| {
        (
            simplex(k),
            prop::collection::vec(0.0f64..=1.0, k),
            prop::collection::vec(prop::collection::vec(-1.5f64..1.5, h), k),
            0usize..3,
            0usize..h,
            prop::option::of(0usize..k),
            any::<u64>(),
            1usize..25,
        )
            .prop_map(
                move |(weights, participation, means, mode_idx, true_idx, target, seed, horizon)| {
                    let agents: Vec<AgentSpec> = (0..k)
                        .map(|ki| AgentSpec {
                            model: LikelihoodModel::Gaussian(
                                GaussianMeanModel::new(means[ki].clone(), 1.0).unwrap(),
                            ),
                            confidence_weight: weights[ki],
                            participation_prob: if full_participation {
                                1.0
                            } else {
                                participation[ki]
                            },
                        })
                        .collect();
                    let intervention = target.map(|t| InterventionSpec {
                        target: t,
                        fixed_belief: Belief::uniform(h),
                    });
                    let scenario = Scenario::new(
                        ProtocolMode::all()[mode_idx],
                        HypothesisSpace::indexed(h, true_idx).unwrap(),
                        agents,
                        intervention,
                        None,
                    )
                    .unwrap();
                    FuzzScenario {
                        scenario,
                        seed,
                        horizon,
                    }
                },
            )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every fusion-center belief of every fuzzed trial stays on the
    /// simplex, and the log-belief ratio is pinned to zero at the true
    /// hypothesis.
    #[test]
    fn trace_beliefs_stay_on_the_simplex(fuzz in fuzz_scenario(false)) {
        let k = fuzz.scenario.agent_count();
        let mut rng = TrialRng::for_replica(fuzz.seed, 0, k);
        let trace = run_trial(&fuzz.scenario, fuzz.horizon, &mut rng).unwrap();
        prop_assert_eq!(trace.horizon(), fuzz.horizon);
        for belief in &trace.fc_beliefs {
            let sum: f64 = belief.masses().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            prop_assert!(belief.log_mass().iter().all(|v| v.is_finite()));
        }
        for lbr in &trace.fc_lbr {
            prop_assert_eq!(lbr.values()[fuzz.scenario.space().true_index()], 0.0);
        }
        for mask in &trace.masks {
            prop_assert_eq!(mask.len(), k);
        }
    }

    /// At full participation the three protocols generate bitwise-identical
    /// fusion-center trajectories from a shared seed.
    #[test]
    fn modes_coincide_at_full_participation(fuzz in fuzz_scenario(true)) {
        let k = fuzz.scenario.agent_count();
        let traces: Vec<_> = ProtocolMode::all()
            .iter()
            .map(|&mode| {
                let mut rng = TrialRng::for_replica(fuzz.seed, 0, k);
                run_trial(&fuzz.scenario.with_mode(mode), fuzz.horizon, &mut rng).unwrap()
            })
            .collect();
        for t in &traces[1..] {
            for (a, b) in traces[0].fc_beliefs.iter().zip(&t.fc_beliefs) {
                prop_assert_eq!(a.log_mass(), b.log_mass());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Adding a constant to all log weights does not move the normalized
    /// masses.
    #[test]
    fn normalization_is_shift_invariant(
        w in prop::collection::vec(-40.0f64..40.0, 2..6),
        shift in -600.0f64..600.0,
    ) {
        let shifted: Vec<f64> = w.iter().map(|x| x + shift).collect();
        let a = Belief::from_log_weights(&w).unwrap();
        let b = Belief::from_log_weights(&shifted).unwrap();
        for (x, y) in a.masses().iter().zip(b.masses()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    /// Belief -> LBR -> belief reproduces the original within 1e-9.
    #[test]
    fn lbr_roundtrip(
        w in prop::collection::vec(-6.0f64..6.0, 2..6),
        salt in any::<u32>(),
    ) {
        let belief = Belief::from_log_weights(&w).unwrap();
        let true_index = salt as usize % w.len();
        let space = HypothesisSpace::indexed(w.len(), true_index).unwrap();
        let back = Belief::from_lbr(&belief.to_lbr(&space));
        for (x, y) in belief.masses().iter().zip(back.masses()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    /// Recursion matrices are row-stochastic to 1e-12 for any valid
    /// weights and participation probabilities.
    #[test]
    fn recursion_matrix_is_row_stochastic(
        (weights, participation) in (2usize..=8).prop_flat_map(|k| {
            (simplex(k), prop::collection::vec(0.0f64..=1.0, k))
        }),
    ) {
        let matrices = build_recursion(&weights, &participation).unwrap();
        prop_assert!(matrices.max_row_sum_deviation() <= 1e-12);
    }

    /// The asynchronous closed forms evaluated at full participation equal
    /// the synchronous one exactly.
    #[test]
    fn reduction_identities_are_exact(
        (weights, d_col, target, c) in (2usize..=8).prop_flat_map(|k| {
            (
                simplex(k),
                prop::collection::vec(0.0f64..2.0, k),
                0usize..k,
                -2.0f64..2.0,
            )
        }),
    ) {
        let k = weights.len();
        let ones = vec![1.0; k];
        let rows: Vec<Vec<f64>> = d_col.iter().map(|&v| vec![0.0, v]).collect();
        let info = InformativenessMatrix::new(rows, 0).unwrap();
        let mu = belief_from_log_ratio(c, 2, 0).unwrap();
        let sync = lambda_inf_synchronous(&weights, &info, target, &mu);
        prop_assert_eq!(&sync, &lambda_inf_asymmetric(&weights, &ones, &info, target, &mu));
        prop_assert_eq!(&sync, &lambda_inf_symmetric(&weights, &ones, &info, target, &mu));
    }

    /// The impact is strictly decreasing in every steady-state ratio entry.
    #[test]
    fn impact_is_monotone_in_each_entry(
        lam in prop::collection::vec(-3.0f64..6.0, 1..5),
        bump_idx in any::<u32>(),
        bump in 0.01f64..2.0,
    ) {
        let mut full = vec![0.0];
        full.extend(lam.iter().copied());
        let base = causal_impact(&full, 0);
        let idx = 1 + (bump_idx as usize % lam.len());
        let mut bumped = full.clone();
        bumped[idx] += bump;
        prop_assert!(causal_impact(&bumped, 0) < base);
    }

    /// The symmetric closed form and the matrix steady state agree within
    /// 1e-10 on random configurations.
    #[test]
    fn oracle_agrees_with_symmetric_closed_form(
        (weights, participation, d_col, target, c) in (2usize..=8).prop_flat_map(|k| {
            (
                simplex(k),
                prop::collection::vec(0.05f64..=1.0, k),
                prop::collection::vec(0.0f64..2.0, k),
                0usize..k,
                -2.0f64..2.0,
            )
        }),
    ) {
        let matrices = build_recursion(&weights, &participation).unwrap();
        let reduced = reduce_for_intervention(&matrices, target, c, &d_col).unwrap();
        let numeric = intervened_steady_state(&reduced).unwrap();
        let rows: Vec<Vec<f64>> = d_col.iter().map(|&v| vec![0.0, v]).collect();
        let info = InformativenessMatrix::new(rows, 0).unwrap();
        let mu = belief_from_log_ratio(c, 2, 0).unwrap();
        let closed = lambda_inf_symmetric(&weights, &participation, &info, target, &mu)[1];
        prop_assert!((numeric - closed).abs() <= 1e-10);
    }

    /// On either side of the misinformation threshold the ordering of the
    /// two asynchronous steady states matches the comparison direction.
    #[test]
    fn threshold_direction_is_consistent(
        (weights, participation, d_col, target) in (2usize..=6).prop_flat_map(|k| {
            (
                simplex(k),
                prop::collection::vec(0.1f64..0.9, k),
                prop::collection::vec(0.0f64..2.0, k),
                0usize..k,
            )
        }),
    ) {
        let rows: Vec<Vec<f64>> = d_col.iter().map(|&v| vec![0.0, v]).collect();
        let info = InformativenessMatrix::new(rows, 0).unwrap();
        let threshold =
            misinformation_threshold(&weights, &participation, &info, target, 1).unwrap();
        // keep the probe beliefs inside the representable support range
        prop_assume!(threshold.abs() < 400.0);
        let gap = |x: f64| {
            let mu = belief_from_log_ratio(-x, 2, 0).unwrap();
            lambda_inf_asymmetric(&weights, &participation, &info, target, &mu)[1]
                - lambda_inf_symmetric(&weights, &participation, &info, target, &mu)[1]
        };
        prop_assert!(gap(threshold + 0.1) > 0.0);
        prop_assert!(gap(threshold - 0.1) < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Ensemble reduction is independent of the parallelism degree.
    #[test]
    fn ensembles_are_parallelism_independent(
        fuzz in fuzz_scenario(false),
        replicas in 1usize..10,
        parallelism in 2usize..6,
    ) {
        prop_assume!(fuzz.horizon > 0);
        let serial = run_ensemble(
            &fuzz.scenario,
            &RunSettings {
                horizon: fuzz.horizon,
                replicas,
                master_seed: fuzz.seed,
                parallelism: 1,
            },
        )
        .unwrap();
        let parallel = run_ensemble(
            &fuzz.scenario,
            &RunSettings {
                horizon: fuzz.horizon,
                replicas,
                master_seed: fuzz.seed,
                parallelism,
            },
        )
        .unwrap();
        prop_assert_eq!(serial.mean_lbr, parallel.mean_lbr);
        prop_assert_eq!(serial.se_lbr, parallel.se_lbr);
        prop_assert_eq!(serial.mean_belief_true, parallel.mean_belief_true);
        prop_assert_eq!(serial.tail_lbr_mean, parallel.tail_lbr_mean);
    }
}
