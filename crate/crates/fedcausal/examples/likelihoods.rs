//! Observation models: sampling, log-likelihood evaluation,
//! informativeness (KL divergence against the true hypothesis) and the
//! global identifiability check.
//!
//! ```text
//! cargo run --example likelihoods
//! ```

use fedcausal::belief::HypothesisSpace;
use fedcausal::likelihood::{
    validate_effective_identifiability, validate_global_identifiability, CategoricalModel,
    GaussianMeanModel, InformativenessMatrix, LikelihoodModel,
};
use fedcausal::rng::TrialRng;

fn main() {
    let space = HypothesisSpace::new(vec!["null".into(), "alternative".into()], 0).unwrap();

    // A Gaussian sensor whose mean separates the hypotheses by 0.5.
    let sensor = GaussianMeanModel::new(vec![0.0, 0.5], 1.0).unwrap();
    let mut rng = TrialRng::for_replica(42, 0, 1);
    let x = sensor.sample(space.true_index(), rng.observation(0));
    println!("sample under the true hypothesis: {x:.4}");
    println!(
        "log-likelihoods at that sample: null {:.4}, alternative {:.4}",
        sensor.log_likelihood(x, 0),
        sensor.log_likelihood(x, 1)
    );
    // d(theta) = (mean gap)^2 / (2 sigma^2): 0.125 for a 0.5 separation
    println!("informativeness: {:?}", sensor.informativeness(0));

    // A categorical sensor over a 3-symbol alphabet.
    let coded = CategoricalModel::new(vec![
        vec![0.6, 0.3, 0.1],
        vec![0.2, 0.3, 0.5],
    ])
    .unwrap();
    println!("\ncategorical informativeness: {:?}", coded.informativeness(0));

    // Roster-level identifiability: every wrong hypothesis must be
    // distinguishable by at least one agent that actually reaches the
    // fusion center (positive confidence times participation).
    let models = [
        LikelihoodModel::Gaussian(sensor),
        LikelihoodModel::Categorical(coded),
        // a blind sensor: identical means, no information at all
        LikelihoodModel::Gaussian(GaussianMeanModel::new(vec![1.0, 1.0], 1.0).unwrap()),
    ];
    let refs: Vec<&LikelihoodModel> = models.iter().collect();
    let d = InformativenessMatrix::from_models(&refs, &space).unwrap();
    for (k, row) in (0..d.agent_count()).map(|k| (k, d.agent_row(k))) {
        println!("agent {k}: d = {row:?}");
    }
    println!(
        "globally unidentifiable hypotheses: {:?}",
        validate_global_identifiability(&d)
    );
    // If only the blind agent had weight, the roster could never converge:
    let blind_only = validate_effective_identifiability(&d, &[0.1, 0.1, 0.8], &[0.0, 0.0, 1.0]);
    println!("unidentifiable when only agent 2 participates: {blind_only:?}");
}
