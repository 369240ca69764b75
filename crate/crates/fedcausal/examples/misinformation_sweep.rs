//! Steady-state log-belief ratio as a function of misinformation strength
//! (how heavily the intervened belief favors the wrong hypothesis), for
//! both asynchronous protocols. The two lines cross exactly at the
//! closed-form threshold: beyond it, misinformation hits harder under
//! symmetric communication.
//!
//! ```text
//! cargo run --example misinformation_sweep
//! ```

use fedcausal::analytics::{
    belief_from_log_ratio, lambda_inf_asymmetric, lambda_inf_symmetric,
    misinformation_threshold,
};
use fedcausal::config::preset_bundle;
use fedcausal::likelihood::{InformativenessMatrix, LikelihoodModel};

fn main() {
    let config = preset_bundle("fig5_asymmetric").unwrap().remove(0);
    let scenario = config.scenario;
    let weights = scenario.weights();
    let participation = scenario.participation();
    let models: Vec<&LikelihoodModel> = scenario.agents().iter().map(|a| &a.model).collect();
    let d = InformativenessMatrix::from_models(&models, scenario.space()).unwrap();
    let m = scenario.intervention().unwrap().target;

    let threshold = misinformation_threshold(&weights, &participation, &d, m, 1).unwrap();
    println!("misinformation threshold for agent {m}: {threshold:.6}\n");
    println!(
        "{:>12} {:>14} {:>14} {:>10}",
        "strength", "asym LBR", "sym LBR", "stronger"
    );
    // misinformation strength x: the intervened belief puts exp(x) times
    // more mass on the wrong hypothesis than on the true one
    for x in [0.0, 2.0, 4.0, 6.0, 8.0, threshold, 10.0, 12.0] {
        let mu = belief_from_log_ratio(-x, 2, 0).unwrap();
        let asym = lambda_inf_asymmetric(&weights, &participation, &d, m, &mu)[1];
        let sym = lambda_inf_symmetric(&weights, &participation, &d, m, &mu)[1];
        // lower steady-state LBR = lower belief in the truth = larger impact
        let stronger = if (asym - sym).abs() < 1e-9 {
            "equal"
        } else if sym < asym {
            "symmetric"
        } else {
            "asymmetric"
        };
        println!("{x:>12.4} {asym:>14.6} {sym:>14.6} {stronger:>10}");
    }
}
