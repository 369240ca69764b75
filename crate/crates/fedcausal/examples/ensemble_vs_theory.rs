//! Monte Carlo ensembles of the intervened reference scenario against the
//! closed-form steady states, protocol by protocol.
//!
//! ```text
//! cargo run --release --example ensemble_vs_theory
//! ```

use fedcausal::analytics::{
    lambda_inf_asymmetric, lambda_inf_symmetric, lambda_inf_synchronous,
};
use fedcausal::config::preset_bundle;
use fedcausal::ensemble::{compare_to_theory, run_ensemble, TheoryPrediction};
use fedcausal::likelihood::{InformativenessMatrix, LikelihoodModel};
use fedcausal::protocol::ProtocolMode;

fn main() {
    for member in ["fig3_synchronous", "fig3_asymmetric", "fig3_symmetric"] {
        let config = preset_bundle(member).unwrap().remove(0);
        let scenario = &config.scenario;
        let models: Vec<&LikelihoodModel> = scenario.agents().iter().map(|a| &a.model).collect();
        let d = InformativenessMatrix::from_models(&models, scenario.space()).unwrap();
        let iv = scenario.intervention().unwrap();
        let lambda = match scenario.mode() {
            ProtocolMode::Synchronous => {
                lambda_inf_synchronous(&scenario.weights(), &d, iv.target, &iv.fixed_belief)
            }
            ProtocolMode::Asymmetric => lambda_inf_asymmetric(
                &scenario.weights(),
                &scenario.participation(),
                &d,
                iv.target,
                &iv.fixed_belief,
            ),
            ProtocolMode::Symmetric => lambda_inf_symmetric(
                &scenario.weights(),
                &scenario.participation(),
                &d,
                iv.target,
                &iv.fixed_belief,
            ),
        };
        let theory = TheoryPrediction::from_lambda_vector(scenario, &lambda);

        let result = run_ensemble(scenario, &config.run).unwrap();
        let report = compare_to_theory(&result, &theory, config.compare_tolerance).unwrap();
        println!("--- {member} ({} replicas) ---", result.replicas);
        for row in &report.rows {
            println!(
                "theta {}: simulated {:.4} +- {:.4}, theory {:.4}, relative deviation {:.2}% [{}]",
                row.theta,
                row.simulated,
                result.tail_lbr_se[0],
                row.theoretical,
                100.0 * row.rel_dev,
                if row.pass { "ok" } else { "off" }
            );
        }
    }
}
