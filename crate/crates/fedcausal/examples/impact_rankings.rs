//! Normalized causal impact scores of all twelve reference agents under
//! each protocol. Asymmetric communication spreads influence the most
//! evenly; symmetric communication concentrates it on the frequent,
//! highly-weighted participants.
//!
//! ```text
//! cargo run --example impact_rankings
//! ```

use fedcausal::analytics::impact_report;
use fedcausal::config::preset_bundle;
use fedcausal::likelihood::{InformativenessMatrix, LikelihoodModel};
use fedcausal::protocol::ProtocolMode;

fn main() {
    let config = preset_bundle("fig7_synchronous").unwrap().remove(0);
    let scenario = config.scenario;
    let weights = scenario.weights();
    let participation = scenario.participation();
    let models: Vec<&LikelihoodModel> = scenario.agents().iter().map(|a| &a.model).collect();
    let d = InformativenessMatrix::from_models(&models, scenario.space()).unwrap();

    let reports: Vec<_> = ProtocolMode::all()
        .iter()
        .map(|&mode| impact_report(mode, &weights, &participation, &d, None).unwrap())
        .collect();

    println!(
        "{:>5} {:>6} {:>4} | {:>12} {:>12} {:>12}",
        "agent", "weight", "p", "synchronous", "asymmetric", "symmetric"
    );
    for k in 0..scenario.agent_count() {
        println!(
            "{k:>5} {:>6.3} {:>4.1} | {:>12.4} {:>12.4} {:>12.4}",
            weights[k],
            participation[k],
            reports[0].normalized[k],
            reports[1].normalized[k],
            reports[2].normalized[k],
        );
    }

    let variance = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64
    };
    println!("\nscore dispersion (sample variance):");
    for report in &reports {
        println!(
            "  {:12} {:.6}",
            report.mode.as_str(),
            variance(&report.normalized)
        );
    }
}
