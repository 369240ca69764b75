//! File-based likelihood replay: generate per-agent likelihood CSVs from
//! generative models, rebuild the roster from the files alone, and
//! estimate the intervened agent's impact empirically. The estimate lands
//! on the closed form computed from the models that produced the files —
//! the workflow used when likelihoods come from an external pipeline
//! instead of a known model.
//!
//! ```text
//! cargo run --release --example stream_replay
//! ```

use fedcausal::analytics::{causal_impact, lambda_inf_asymmetric};
use fedcausal::belief::Belief;
use fedcausal::config::preset_bundle;
use fedcausal::ensemble::{empirical_impact, RunSettings};
use fedcausal::likelihood::{read_likelihood_stream, InformativenessMatrix, LikelihoodModel};
use fedcausal::protocol::{AgentSpec, InterventionSpec, Scenario};
use fedcausal::rng::TrialRng;

fn main() {
    let config = preset_bundle("fig3_asymmetric").unwrap().remove(0);
    let generative = config.scenario;
    // Replicas of a stream roster replay one shared observation path, so
    // the impact estimate converges with the horizon, not the replica
    // count; replay well past the mixing time.
    let horizon = 2000;

    let dir = std::env::temp_dir().join(format!("fedcausal-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // Export one likelihood CSV per agent: a row of per-hypothesis
    // log-likelihoods for each time step, sampled under the true
    // hypothesis.
    let mut gen_rng = TrialRng::for_replica(99, 0, generative.agent_count());
    let mut stream_agents = Vec::new();
    for (k, agent) in generative.agents().iter().enumerate() {
        let path = dir.join(format!("agent_{k}.csv"));
        let mut text = String::from("# log-likelihoods: null, alternative\n");
        for _ in 0..horizon {
            let obs = agent
                .model
                .sample_observation(generative.space().true_index(), gen_rng.observation(k))
                .unwrap();
            let row = agent.model.log_likelihood_row(&obs).unwrap();
            text.push_str(&format!("{},{}\n", row[0], row[1]));
        }
        std::fs::write(&path, text).unwrap();

        let source = read_likelihood_stream(&path, generative.space()).unwrap();
        stream_agents.push(AgentSpec {
            model: LikelihoodModel::Stream(source),
            confidence_weight: agent.confidence_weight,
            participation_prob: agent.participation_prob,
        });
    }
    println!(
        "wrote {} likelihood streams of horizon {horizon} under {}",
        generative.agent_count(),
        dir.display()
    );

    // Replay the files: baseline without intervention, plus a run with
    // agent 0 pinned to the uniform belief. Stream rosters cannot provide
    // closed forms, so impact is estimated from the simulation.
    let baseline = Scenario::new(
        generative.mode(),
        generative.space().clone(),
        stream_agents,
        None,
        None,
    )
    .unwrap();
    let intervened = baseline
        .with_intervention(Some(InterventionSpec {
            target: 0,
            fixed_belief: Belief::uniform(2),
        }))
        .unwrap();
    let settings = RunSettings {
        horizon,
        replicas: 200,
        master_seed: 7,
        parallelism: 4,
    };
    let estimate = empirical_impact(&baseline, &intervened, &settings).unwrap();

    // The analytic value is only available because we happen to know the
    // models behind the files.
    let models: Vec<&LikelihoodModel> = generative.agents().iter().map(|a| &a.model).collect();
    let d = InformativenessMatrix::from_models(&models, generative.space()).unwrap();
    let lambda = lambda_inf_asymmetric(
        &generative.weights(),
        &generative.participation(),
        &d,
        0,
        &Belief::uniform(2),
    );
    let analytic = causal_impact(&lambda, 0);

    println!("\nempirical impact of agent 0: {:.5} (SE {:.5})", estimate.impact, estimate.impact_se);
    println!("analytic impact from the generating models: {analytic:.5}");
    println!("deviation: {:+.5}", estimate.impact - analytic);

    std::fs::remove_dir_all(&dir).ok();
}
