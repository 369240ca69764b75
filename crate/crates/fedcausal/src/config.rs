//! Experiment configuration files (TOML) and the built-in presets.
//!
//! Loading validates every module-level invariant up front and reports the
//! complete list of violations, not just the first. All randomness flows
//! from the mandatory `run.master_seed` field; there is no silent
//! time-based seeding.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::belief::{Belief, HypothesisSpace};
use crate::ensemble::{RunSettings, SweepParameter};
use crate::error::{Error, Result};
use crate::likelihood::{
    read_likelihood_stream, validate_effective_identifiability, CategoricalModel,
    GaussianMeanModel, InformativenessMatrix, LikelihoodModel,
};
use crate::protocol::{AgentSpec, InterventionSpec, ProtocolMode, Scenario};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    scenario: Option<ScenarioBlock>,
    run: Option<RunBlock>,
    output: Option<OutputBlock>,
    compare: Option<CompareBlock>,
    sweep: Option<SweepBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioBlock {
    mode: String,
    hypotheses: Vec<String>,
    true_hypothesis: usize,
    initial_prior: Option<Vec<f64>>,
    agents: Vec<AgentBlock>,
    intervention: Option<InterventionBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentBlock {
    confidence_weight: f64,
    participation_prob: f64,
    model: ModelBlock,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum ModelBlock {
    #[serde(rename = "gaussian")]
    Gaussian {
        means: Vec<f64>,
        #[serde(default = "default_std_dev")]
        std_dev: f64,
    },
    #[serde(rename = "categorical")]
    Categorical { table: Vec<Vec<f64>> },
    #[serde(rename = "stream")]
    Stream { path: String },
}

fn default_std_dev() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterventionBlock {
    target: usize,
    /// Fixed belief, as masses. Exactly one of `belief` and `log_ratio`.
    belief: Option<Vec<f64>>,
    /// Log ratio `log mass(true)/mass(wrong)`, equal across wrong
    /// hypotheses; 0 is the uniform intervention.
    log_ratio: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunBlock {
    horizon: Option<usize>,
    replicas: Option<usize>,
    master_seed: Option<u64>,
    parallelism: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputBlock {
    directory: Option<String>,
    formats: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareBlock {
    relative_tolerance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    parameter: String,
    values: Vec<f64>,
}

/// Output encodings the commands can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Desk-scale defaults: full acceptance-style comparisons finish in
/// seconds. Paper-scale replica counts are a config choice away.
pub const DEFAULT_HORIZON: usize = 500;
pub const DEFAULT_REPLICAS: usize = 200;
pub const DEFAULT_TOLERANCE: f64 = 0.05;

/// A fully validated experiment: scenario, run settings, output wiring.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub scenario: Scenario,
    pub run: RunSettings,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub compare_tolerance: f64,
    pub sweep: Option<(SweepParameter, Vec<f64>)>,
    /// Non-fatal issues found at load time (e.g. an agent that never
    /// transmits, or an unidentifiable hypothesis).
    pub warnings: Vec<String>,
}

/// Load and validate a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into());
    load_config_from_str(&name, &text, path.parent())
}

/// Parse and validate config text. `base_dir` anchors relative stream
/// paths (the directory of the config file, when loading from disk).
pub fn load_config_from_str(
    name: &str,
    text: &str,
    base_dir: Option<&Path>,
) -> Result<ExperimentConfig> {
    let parsed: ConfigFile = toml::from_str(text).map_err(|e| Error::ConfigParse {
        path: name.to_string(),
        why: e.to_string(),
    })?;

    let mut problems: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();

    let scenario_block = match parsed.scenario {
        Some(s) => s,
        None => {
            return Err(Error::ConfigInvalid {
                problems: vec!["scenario: block is required".into()],
            })
        }
    };

    let mode = match ProtocolMode::parse(&scenario_block.mode) {
        Ok(m) => Some(m),
        Err(e) => {
            problems.push(format!("scenario.mode: {e}"));
            None
        }
    };

    let space = match HypothesisSpace::new(
        scenario_block.hypotheses.clone(),
        scenario_block.true_hypothesis,
    ) {
        Ok(s) => Some(s),
        Err(e) => {
            problems.push(format!("scenario.hypotheses: {e}"));
            None
        }
    };
    let h = scenario_block.hypotheses.len();

    if scenario_block.agents.is_empty() {
        problems.push("scenario.agents: at least one agent is required".into());
    }

    let mut agents: Vec<AgentSpec> = Vec::new();
    let mut weight_sum = 0.0;
    for (i, block) in scenario_block.agents.iter().enumerate() {
        let field = format!("scenario.agents[{i}]");
        if !(block.confidence_weight > 0.0 && block.confidence_weight <= 1.0) {
            problems.push(format!(
                "{field}.confidence_weight: {} outside (0, 1]",
                block.confidence_weight
            ));
        }
        weight_sum += block.confidence_weight;
        if !(0.0..=1.0).contains(&block.participation_prob) {
            problems.push(format!(
                "{field}.participation_prob: {} outside [0, 1]",
                block.participation_prob
            ));
        } else if block.participation_prob == 0.0 {
            warnings.push(format!(
                "{field}: participation probability 0 — the agent never transmits"
            ));
        }
        let model = match &block.model {
            ModelBlock::Gaussian { means, std_dev } => {
                GaussianMeanModel::new(means.clone(), *std_dev)
                    .map(LikelihoodModel::Gaussian)
                    .map_err(|e| format!("{field}.model: {e}"))
            }
            ModelBlock::Categorical { table } => CategoricalModel::new(table.clone())
                .map(LikelihoodModel::Categorical)
                .map_err(|e| format!("{field}.model: {e}")),
            ModelBlock::Stream { path } => {
                let resolved = match base_dir {
                    Some(dir) => dir.join(path),
                    None => PathBuf::from(path),
                };
                match &space {
                    Some(space) => read_likelihood_stream(&resolved, space)
                        .map(LikelihoodModel::Stream)
                        .map_err(|e| format!("{field}.model: {e}")),
                    None => Err(format!(
                        "{field}.model: cannot load stream without a valid hypothesis space"
                    )),
                }
            }
        };
        match model {
            Ok(model) => {
                if model.hypothesis_count() != h {
                    problems.push(format!(
                        "{field}.model: covers {} hypotheses, scenario declares {h}",
                        model.hypothesis_count()
                    ));
                }
                agents.push(AgentSpec {
                    model,
                    confidence_weight: block.confidence_weight,
                    participation_prob: block.participation_prob,
                });
            }
            Err(msg) => problems.push(msg),
        }
    }
    if !scenario_block.agents.is_empty() && (weight_sum - 1.0).abs() > 1e-9 {
        problems.push(format!(
            "scenario.agents: confidence weights sum to {weight_sum}, expected 1 within 1e-9"
        ));
    }

    let initial_prior = match &scenario_block.initial_prior {
        None => None,
        Some(masses) => match Belief::from_masses(masses) {
            Ok(b) => Some(b),
            Err(e) => {
                problems.push(format!("scenario.initial_prior: {e}"));
                None
            }
        },
    };

    let intervention = match &scenario_block.intervention {
        None => None,
        Some(block) => {
            let belief = match (&block.belief, block.log_ratio) {
                (Some(masses), None) => Belief::from_masses(masses)
                    .map_err(|e| format!("scenario.intervention.belief: {e}")),
                (None, Some(c)) => {
                    crate::analytics::belief_from_log_ratio(
                        c,
                        h,
                        scenario_block.true_hypothesis.min(h.saturating_sub(1)),
                    )
                    .map_err(|e| format!("scenario.intervention.log_ratio: {e}"))
                }
                _ => Err(
                    "scenario.intervention: exactly one of `belief` and `log_ratio` is required"
                        .into(),
                ),
            };
            if block.target >= scenario_block.agents.len() {
                problems.push(format!(
                    "scenario.intervention.target: {} out of range for {} agents",
                    block.target,
                    scenario_block.agents.len()
                ));
            }
            match belief {
                Ok(b) => Some(InterventionSpec {
                    target: block.target,
                    fixed_belief: b,
                }),
                Err(msg) => {
                    problems.push(msg);
                    None
                }
            }
        }
    };

    let run_block = parsed.run.unwrap_or(RunBlock {
        horizon: None,
        replicas: None,
        master_seed: None,
        parallelism: None,
    });
    let master_seed = match run_block.master_seed {
        Some(s) => s,
        None => {
            problems.push(
                "run.master_seed: required — reproducibility is part of the contract, \
                 there is no time-based fallback"
                    .into(),
            );
            0
        }
    };
    let replicas = run_block.replicas.unwrap_or(DEFAULT_REPLICAS);
    if replicas == 0 {
        problems.push("run.replicas: must be >= 1".into());
    }
    let parallelism = run_block.parallelism.unwrap_or(1).max(1);

    let output_block = parsed.output.unwrap_or(OutputBlock {
        directory: None,
        formats: None,
    });
    let output_dir = PathBuf::from(output_block.directory.unwrap_or_else(|| "out".into()));
    let mut formats = Vec::new();
    match output_block.formats {
        None => formats = vec![OutputFormat::Csv, OutputFormat::Json],
        Some(names) => {
            for f in names {
                match f.as_str() {
                    "csv" => formats.push(OutputFormat::Csv),
                    "json" => formats.push(OutputFormat::Json),
                    other => problems.push(format!(
                        "output.formats: unknown format {other:?} (expected csv or json)"
                    )),
                }
            }
        }
    }

    let compare_tolerance = parsed
        .compare
        .and_then(|c| c.relative_tolerance)
        .unwrap_or(DEFAULT_TOLERANCE);
    if compare_tolerance.is_nan() || compare_tolerance <= 0.0 {
        problems.push("compare.relative_tolerance: must be positive".into());
    }

    let sweep = match parsed.sweep {
        None => None,
        Some(block) => match SweepParameter::parse(&block.parameter) {
            Ok(p) => Some((p, block.values)),
            Err(e) => {
                problems.push(format!("sweep.parameter: {e}"));
                None
            }
        },
    };

    // Assemble the scenario last so cross-field violations surface together
    // with the field-level ones.
    let scenario = match (mode, space) {
        (Some(mode), Some(space)) if problems.is_empty() => {
            match Scenario::new(mode, space, agents, intervention, initial_prior) {
                Ok(s) => Some(s),
                Err(e) => {
                    problems.push(format!("scenario: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    let scenario = match scenario {
        Some(s) => s,
        None => return Err(Error::ConfigInvalid { problems }),
    };

    // Identifiability warning for generative rosters: a hypothesis no
    // effectively-weighted agent can distinguish never converges away.
    let models: Vec<&LikelihoodModel> = scenario.agents().iter().map(|a| &a.model).collect();
    if let Ok(d) = InformativenessMatrix::from_models(&models, scenario.space()) {
        let blind = validate_effective_identifiability(
            &d,
            &scenario.weights(),
            &scenario.participation(),
        );
        if !blind.is_empty() {
            warnings.push(format!(
                "scenario: hypotheses {blind:?} are not identifiable under effective weights \
                 (confidence x participation)"
            ));
        }
    }

    Ok(ExperimentConfig {
        name: name.to_string(),
        scenario,
        run: RunSettings {
            horizon: run_block.horizon.unwrap_or(DEFAULT_HORIZON),
            replicas,
            master_seed,
            parallelism,
        },
        output_dir,
        formats,
        compare_tolerance,
        sweep,
        warnings,
    })
}

/// Built-in experiment bundles reproducing the reference 12-agent study.
/// Each entry is (bundle name, one-line description).
pub fn preset_names() -> &'static [(&'static str, &'static str)] {
    &[
        (
            "fig3",
            "intervened LBR trajectories vs closed forms, all three protocols",
        ),
        (
            "fig4",
            "impact of the intervened agent vs its participation probability",
        ),
        (
            "fig5",
            "steady-state LBR vs misinformation strength, asymmetric vs symmetric",
        ),
        (
            "fig7",
            "normalized per-agent impact rankings for all three protocols",
        ),
    ]
}

struct PresetFile {
    member: &'static str,
    bundle: &'static str,
    text: &'static str,
}

fn preset_files() -> Vec<PresetFile> {
    vec![
        PresetFile {
            member: "fig3_synchronous",
            bundle: "fig3",
            text: include_str!("../presets/fig3_synchronous.toml"),
        },
        PresetFile {
            member: "fig3_asymmetric",
            bundle: "fig3",
            text: include_str!("../presets/fig3_asymmetric.toml"),
        },
        PresetFile {
            member: "fig3_symmetric",
            bundle: "fig3",
            text: include_str!("../presets/fig3_symmetric.toml"),
        },
        PresetFile {
            member: "fig4_asymmetric",
            bundle: "fig4",
            text: include_str!("../presets/fig4_asymmetric.toml"),
        },
        PresetFile {
            member: "fig4_symmetric",
            bundle: "fig4",
            text: include_str!("../presets/fig4_symmetric.toml"),
        },
        PresetFile {
            member: "fig5_asymmetric",
            bundle: "fig5",
            text: include_str!("../presets/fig5_asymmetric.toml"),
        },
        PresetFile {
            member: "fig5_symmetric",
            bundle: "fig5",
            text: include_str!("../presets/fig5_symmetric.toml"),
        },
        PresetFile {
            member: "fig7_synchronous",
            bundle: "fig7",
            text: include_str!("../presets/fig7_synchronous.toml"),
        },
        PresetFile {
            member: "fig7_asymmetric",
            bundle: "fig7",
            text: include_str!("../presets/fig7_asymmetric.toml"),
        },
        PresetFile {
            member: "fig7_symmetric",
            bundle: "fig7",
            text: include_str!("../presets/fig7_symmetric.toml"),
        },
    ]
}

/// Resolve a preset name (a bundle like `fig3`, or a single member like
/// `fig3_symmetric`) into validated configs.
pub fn preset_bundle(name: &str) -> Result<Vec<ExperimentConfig>> {
    let files = preset_files();
    let selected: Vec<&PresetFile> = files
        .iter()
        .filter(|f| f.bundle == name || f.member == name)
        .collect();
    if selected.is_empty() {
        let known: Vec<&str> = preset_names().iter().map(|(n, _)| *n).collect();
        return Err(Error::Usage(format!(
            "unknown preset {name:?}; available bundles: {}",
            known.join(", ")
        )));
    }
    selected
        .into_iter()
        .map(|f| load_config_from_str(f.member, f.text, None))
        .collect()
}
