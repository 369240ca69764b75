//! Command-line front end: `simulate`, `analyze`, `compare`, `sweep` and
//! `preset list`, driven by TOML experiment configs or built-in presets.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 runtime error,
//! 3 comparison failure. The orchestration here is single-threaded; any
//! parallelism lives in the ensemble layer and never changes results.

use std::path::PathBuf;

use crate::analytics::{
    impact_report, lambda_inf_asymmetric, lambda_inf_symmetric, lambda_inf_synchronous,
    misinformation_threshold,
};
use crate::config::{load_config, preset_bundle, preset_names, ExperimentConfig, OutputFormat};
use crate::ensemble::{
    compare_to_theory, run_ensemble, sweep, tail_window, TheoryPrediction,
};
use crate::error::{Error, Result};
use crate::likelihood::InformativenessMatrix;
use crate::oracle::{build_recursion, intervened_steady_state, reduce_for_intervention};
use crate::protocol::ProtocolMode;
use crate::report::{
    tool_version, write_impact_csv, write_series_csv, write_summary_json, write_sweep_csv,
    write_thresholds_csv, OracleEntry, RunSummary,
};

/// Absolute tolerance for agreement between the symmetric closed form and
/// the matrix steady-state route.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

const USAGE: &str = "\
usage: fedcausal <command> [options]

commands:
  simulate      run a Monte Carlo ensemble, emit time-series CSV + JSON summary
  analyze       closed-form impact report and misinformation thresholds
  compare       simulation vs closed forms vs matrix oracle; nonzero exit on failure
  sweep         sweep a parameter (p_m, c, replicas, horizon) per the config
  preset list   list built-in experiment bundles

options:
  --config <path>      experiment config file (TOML)
  --preset <name>      built-in bundle (fig3, fig4, fig5, fig7) or one member
  --out <dir>          output directory (overrides the config)
  --replicas <n>       replica count (overrides the config)
  --parallelism <n>    worker threads (never affects results)
";

struct CliArgs {
    command: String,
    subcommand: Option<String>,
    config: Option<PathBuf>,
    preset: Option<String>,
    out: Option<PathBuf>,
    replicas: Option<usize>,
    parallelism: Option<usize>,
}

fn parse_args(args: &[String]) -> Result<CliArgs> {
    if args.is_empty() {
        return Err(Error::Usage("no command given".into()));
    }
    if args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        return Ok(CliArgs {
            command: "help".into(),
            subcommand: None,
            config: None,
            preset: None,
            out: None,
            replicas: None,
            parallelism: None,
        })
    }
    let command = args[0].clone();
    let mut rest = &args[1..];
    let mut subcommand = None;
    if command == "preset" {
        if rest.is_empty() {
            return Err(Error::Usage("preset needs a subcommand (list)".into()));
        }
        subcommand = Some(rest[0].clone());
        rest = &rest[1..];
    }

    let mut out = CliArgs {
        command,
        subcommand,
        config: None,
        preset: None,
        out: None,
        replicas: None,
        parallelism: None,
    };
    let mut i = 0;
    while i < rest.len() {
        let flag = rest[i].as_str();
        let value = |i: usize| -> Result<&String> {
            rest.get(i + 1)
                .ok_or_else(|| Error::Usage(format!("{flag} needs a value")))
        };
        match flag {
            "--config" => {
                out.config = Some(PathBuf::from(value(i)?));
                i += 2;
            }
            "--preset" => {
                out.preset = Some(value(i)?.clone());
                i += 2;
            }
            "--out" => {
                out.out = Some(PathBuf::from(value(i)?));
                i += 2;
            }
            "--replicas" => {
                out.replicas = Some(value(i)?.parse().map_err(|_| {
                    Error::Usage(format!("--replicas: cannot parse {:?}", value(i).unwrap()))
                })?);
                i += 2;
            }
            "--parallelism" => {
                out.parallelism = Some(value(i)?.parse().map_err(|_| {
                    Error::Usage(format!(
                        "--parallelism: cannot parse {:?}",
                        value(i).unwrap()
                    ))
                })?);
                i += 2;
            }
            other => return Err(Error::Usage(format!("unknown option {other:?}"))),
        }
    }
    Ok(out)
}

fn resolve_configs(args: &CliArgs) -> Result<Vec<ExperimentConfig>> {
    let mut configs = match (&args.config, &args.preset) {
        (Some(path), None) => vec![load_config(path)?],
        (None, Some(name)) => preset_bundle(name)?,
        (Some(_), Some(_)) => {
            return Err(Error::Usage(
                "--config and --preset are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Usage(
                "either --config <path> or --preset <name> is required".into(),
            ))
        }
    };
    for config in &mut configs {
        if let Some(out) = &args.out {
            config.output_dir = out.clone();
        }
        if let Some(replicas) = args.replicas {
            if replicas == 0 {
                return Err(Error::Usage("--replicas must be >= 1".into()));
            }
            config.run.replicas = replicas;
        }
        if let Some(par) = args.parallelism {
            config.run.parallelism = par.max(1);
        }
        for warning in &config.warnings {
            eprintln!("warning [{}]: {warning}", config.name);
        }
    }
    Ok(configs)
}

/// Entry point; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match run_inner(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Usage(_)) {
                eprintln!("\n{USAGE}");
            }
            e.exit_code()
        }
    }
}

fn run_inner(args: &[String]) -> Result<i32> {
    let cli = parse_args(args)?;
    match cli.command.as_str() {
        "help" => {
            println!("{USAGE}");
            Ok(0)
        }
        "preset" => match cli.subcommand.as_deref() {
            Some("list") => {
                for (name, description) in preset_names() {
                    println!("{name:8} {description}");
                }
                Ok(0)
            }
            other => Err(Error::Usage(format!(
                "unknown preset subcommand {other:?} (expected list)"
            ))),
        },
        "simulate" => {
            let configs = resolve_configs(&cli)?;
            for config in &configs {
                cmd_simulate(config)?;
            }
            Ok(0)
        }
        "analyze" => {
            let configs = resolve_configs(&cli)?;
            for config in &configs {
                cmd_analyze(config)?;
            }
            Ok(0)
        }
        "compare" => {
            let configs = resolve_configs(&cli)?;
            let mut all_pass = true;
            for config in &configs {
                all_pass &= cmd_compare(config)?;
            }
            Ok(if all_pass { 0 } else { 3 })
        }
        "sweep" => {
            let configs = resolve_configs(&cli)?;
            for config in &configs {
                cmd_sweep(config)?;
            }
            Ok(0)
        }
        other => Err(Error::Usage(format!("unknown command {other:?}"))),
    }
}

fn wants(config: &ExperimentConfig, format: OutputFormat) -> bool {
    config.formats.contains(&format)
}

/// Run the ensemble and emit the time series and a summary.
fn cmd_simulate(config: &ExperimentConfig) -> Result<()> {
    let result = run_ensemble(&config.scenario, &config.run)?;
    if wants(config, OutputFormat::Csv) {
        let path = config.output_dir.join(format!("series_{}.csv", config.name));
        write_series_csv(&path, &result)?;
        println!("wrote {}", path.display());
    }
    if wants(config, OutputFormat::Json) {
        let path = config
            .output_dir
            .join(format!("summary_{}.json", config.name));
        write_summary_json(
            &path,
            &RunSummary {
                tool: tool_version(),
                command: "simulate".into(),
                name: config.name.clone(),
                mode: config.scenario.mode().as_str().into(),
                scenario_fingerprint: result.scenario_fingerprint.clone(),
                run_fingerprint: Some(result.run_fingerprint.clone()),
                master_seed: result.master_seed,
                replicas: result.replicas,
                horizon: result.horizon,
                tail_window: tail_window(result.horizon),
                relative_tolerance: None,
                oracle_tolerance: None,
                comparisons: vec![],
                oracle_checks: vec![],
                all_pass: None,
                warnings: config.warnings.clone(),
            },
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn informativeness_or_explain(config: &ExperimentConfig) -> Result<InformativenessMatrix> {
    let models: Vec<&crate::likelihood::LikelihoodModel> =
        config.scenario.agents().iter().map(|a| &a.model).collect();
    InformativenessMatrix::from_models(&models, config.scenario.space()).map_err(|e| match e {
        Error::InformativenessUnavailable { agent, why } => Error::InformativenessUnavailable {
            agent,
            why: format!(
                "{why}; analytic reports need generative models — use `simulate` and the \
                 empirical impact path for stream rosters"
            ),
        },
        other => other,
    })
}

/// Closed-form impact report plus misinformation thresholds.
fn cmd_analyze(config: &ExperimentConfig) -> Result<()> {
    let scenario = &config.scenario;
    let d = informativeness_or_explain(config)?;
    let dose = scenario.intervention().map(|iv| iv.fixed_belief.clone());
    let report = impact_report(
        scenario.mode(),
        &scenario.weights(),
        &scenario.participation(),
        &d,
        dose.as_ref(),
    )?;
    let wrong: Vec<usize> = scenario.space().wrong_indices().collect();

    let weights = scenario.weights();
    let participation = scenario.participation();
    let thresholds: Vec<Vec<Option<f64>>> = (0..scenario.agent_count())
        .map(|m| {
            wrong
                .iter()
                .map(|&theta| {
                    misinformation_threshold(&weights, &participation, &d, m, theta).ok()
                })
                .collect()
        })
        .collect();

    if wants(config, OutputFormat::Csv) {
        let path = config.output_dir.join(format!("impact_{}.csv", config.name));
        write_impact_csv(&path, &report, &wrong, &scenario.fingerprint())?;
        println!("wrote {}", path.display());

        let path = config
            .output_dir
            .join(format!("thresholds_{}.csv", config.name));
        write_thresholds_csv(
            &path,
            scenario.mode().as_str(),
            &thresholds,
            &wrong,
            &scenario.fingerprint(),
        )?;
        println!("wrote {}", path.display());
    }
    if wants(config, OutputFormat::Json) {
        let path = config
            .output_dir
            .join(format!("summary_{}.json", config.name));
        write_summary_json(
            &path,
            &RunSummary {
                tool: tool_version(),
                command: "analyze".into(),
                name: config.name.clone(),
                mode: scenario.mode().as_str().into(),
                scenario_fingerprint: scenario.fingerprint(),
                run_fingerprint: None,
                master_seed: config.run.master_seed,
                replicas: config.run.replicas,
                horizon: config.run.horizon,
                tail_window: tail_window(config.run.horizon),
                relative_tolerance: None,
                oracle_tolerance: None,
                comparisons: vec![],
                oracle_checks: vec![],
                all_pass: None,
                warnings: config.warnings.clone(),
            },
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Simulation, closed forms and the matrix oracle in one run. Returns
/// whether every check passed its tolerance.
fn cmd_compare(config: &ExperimentConfig) -> Result<bool> {
    let scenario = &config.scenario;
    let intervention = scenario.intervention().ok_or_else(|| {
        Error::invalid(
            "compare",
            "the config must declare an intervention; closed forms describe intervened steady states",
        )
    })?;
    let d = informativeness_or_explain(config)?;
    let weights = scenario.weights();
    let participation = scenario.participation();
    let m = intervention.target;
    let mu = &intervention.fixed_belief;

    let lambda_full = match scenario.mode() {
        ProtocolMode::Synchronous => lambda_inf_synchronous(&weights, &d, m, mu),
        ProtocolMode::Asymmetric => lambda_inf_asymmetric(&weights, &participation, &d, m, mu),
        ProtocolMode::Symmetric => lambda_inf_symmetric(&weights, &participation, &d, m, mu),
    };
    let theory = TheoryPrediction::from_lambda_vector(scenario, &lambda_full);

    let result = run_ensemble(scenario, &config.run)?;
    let comparison = compare_to_theory(&result, &theory, config.compare_tolerance)?;

    // Cross-check the symmetric closed form against the matrix route on
    // this roster, independent of which protocol was simulated.
    let mut oracle_checks: Vec<OracleEntry> = Vec::new();
    if participation[m] > 0.0 {
        let matrices = build_recursion(&weights, &participation)?;
        let true_index = scenario.space().true_index();
        let mu_log = mu.log_mass();
        for &theta in result.wrong_thetas.iter() {
            let c = mu_log[true_index] - mu_log[theta];
            let reduced = reduce_for_intervention(&matrices, m, c, &d.column(theta))?;
            let numeric = intervened_steady_state(&reduced)?;
            let closed = lambda_inf_symmetric(&weights, &participation, &d, m, mu)[theta];
            let abs_dev = (numeric - closed).abs();
            oracle_checks.push(OracleEntry {
                theta_index: theta,
                closed_form: closed,
                matrix_steady_state: numeric,
                abs_dev,
                pass: abs_dev <= ORACLE_TOLERANCE,
            });
        }
    } else {
        eprintln!(
            "warning [{}]: intervened agent never participates; matrix oracle skipped",
            config.name
        );
    }

    let all_pass = comparison.all_pass && oracle_checks.iter().all(|o| o.pass);
    for row in &comparison.rows {
        println!(
            "{} theta={} simulated={:.6} theory={:.6} rel_dev={:.4} {}",
            config.name,
            row.theta,
            row.simulated,
            row.theoretical,
            row.rel_dev,
            if row.pass { "PASS" } else { "FAIL" }
        );
    }
    for check in &oracle_checks {
        println!(
            "{} theta={} closed_form={:.12} matrix={:.12} abs_dev={:.3e} {}",
            config.name,
            check.theta_index,
            check.closed_form,
            check.matrix_steady_state,
            check.abs_dev,
            if check.pass { "PASS" } else { "FAIL" }
        );
    }

    if wants(config, OutputFormat::Csv) {
        let path = config.output_dir.join(format!("series_{}.csv", config.name));
        write_series_csv(&path, &result)?;
        println!("wrote {}", path.display());
    }
    if wants(config, OutputFormat::Json) {
        let path = config
            .output_dir
            .join(format!("comparison_{}.json", config.name));
        write_summary_json(
            &path,
            &RunSummary {
                tool: tool_version(),
                command: "compare".into(),
                name: config.name.clone(),
                mode: scenario.mode().as_str().into(),
                scenario_fingerprint: result.scenario_fingerprint.clone(),
                run_fingerprint: Some(result.run_fingerprint.clone()),
                master_seed: result.master_seed,
                replicas: result.replicas,
                horizon: result.horizon,
                tail_window: tail_window(result.horizon),
                relative_tolerance: Some(config.compare_tolerance),
                oracle_tolerance: Some(ORACLE_TOLERANCE),
                comparisons: RunSummary::comparison_entries(&comparison),
                oracle_checks,
                all_pass: Some(all_pass),
                warnings: config.warnings.clone(),
            },
        )?;
        println!("wrote {}", path.display());
    }
    Ok(all_pass)
}

/// Parameter sweep per the config's `[sweep]` block.
fn cmd_sweep(config: &ExperimentConfig) -> Result<()> {
    let (parameter, values) = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Usage("sweep requires a [sweep] block in the config".into()))?;
    let table = sweep(*parameter, values, &config.scenario, &config.run)?;
    if wants(config, OutputFormat::Csv) {
        let path = config.output_dir.join(format!("sweep_{}.csv", config.name));
        write_sweep_csv(&path, &table, &config.scenario.fingerprint())?;
        println!("wrote {}", path.display());
    }
    if wants(config, OutputFormat::Json) {
        let path = config
            .output_dir
            .join(format!("summary_{}.json", config.name));
        write_summary_json(
            &path,
            &RunSummary {
                tool: tool_version(),
                command: "sweep".into(),
                name: config.name.clone(),
                mode: config.scenario.mode().as_str().into(),
                scenario_fingerprint: config.scenario.fingerprint(),
                run_fingerprint: None,
                master_seed: config.run.master_seed,
                replicas: config.run.replicas,
                horizon: config.run.horizon,
                tail_window: tail_window(config.run.horizon),
                relative_tolerance: None,
                oracle_tolerance: None,
                comparisons: vec![],
                oracle_checks: vec![],
                all_pass: None,
                warnings: config.warnings.clone(),
            },
        )?;
        println!("wrote {}", path.display());
    }
    println!(
        "{}: swept {} over {} values",
        config.name,
        parameter.as_str(),
        table.rows.len()
    );
    Ok(())
}
