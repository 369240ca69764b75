//! Result serialization: time-series CSV, impact CSV, sweep CSV and JSON
//! summaries. Every file embeds the tool version and the fingerprints of
//! the scenario it came from, so ensembles and reports stay pairable.
//! Writers are deterministic: rerunning a command with the same config and
//! seed overwrites outputs with byte-identical files.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::analytics::ImpactReport;
use crate::ensemble::{ComparisonReport, EnsembleResult, SweepTable};
use crate::error::{Error, Result};

pub fn tool_version() -> String {
    format!("fedcausal {}", env!("CARGO_PKG_VERSION"))
}

/// Shortest-roundtrip float formatting; stable for a given bit pattern.
fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn header_lines(scenario_fingerprint: &str, run_fingerprint: Option<&str>) -> String {
    let mut out = format!("# tool: {}\n", tool_version());
    match run_fingerprint {
        Some(rf) => out.push_str(&format!(
            "# scenario: {scenario_fingerprint} run: {rf}\n"
        )),
        None => out.push_str(&format!("# scenario: {scenario_fingerprint}\n")),
    }
    out
}

/// Ensemble time series, one row per (step, wrong hypothesis):
/// `step, mode, theta_index, mean_lbr, se_lbr, mean_belief_true, se_belief_true`.
pub fn write_series_csv(path: &Path, result: &EnsembleResult) -> Result<()> {
    let mut out = header_lines(&result.scenario_fingerprint, Some(&result.run_fingerprint));
    out.push_str("step,mode,theta_index,mean_lbr,se_lbr,mean_belief_true,se_belief_true\n");
    for step in 0..result.horizon {
        for (ti, &theta) in result.wrong_thetas.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                step,
                result.mode.as_str(),
                theta,
                fmt(result.mean_lbr[ti][step]),
                fmt(result.se_lbr[ti][step]),
                fmt(result.mean_belief_true[step]),
                fmt(result.se_belief_true[step]),
            ));
        }
    }
    write_file(path, &out)
}

/// Analytic impact table, one row per agent:
/// `mode, agent, lambda_inf_<theta>..., C_m, normalized_score`.
pub fn write_impact_csv(
    path: &Path,
    report: &ImpactReport,
    wrong_thetas: &[usize],
    scenario_fingerprint: &str,
) -> Result<()> {
    let mut out = header_lines(scenario_fingerprint, None);
    let lambda_cols: Vec<String> = wrong_thetas
        .iter()
        .map(|t| format!("lambda_inf_{t}"))
        .collect();
    out.push_str(&format!(
        "mode,agent,{},C_m,normalized_score\n",
        lambda_cols.join(",")
    ));
    for (agent, lambda) in report.lambda_inf.iter().enumerate() {
        let lams: Vec<String> = wrong_thetas.iter().map(|&t| fmt(lambda[t])).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            report.mode.as_str(),
            agent,
            lams.join(","),
            fmt(report.impact[agent]),
            fmt(report.normalized[agent]),
        ));
    }
    write_file(path, &out)
}

/// Misinformation thresholds, one row per agent; cells are empty where the
/// threshold is undefined (participation 0 or 1).
pub fn write_thresholds_csv(
    path: &Path,
    mode: &str,
    thresholds: &[Vec<Option<f64>>],
    wrong_thetas: &[usize],
    scenario_fingerprint: &str,
) -> Result<()> {
    let mut out = header_lines(scenario_fingerprint, None);
    let cols: Vec<String> = wrong_thetas
        .iter()
        .map(|t| format!("misinfo_threshold_{t}"))
        .collect();
    out.push_str(&format!("mode,agent,{}\n", cols.join(",")));
    for (agent, row) in thresholds.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| v.map(fmt).unwrap_or_default())
            .collect();
        out.push_str(&format!("{},{},{}\n", mode, agent, cells.join(",")));
    }
    write_file(path, &out)
}

/// Sweep table, one row per swept value, with analytic columns left empty
/// when the roster has no generative models.
pub fn write_sweep_csv(
    path: &Path,
    table: &SweepTable,
    scenario_fingerprint: &str,
) -> Result<()> {
    let mut out = header_lines(scenario_fingerprint, None);
    let analytic_cols: Vec<String> = table
        .wrong_thetas
        .iter()
        .map(|t| format!("analytic_lambda_{t}"))
        .collect();
    let empirical_cols: Vec<String> = table
        .wrong_thetas
        .iter()
        .map(|t| format!("empirical_lambda_{t}"))
        .collect();
    out.push_str(&format!(
        "parameter,value,mode,analytic_impact,empirical_impact,empirical_se,{},{}\n",
        analytic_cols.join(","),
        empirical_cols.join(","),
    ));
    for row in &table.rows {
        let analytic_impact = row.analytic_impact.map(fmt).unwrap_or_default();
        let analytic_lams: Vec<String> = match &row.analytic_lambda {
            Some(lams) => lams.iter().map(|&v| fmt(v)).collect(),
            None => vec![String::new(); table.wrong_thetas.len()],
        };
        let empirical_lams: Vec<String> =
            row.empirical_lambda.iter().map(|&v| fmt(v)).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            table.parameter.as_str(),
            fmt(row.value),
            table.mode.as_str(),
            analytic_impact,
            fmt(row.empirical_impact),
            fmt(row.empirical_se),
            analytic_lams.join(","),
            empirical_lams.join(","),
        ));
    }
    write_file(path, &out)
}

#[derive(Debug, Serialize)]
pub struct ComparisonEntry {
    pub theta_index: usize,
    pub simulated: f64,
    pub theoretical: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleEntry {
    pub theta_index: usize,
    pub closed_form: f64,
    pub matrix_steady_state: f64,
    pub abs_dev: f64,
    pub pass: bool,
}

/// JSON run summary; sections that do not apply to a command are omitted.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub tool: String,
    pub command: String,
    pub name: String,
    pub mode: String,
    pub scenario_fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run_fingerprint: Option<String>,
    pub master_seed: u64,
    pub replicas: usize,
    pub horizon: usize,
    /// Steady-state statistics average the final tenth of the horizon.
    pub tail_window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<ComparisonEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub oracle_checks: Vec<OracleEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_pass: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunSummary {
    pub fn comparison_entries(report: &ComparisonReport) -> Vec<ComparisonEntry> {
        report
            .rows
            .iter()
            .map(|r| ComparisonEntry {
                theta_index: r.theta,
                simulated: r.simulated,
                theoretical: r.theoretical,
                abs_dev: r.abs_dev,
                rel_dev: r.rel_dev,
                pass: r.pass,
            })
            .collect()
    }
}

pub fn write_summary_json(path: &Path, summary: &RunSummary) -> Result<()> {
    let json = serde_json::to_string_pretty(summary).map_err(|e| {
        Error::InternalConsistency(format!("summary serialization failed: {e}"))
    })?;
    write_file(path, &format!("{json}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_lossless_and_stable() {
        for v in [0.1, 1.0 / 3.0, 1e-12, 123456.789, -0.0625] {
            let s = fmt(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            assert_eq!(fmt(v), s);
        }
        assert_eq!(fmt(f64::INFINITY), "inf");
        assert_eq!(fmt(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt(f64::NAN), "NaN");
    }
}
