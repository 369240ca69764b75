//! Per-agent observation models: synthetic sampling, log-likelihood
//! evaluation, informativeness (KL divergence to the true hypothesis), and
//! replay of precomputed likelihood streams from CSV files.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::belief::HypothesisSpace;
use crate::error::{Error, Result};
use crate::fingerprint::FingerprintHasher;

/// One observation, matching the model family that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observation {
    Real(f64),
    Symbol(usize),
}

/// Gaussian observations with one mean per hypothesis and shared variance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMeanModel {
    means: Vec<f64>,
    std_dev: f64,
}

impl GaussianMeanModel {
    pub fn new(means: Vec<f64>, std_dev: f64) -> Result<Self> {
        if means.len() < 2 {
            return Err(Error::invalid(
                "gaussian model",
                format!("need one mean per hypothesis (>= 2), got {}", means.len()),
            ));
        }
        if !means.iter().all(|m| m.is_finite()) {
            return Err(Error::invalid("gaussian model", "non-finite mean"));
        }
        if !(std_dev > 0.0 && std_dev.is_finite()) {
            return Err(Error::invalid(
                "gaussian model",
                format!("std_dev must be positive and finite, got {std_dev}"),
            ));
        }
        Ok(Self { means, std_dev })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    pub fn hypothesis_count(&self) -> usize {
        self.means.len()
    }

    pub fn log_likelihood(&self, x: f64, hypothesis: usize) -> f64 {
        let z = (x - self.means[hypothesis]) / self.std_dev;
        -0.5 * (2.0 * std::f64::consts::PI).ln() - self.std_dev.ln() - 0.5 * z * z
    }

    pub fn sample(&self, true_hypothesis: usize, rng: &mut ChaCha12Rng) -> f64 {
        Normal::new(self.means[true_hypothesis], self.std_dev)
            .expect("std_dev validated at construction")
            .sample(rng)
    }

    /// Closed-form KL divergence between equal-variance Gaussians:
    /// `(mean_true - mean_theta)^2 / (2 sigma^2)`.
    pub fn informativeness(&self, true_hypothesis: usize) -> Vec<f64> {
        let mu0 = self.means[true_hypothesis];
        self.means
            .iter()
            .map(|&mu| {
                let diff = mu0 - mu;
                diff * diff / (2.0 * self.std_dev * self.std_dev)
            })
            .collect()
    }
}

/// Finite-alphabet observations: an H x V table of symbol probabilities.
///
/// All entries must be strictly positive so every hypothesis shares the
/// same support and KL divergences stay finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalModel {
    table: Vec<Vec<f64>>,
}

impl CategoricalModel {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::invalid(
                "categorical model",
                format!("need one row per hypothesis (>= 2), got {}", table.len()),
            ));
        }
        let v = table[0].len();
        if v == 0 {
            return Err(Error::invalid("categorical model", "empty alphabet"));
        }
        for (h, row) in table.iter().enumerate() {
            if row.len() != v {
                return Err(Error::invalid(
                    "categorical model",
                    format!("row {h} has {} entries, expected {v}", row.len()),
                ));
            }
            if !row.iter().all(|&p| p > 0.0 && p.is_finite()) {
                return Err(Error::invalid(
                    "categorical model",
                    format!("row {h} must have strictly positive finite entries"),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(
                    "categorical model",
                    format!("row {h} sums to {sum}, expected 1 within 1e-9"),
                ));
            }
        }
        Ok(Self { table })
    }

    pub fn hypothesis_count(&self) -> usize {
        self.table.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.table[0].len()
    }

    pub fn row(&self, hypothesis: usize) -> &[f64] {
        &self.table[hypothesis]
    }

    pub fn log_likelihood(&self, symbol: usize, hypothesis: usize) -> Result<f64> {
        let row = &self.table[hypothesis];
        if symbol >= row.len() {
            return Err(Error::ObservationDomain(format!(
                "symbol {symbol} outside alphabet of size {}",
                row.len()
            )));
        }
        Ok(row[symbol].ln())
    }

    pub fn sample(&self, true_hypothesis: usize, rng: &mut ChaCha12Rng) -> usize {
        let row = &self.table[true_hypothesis];
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (symbol, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return symbol;
            }
        }
        row.len() - 1
    }

    /// Discrete KL divergence of the true row against every row.
    pub fn informativeness(&self, true_hypothesis: usize) -> Vec<f64> {
        let p0 = &self.table[true_hypothesis];
        self.table
            .iter()
            .map(|p| {
                let kl: f64 = p0
                    .iter()
                    .zip(p.iter())
                    .map(|(&a, &b)| a * (a / b).ln())
                    .sum();
                // Gibbs: KL >= 0. Tolerate rounding at the zero boundary only.
                assert!(kl >= -1e-12, "categorical KL came out {kl}");
                kl.max(0.0)
            })
            .collect()
    }
}

/// Precomputed per-step log-likelihood rows read from a CSV file; stands in
/// for an upstream calibration pipeline when replaying real data.
///
/// Carries no generative model, so informativeness is undefined and
/// analytics over stream agents fall back to empirical impact estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodStreamSource {
    agent_label: String,
    hypotheses: usize,
    rows: Vec<Vec<f64>>,
}

impl LikelihoodStreamSource {
    pub fn new(agent_label: String, hypotheses: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != hypotheses {
                return Err(Error::invalid(
                    "likelihood stream",
                    format!("row {i} has {} entries, expected {hypotheses}", row.len()),
                ));
            }
            if !row.iter().all(|v| v.is_finite()) {
                return Err(Error::invalid(
                    "likelihood stream",
                    format!("row {i} has a non-finite entry"),
                ));
            }
        }
        Ok(Self {
            agent_label,
            hypotheses,
            rows,
        })
    }

    pub fn agent_label(&self) -> &str {
        &self.agent_label
    }

    pub fn hypothesis_count(&self) -> usize {
        self.hypotheses
    }

    /// Number of time steps the stream can serve.
    pub fn horizon(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, step: usize) -> &[f64] {
        &self.rows[step]
    }
}

/// Read a likelihood stream: UTF-8 CSV, one time step per line, H
/// comma-separated log-likelihood values. Lines starting with `#` are
/// header comments. An empty file is a valid horizon-0 source.
pub fn read_likelihood_stream(
    path: impl AsRef<Path>,
    space: &HypothesisSpace,
) -> Result<LikelihoodStreamSource> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let h = space.len();
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != h {
            return Err(Error::StreamFormat {
                path: path.display().to_string(),
                line: line_no,
                why: format!("expected {h} values, found {}", fields.len()),
            });
        }
        let mut row = Vec::with_capacity(h);
        for field in fields {
            let v: f64 = field.trim().parse().map_err(|_| Error::StreamFormat {
                path: path.display().to_string(),
                line: line_no,
                why: format!("cannot parse {:?} as a number", field.trim()),
            })?;
            if !v.is_finite() {
                return Err(Error::StreamFormat {
                    path: path.display().to_string(),
                    line: line_no,
                    why: format!("non-finite log-likelihood {v}"),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    LikelihoodStreamSource::new(path.display().to_string(), h, rows)
}

/// An agent's observation model.
#[derive(Debug, Clone, PartialEq)]
pub enum LikelihoodModel {
    Gaussian(GaussianMeanModel),
    Categorical(CategoricalModel),
    Stream(LikelihoodStreamSource),
}

impl LikelihoodModel {
    pub fn hypothesis_count(&self) -> usize {
        match self {
            LikelihoodModel::Gaussian(m) => m.hypothesis_count(),
            LikelihoodModel::Categorical(m) => m.hypothesis_count(),
            LikelihoodModel::Stream(s) => s.hypothesis_count(),
        }
    }

    pub fn is_stream(&self) -> bool {
        matches!(self, LikelihoodModel::Stream(_))
    }

    pub fn as_stream(&self) -> Option<&LikelihoodStreamSource> {
        match self {
            LikelihoodModel::Stream(s) => Some(s),
            _ => None,
        }
    }

    /// Log-likelihood of one observation under one hypothesis.
    pub fn log_likelihood(&self, observation: &Observation, hypothesis: usize) -> Result<f64> {
        match (self, observation) {
            (LikelihoodModel::Gaussian(m), Observation::Real(x)) => {
                Ok(m.log_likelihood(*x, hypothesis))
            }
            (LikelihoodModel::Categorical(m), Observation::Symbol(v)) => {
                m.log_likelihood(*v, hypothesis)
            }
            (LikelihoodModel::Stream(_), _) => Err(Error::UnsupportedOperation(
                "stream sources replay precomputed rows and cannot score observations".into(),
            )),
            _ => Err(Error::ObservationDomain(
                "observation kind does not match the model family".into(),
            )),
        }
    }

    /// Log-likelihoods of one observation under every hypothesis.
    pub fn log_likelihood_row(&self, observation: &Observation) -> Result<Vec<f64>> {
        (0..self.hypothesis_count())
            .map(|h| self.log_likelihood(observation, h))
            .collect()
    }

    /// Draw one observation from the true-hypothesis distribution.
    pub fn sample_observation(
        &self,
        true_hypothesis: usize,
        rng: &mut ChaCha12Rng,
    ) -> Result<Observation> {
        match self {
            LikelihoodModel::Gaussian(m) => Ok(Observation::Real(m.sample(true_hypothesis, rng))),
            LikelihoodModel::Categorical(m) => {
                Ok(Observation::Symbol(m.sample(true_hypothesis, rng)))
            }
            LikelihoodModel::Stream(_) => Err(Error::UnsupportedOperation(
                "stream sources are not generative; rows are replayed in file order".into(),
            )),
        }
    }

    /// KL divergence of the true hypothesis against every hypothesis.
    pub fn informativeness(&self, true_hypothesis: usize) -> Result<Vec<f64>> {
        match self {
            LikelihoodModel::Gaussian(m) => Ok(m.informativeness(true_hypothesis)),
            LikelihoodModel::Categorical(m) => Ok(m.informativeness(true_hypothesis)),
            LikelihoodModel::Stream(s) => Err(Error::InformativenessUnavailable {
                agent: usize::MAX,
                why: format!(
                    "stream source {:?} carries no generative model",
                    s.agent_label()
                ),
            }),
        }
    }

    pub(crate) fn fingerprint_into(&self, hasher: &mut FingerprintHasher) {
        match self {
            LikelihoodModel::Gaussian(m) => {
                hasher.write_str("gaussian");
                hasher.write_usize(m.means.len());
                for &mu in &m.means {
                    hasher.write_f64(mu);
                }
                hasher.write_f64(m.std_dev);
            }
            LikelihoodModel::Categorical(m) => {
                hasher.write_str("categorical");
                hasher.write_usize(m.table.len());
                hasher.write_usize(m.alphabet_size());
                for row in &m.table {
                    for &p in row {
                        hasher.write_f64(p);
                    }
                }
            }
            LikelihoodModel::Stream(s) => {
                hasher.write_str("stream");
                hasher.write_usize(s.hypotheses);
                hasher.write_usize(s.rows.len());
                for row in &s.rows {
                    for &v in row {
                        hasher.write_f64(v);
                    }
                }
            }
        }
    }
}

/// K x H matrix of informativeness values; column at the true hypothesis is
/// identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InformativenessMatrix {
    d: Vec<Vec<f64>>,
    true_index: usize,
}

impl InformativenessMatrix {
    pub fn new(d: Vec<Vec<f64>>, true_index: usize) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::invalid("informativeness matrix", "no agents"));
        }
        let h = d[0].len();
        if true_index >= h {
            return Err(Error::invalid(
                "informativeness matrix",
                "true index out of range",
            ));
        }
        let mut clamped = Vec::with_capacity(d.len());
        for (k, row) in d.into_iter().enumerate() {
            if row.len() != h {
                return Err(Error::invalid(
                    "informativeness matrix",
                    format!("agent {k} row has {} entries, expected {h}", row.len()),
                ));
            }
            let mut out = Vec::with_capacity(h);
            for (theta, v) in row.into_iter().enumerate() {
                if !v.is_finite() || v < -1e-12 {
                    return Err(Error::invalid(
                        "informativeness matrix",
                        format!("agent {k}, hypothesis {theta}: value {v} must be finite and >= 0"),
                    ));
                }
                if theta == true_index && v.abs() > 1e-12 {
                    return Err(Error::invalid(
                        "informativeness matrix",
                        format!("agent {k}: entry at the true hypothesis must be 0, got {v}"),
                    ));
                }
                out.push(if theta == true_index { 0.0 } else { v.max(0.0) });
            }
            clamped.push(out);
        }
        Ok(Self {
            d: clamped,
            true_index,
        })
    }

    /// Build from a roster of models. Fails naming the first stream-backed
    /// agent, for which informativeness is undefined.
    pub fn from_models(models: &[&LikelihoodModel], space: &HypothesisSpace) -> Result<Self> {
        let mut rows = Vec::with_capacity(models.len());
        for (k, model) in models.iter().enumerate() {
            let row = model
                .informativeness(space.true_index())
                .map_err(|e| match e {
                    Error::InformativenessUnavailable { why, .. } => {
                        Error::InformativenessUnavailable { agent: k, why }
                    }
                    other => other,
                })?;
            rows.push(row);
        }
        Self::new(rows, space.true_index())
    }

    pub fn agent_count(&self) -> usize {
        self.d.len()
    }

    pub fn hypothesis_count(&self) -> usize {
        self.d[0].len()
    }

    pub fn true_index(&self) -> usize {
        self.true_index
    }

    pub fn value(&self, agent: usize, theta: usize) -> f64 {
        self.d[agent][theta]
    }

    pub fn agent_row(&self, agent: usize) -> &[f64] {
        &self.d[agent]
    }

    /// Per-agent values for one wrong hypothesis.
    pub fn column(&self, theta: usize) -> Vec<f64> {
        self.d.iter().map(|row| row[theta]).collect()
    }
}

/// Wrong hypotheses no agent can distinguish from the true one. Empty means
/// the roster is globally identifiable.
pub fn validate_global_identifiability(d: &InformativenessMatrix) -> Vec<usize> {
    (0..d.hypothesis_count())
        .filter(|&theta| {
            theta != d.true_index() && !(0..d.agent_count()).any(|k| d.value(k, theta) > 0.0)
        })
        .collect()
}

/// Identifiability under effective weights: the distinguishing agent must
/// also carry positive fused weight `confidence * participation`, otherwise
/// its information never reaches the fusion center.
pub fn validate_effective_identifiability(
    d: &InformativenessMatrix,
    weights: &[f64],
    participation: &[f64],
) -> Vec<usize> {
    (0..d.hypothesis_count())
        .filter(|&theta| {
            theta != d.true_index()
                && !(0..d.agent_count())
                    .any(|k| d.value(k, theta) > 0.0 && weights[k] * participation[k] > 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;

    #[test]
    fn gaussian_log_density_at_mean() {
        let m = GaussianMeanModel::new(vec![0.0, 1.0], 1.0).unwrap();
        let expected = -0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((m.log_likelihood(0.0, 0) - expected).abs() < 1e-12);
    }

    #[test]
    fn gaussian_midpoint_symmetry() {
        let m = GaussianMeanModel::new(vec![0.0, 1.0], 1.0).unwrap();
        let a = m.log_likelihood(0.5, 0);
        let b = m.log_likelihood(0.5, 1);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn categorical_table_lookup() {
        let m = CategoricalModel::new(vec![vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        assert!((m.log_likelihood(1, 0).unwrap() - 0.75f64.ln()).abs() < 1e-12);
        assert!(matches!(
            m.log_likelihood(2, 0),
            Err(Error::ObservationDomain(_))
        ));
    }

    #[test]
    fn categorical_rows_are_pmfs() {
        let m = CategoricalModel::new(vec![vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        for h in 0..2 {
            let sum: f64 = (0..2)
                .map(|v| m.log_likelihood(v, h).unwrap().exp())
                .sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
        // rows must be positive and normalized
        assert!(CategoricalModel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).is_err());
        assert!(CategoricalModel::new(vec![vec![0.6, 0.6], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let model =
            LikelihoodModel::Gaussian(GaussianMeanModel::new(vec![0.0, 0.5], 1.0).unwrap());
        let mut a = TrialRng::for_replica(11, 0, 1);
        let mut b = TrialRng::for_replica(11, 0, 1);
        let x = model.sample_observation(0, a.observation(0)).unwrap();
        let y = model.sample_observation(0, b.observation(0)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn tiny_variance_concentrates_on_mean() {
        let m = GaussianMeanModel::new(vec![3.0, 5.0], 1e-9).unwrap();
        let mut rng = TrialRng::for_replica(1, 0, 1);
        let x = m.sample(0, rng.observation(0));
        assert!((x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn sample_mean_matches_model_mean() {
        let m = GaussianMeanModel::new(vec![0.5, 1.5], 1.0).unwrap();
        let mut rng = TrialRng::for_replica(2024, 0, 1);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| m.sample(0, rng.observation(0))).sum::<f64>() / n as f64;
        assert!(
            (mean - 0.5).abs() < 0.02,
            "law-of-large-numbers check failed: {mean}"
        );
    }

    #[test]
    fn gaussian_informativeness_closed_form() {
        let m = GaussianMeanModel::new(vec![0.0, 0.5], 1.0).unwrap();
        let d = m.informativeness(0);
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 0.125).abs() < 1e-15);

        let m = GaussianMeanModel::new(vec![0.0, 1.0], 1.0).unwrap();
        assert!((m.informativeness(0)[1] - 0.5).abs() < 1e-15);
    }

    /// Independent oracle: KL of the Gaussian pair by composite Simpson
    /// quadrature of `p0 * ln(p0/p1)` over +-12 sigma.
    fn gaussian_kl_quadrature(mu0: f64, mu1: f64, sigma: f64) -> f64 {
        let lo = mu0.min(mu1) - 12.0 * sigma;
        let hi = mu0.max(mu1) + 12.0 * sigma;
        let n = 20_000; // even
        let h = (hi - lo) / n as f64;
        let pdf = |x: f64, mu: f64| {
            (-(x - mu) * (x - mu) / (2.0 * sigma * sigma)).exp()
                / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        };
        let f = |x: f64| {
            let p0 = pdf(x, mu0);
            let p1 = pdf(x, mu1);
            if p0 <= 0.0 {
                0.0
            } else {
                p0 * (p0 / p1).ln()
            }
        };
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            let x = lo + i as f64 * h;
            acc += f(x) * if i % 2 == 0 { 2.0 } else { 4.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn gaussian_informativeness_matches_quadrature() {
        for (mu1, expected) in [(0.5, 0.125), (1.0, 0.5)] {
            let numeric = gaussian_kl_quadrature(0.0, mu1, 1.0);
            assert!(
                (numeric - expected).abs() < 1e-9,
                "quadrature {numeric} vs closed form {expected}"
            );
        }
    }

    #[test]
    fn empirical_kl_matches_closed_form() {
        // Monte Carlo estimate of E[ln L(x|h0)/L(x|h1)] under h0 within
        // three standard errors of the estimator.
        let m = GaussianMeanModel::new(vec![0.0, 1.0], 1.0).unwrap();
        let mut rng = TrialRng::for_replica(99, 0, 1);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| {
                let x = m.sample(0, rng.observation(0));
                m.log_likelihood(x, 0) - m.log_likelihood(x, 1)
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 0.5).abs() < 3.0 * se,
            "empirical {mean} vs 0.5 (se {se})"
        );
    }

    #[test]
    fn identical_categorical_rows_have_zero_divergence() {
        let m = CategoricalModel::new(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        assert_eq!(m.informativeness(0), vec![0.0, 0.0]);
    }

    #[test]
    fn identifiability_reports_blind_spots() {
        let d = InformativenessMatrix::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], 0).unwrap();
        assert_eq!(validate_global_identifiability(&d), vec![1]);

        let d = InformativenessMatrix::new(vec![vec![0.0, 0.5], vec![0.0, 0.0]], 0).unwrap();
        assert!(validate_global_identifiability(&d).is_empty());
        // the only informative agent never participates
        assert_eq!(
            validate_effective_identifiability(&d, &[0.5, 0.5], &[0.0, 1.0]),
            vec![1]
        );
    }

    #[test]
    fn reference_configuration_is_identifiable() {
        // 12 agents, alternative means 0.5 (odd positions) / 1.0 (even).
        let models: Vec<LikelihoodModel> = (0..12)
            .map(|k| {
                let alt = if k % 2 == 0 { 0.5 } else { 1.0 };
                LikelihoodModel::Gaussian(GaussianMeanModel::new(vec![0.0, alt], 1.0).unwrap())
            })
            .collect();
        let refs: Vec<&LikelihoodModel> = models.iter().collect();
        let space = HypothesisSpace::indexed(2, 0).unwrap();
        let d = InformativenessMatrix::from_models(&refs, &space).unwrap();
        assert!(validate_global_identifiability(&d).is_empty());
    }

    #[test]
    fn stream_reading_and_errors() {
        let dir = std::env::temp_dir().join(format!("fedcausal-stream-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let space = HypothesisSpace::indexed(2, 0).unwrap();

        let good = dir.join("good.csv");
        std::fs::write(&good, "# agent 0\n-0.1,-0.9\n-0.2,-0.8\n-0.3,-0.7\n").unwrap();
        let s = read_likelihood_stream(&good, &space).unwrap();
        assert_eq!(s.horizon(), 3);
        assert_eq!(s.row(1), &[-0.2, -0.8]);

        let bad = dir.join("bad.csv");
        std::fs::write(&bad, "-0.1,-0.9\n-0.2,-0.8,-0.5\n").unwrap();
        match read_likelihood_stream(&bad, &space) {
            Err(Error::StreamFormat { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }

        let empty = dir.join("empty.csv");
        std::fs::write(&empty, "").unwrap();
        assert_eq!(read_likelihood_stream(&empty, &space).unwrap().horizon(), 0);

        let nonfinite = dir.join("nonfinite.csv");
        std::fs::write(&nonfinite, "-0.1,inf\n").unwrap();
        assert!(read_likelihood_stream(&nonfinite, &space).is_err());

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn stream_refuses_generative_operations() {
        let s = LikelihoodModel::Stream(
            LikelihoodStreamSource::new("a".into(), 2, vec![vec![-0.1, -0.9]]).unwrap(),
        );
        let mut rng = TrialRng::for_replica(0, 0, 1);
        assert!(matches!(
            s.sample_observation(0, rng.observation(0)),
            Err(Error::UnsupportedOperation(_))
        ));
        assert!(matches!(
            s.informativeness(0),
            Err(Error::InformativenessUnavailable { .. })
        ));
    }
}
