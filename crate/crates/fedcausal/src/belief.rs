//! Hypothesis-space and belief primitives.
//!
//! Beliefs are probability mass functions over a finite hypothesis set,
//! stored in the log domain. A 500-step trial multiplies hundreds of
//! likelihood factors; in the linear domain that underflows, so every
//! product here is a sum of logs followed by a log-sum-exp normalization.

use crate::error::{Error, Result};

/// Log-mass floor for full support. A normalized component below this is a
/// constraint violation at construction time, never silently clamped:
/// zero-probability hypotheses would make KL divergences infinite and mask
/// identifiability bugs downstream.
pub const FULL_SUPPORT_LOG_FLOOR: f64 = -700.0;

/// Numerically stable `log(sum(exp(values)))` via the shift-by-max trick.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// An ordered finite set of hypotheses with a designated true one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisSpace {
    labels: Vec<String>,
    true_index: usize,
}

impl HypothesisSpace {
    pub fn new(labels: Vec<String>, true_index: usize) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::invalid(
                "hypothesis space",
                format!("need at least 2 hypotheses, got {}", labels.len()),
            ));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::invalid(
                    "hypothesis space",
                    format!("duplicate label {a:?}"),
                ));
            }
        }
        if true_index >= labels.len() {
            return Err(Error::invalid(
                "hypothesis space",
                format!(
                    "true hypothesis index {true_index} out of range for {} labels",
                    labels.len()
                ),
            ));
        }
        Ok(Self { labels, true_index })
    }

    /// Space with labels `"h0".."h{n-1}"`; handy in tests and sweeps.
    pub fn indexed(len: usize, true_index: usize) -> Result<Self> {
        Self::new((0..len).map(|i| format!("h{i}")).collect(), true_index)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees H >= 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn true_index(&self) -> usize {
        self.true_index
    }

    /// Indices of all hypotheses other than the true one, in order.
    pub fn wrong_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(move |&i| i != self.true_index)
    }
}

/// A pmf over the hypothesis set, held as log-probabilities.
///
/// Invariants: every component is finite and the masses sum to one. Public
/// constructors additionally enforce the full-support floor; internal
/// protocol updates preserve finiteness by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    log_mass: Vec<f64>,
}

impl Belief {
    /// Uniform belief over `len` hypotheses.
    pub fn uniform(len: usize) -> Self {
        let v = -(len as f64).ln();
        Self {
            log_mass: vec![v; len],
        }
    }

    /// Normalize a vector of log weights onto the simplex.
    ///
    /// Invariant under adding a constant to all entries (shift invariance
    /// of log-sum-exp), so weights around 1000 are as safe as weights
    /// around 0.
    pub fn from_log_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::MalformedWeights("empty weight vector".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::MalformedWeights(format!(
                "non-finite entry {w} at index {i}"
            )));
        }
        let belief = Self::normalize_unchecked(weights);
        if let Some((i, &lm)) = belief
            .log_mass
            .iter()
            .enumerate()
            .find(|(_, &lm)| lm < FULL_SUPPORT_LOG_FLOOR)
        {
            return Err(Error::FullSupportViolation(format!(
                "hypothesis {i} has log-mass {lm:.1}, below the floor {FULL_SUPPORT_LOG_FLOOR}"
            )));
        }
        Ok(belief)
    }

    /// Normalize linear-domain masses; entries must be strictly positive.
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        let logs: Vec<f64> = masses
            .iter()
            .map(|&m| if m > 0.0 { m.ln() } else { f64::NEG_INFINITY })
            .collect();
        Self::from_log_weights(&logs)
    }

    /// Normalization without the full-support floor check. Used by the
    /// protocol engine, where long runs legitimately push wrong-hypothesis
    /// masses far below the construction floor while staying finite.
    pub(crate) fn normalize_unchecked(weights: &[f64]) -> Self {
        let lse = log_sum_exp(weights);
        Self {
            log_mass: weights.iter().map(|w| w - lse).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.log_mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mass.is_empty()
    }

    pub fn log_mass(&self) -> &[f64] {
        &self.log_mass
    }

    /// Linear-domain mass of one hypothesis.
    pub fn mass(&self, index: usize) -> f64 {
        self.log_mass[index].exp()
    }

    /// Linear-domain masses for all hypotheses.
    pub fn masses(&self) -> Vec<f64> {
        self.log_mass.iter().map(|lm| lm.exp()).collect()
    }

    /// Index of the maximum-mass hypothesis; ties break to the lowest
    /// index so rankings are deterministic.
    pub fn map_estimate(&self) -> usize {
        let mut best = 0;
        for (i, &lm) in self.log_mass.iter().enumerate().skip(1) {
            if lm > self.log_mass[best] {
                best = i;
            }
        }
        best
    }

    /// Log-belief ratios `log mass(true)/mass(theta)` for every hypothesis;
    /// the entry at the true index is exactly zero.
    pub fn to_lbr(&self, space: &HypothesisSpace) -> LogBeliefRatioVector {
        let t = space.true_index();
        let values = self
            .log_mass
            .iter()
            .enumerate()
            .map(|(i, &lm)| if i == t { 0.0 } else { self.log_mass[t] - lm })
            .collect();
        LogBeliefRatioVector {
            values,
            true_index: t,
        }
    }

    /// Inverse of [`Belief::to_lbr`]: mass(true) = 1 / (1 + sum over wrong
    /// hypotheses of exp(-ratio)), remaining mass apportioned accordingly.
    pub fn from_lbr(lbr: &LogBeliefRatioVector) -> Self {
        let weights: Vec<f64> = lbr.values.iter().map(|v| -v).collect();
        Self::normalize_unchecked(&weights)
    }
}

/// Log-belief ratios of one belief relative to the true hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBeliefRatioVector {
    values: Vec<f64>,
    true_index: usize,
}

impl LogBeliefRatioVector {
    pub fn new(values: Vec<f64>, true_index: usize) -> Result<Self> {
        if true_index >= values.len() {
            return Err(Error::invalid(
                "log-belief ratio vector",
                format!("true index {true_index} out of range"),
            ));
        }
        if values[true_index] != 0.0 {
            return Err(Error::invalid(
                "log-belief ratio vector",
                format!(
                    "entry at the true index must be exactly 0, got {}",
                    values[true_index]
                ),
            ));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(
                "log-belief ratio vector",
                format!("non-finite entry {v} at index {i}"),
            ));
        }
        Ok(Self { values, true_index })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn true_index(&self) -> usize {
        self.true_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!(
                (a - e).abs() <= tol,
                "got {actual:?}, expected {expected:?}"
            );
        }
    }

    #[test]
    fn normalize_symmetric_weights() {
        let b = Belief::from_log_weights(&[0.0, 0.0]).unwrap();
        assert_close(&b.masses(), &[0.5, 0.5], 1e-15);
    }

    #[test]
    fn normalize_forced_ratios() {
        let b = Belief::from_log_weights(&[2f64.ln(), 1f64.ln(), 1f64.ln()]).unwrap();
        assert_close(&b.masses(), &[0.5, 0.25, 0.25], 1e-12);
    }

    #[test]
    fn normalize_is_overflow_safe() {
        // Exact rational result on the shifted weights: (1, 3) / 4.
        let b = Belief::from_log_weights(&[1000.0, 1000.0 + 3f64.ln()]).unwrap();
        assert_close(&b.masses(), &[0.25, 0.75], 1e-12);
    }

    #[test]
    fn normalize_shift_invariance() {
        let w = [0.3, -1.2, 4.5, 0.0];
        let shifted: Vec<f64> = w.iter().map(|x| x + 123.456).collect();
        let a = Belief::from_log_weights(&w).unwrap();
        let b = Belief::from_log_weights(&shifted).unwrap();
        assert_close(&a.masses(), &b.masses(), 1e-12);
    }

    #[test]
    fn normalize_rejects_non_finite() {
        assert!(matches!(
            Belief::from_log_weights(&[0.0, f64::NAN]),
            Err(Error::MalformedWeights(_))
        ));
        assert!(matches!(
            Belief::from_log_weights(&[0.0, f64::NEG_INFINITY]),
            Err(Error::MalformedWeights(_))
        ));
    }

    #[test]
    fn construction_enforces_full_support() {
        assert!(matches!(
            Belief::from_log_weights(&[0.0, -800.0]),
            Err(Error::FullSupportViolation(_))
        ));
        assert!(matches!(
            Belief::from_masses(&[1.0, 0.0]),
            Err(Error::MalformedWeights(_))
        ));
    }

    #[test]
    fn lbr_of_uniform_is_zero() {
        let space = HypothesisSpace::indexed(3, 0).unwrap();
        let lbr = Belief::uniform(3).to_lbr(&space);
        assert_close(lbr.values(), &[0.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn lbr_matches_definition() {
        let space = HypothesisSpace::indexed(2, 0).unwrap();
        let lbr = Belief::from_masses(&[0.9, 0.1]).unwrap().to_lbr(&space);
        assert!((lbr.values()[1] - 9f64.ln()).abs() < 1e-12);
        assert_eq!(lbr.values()[0], 0.0);

        let lbr = Belief::from_masses(&[0.25, 0.75]).unwrap().to_lbr(&space);
        assert!((lbr.values()[1] - (-(3f64.ln()))).abs() < 1e-12);
    }

    #[test]
    fn from_lbr_inverts_to_lbr() {
        let b = Belief::from_lbr(&LogBeliefRatioVector::new(vec![0.0, 0.0], 0).unwrap());
        assert_close(&b.masses(), &[0.5, 0.5], 1e-15);

        let b = Belief::from_lbr(&LogBeliefRatioVector::new(vec![0.0, 9f64.ln()], 0).unwrap());
        assert_close(&b.masses(), &[0.9, 0.1], 1e-12);
    }

    #[test]
    fn from_lbr_single_wrong_hypothesis_value() {
        // mass(true) = 1 / (1 + exp(-2.375)), the synchronous steady state
        // of the reference 12-agent configuration.
        let b = Belief::from_lbr(&LogBeliefRatioVector::new(vec![0.0, 2.375], 0).unwrap());
        assert!((b.mass(0) - 0.9149009549929797).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_belief_lbr_belief() {
        let space = HypothesisSpace::indexed(4, 2).unwrap();
        let b = Belief::from_masses(&[0.1, 0.2, 0.6, 0.1]).unwrap();
        let back = Belief::from_lbr(&b.to_lbr(&space));
        assert_close(&back.masses(), &b.masses(), 1e-9);
    }

    #[test]
    fn map_estimate_unique_max() {
        let b = Belief::from_masses(&[0.2, 0.5, 0.3]).unwrap();
        assert_eq!(b.map_estimate(), 1);
    }

    #[test]
    fn map_estimate_ties_break_low() {
        assert_eq!(Belief::from_masses(&[0.5, 0.5]).unwrap().map_estimate(), 0);
        assert_eq!(Belief::uniform(50).map_estimate(), 0);
    }

    #[test]
    fn hypothesis_space_validation() {
        assert!(HypothesisSpace::new(vec!["a".into()], 0).is_err());
        assert!(HypothesisSpace::new(vec!["a".into(), "a".into()], 0).is_err());
        assert!(HypothesisSpace::new(vec!["a".into(), "b".into()], 2).is_err());
        let s = HypothesisSpace::new(vec!["a".into(), "b".into(), "c".into()], 1).unwrap();
        assert_eq!(s.wrong_indices().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn lbr_vector_validation() {
        assert!(LogBeliefRatioVector::new(vec![0.1, 0.0], 0).is_err());
        assert!(LogBeliefRatioVector::new(vec![0.0, f64::INFINITY], 0).is_err());
    }
}
