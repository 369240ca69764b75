//! Independent verification path for the symmetric protocol: the expected
//! log-belief ratios of the K agents plus the fusion center follow a
//! (K+1)-dimensional affine recursion. Iterating it reproduces expected
//! trajectories; deleting the intervened agent's row and column and solving
//! the resulting linear system reproduces the intervened steady state.
//!
//! The closed forms in [`crate::analytics`] were derived by symbolic
//! simplification of exactly this system, so agreement between the two
//! routes is the strongest internal consistency check the toolkit has.

use crate::error::{Error, Result};
use crate::linalg::{left_perron_vector, solve, spectral_radius, DMat};

const RADIUS_TOL: f64 = 1e-10;
const RADIUS_MAX_ITER: usize = 100_000;
const CONDITION_LIMIT: f64 = 1e12;

/// The transition matrix `R` ((K+1) x (K+1)) and input matrix `U`
/// ((K+1) x K) of the expected-LBR recursion
/// `state_i = R state_{i-1} + U d`, where the first K state entries are
/// the agents' expected log-belief ratios and the last is the fusion
/// center's.
#[derive(Debug, Clone)]
pub struct RecursionMatrices {
    r: DMat,
    u: DMat,
    agents: usize,
}

impl RecursionMatrices {
    pub fn agent_count(&self) -> usize {
        self.agents
    }

    pub fn dim(&self) -> usize {
        self.agents + 1
    }

    pub fn r_at(&self, row: usize, col: usize) -> f64 {
        self.r.at(row, col)
    }

    pub fn u_at(&self, row: usize, col: usize) -> f64 {
        self.u.at(row, col)
    }

    /// Largest deviation of any row sum of `R` from one.
    pub fn max_row_sum_deviation(&self) -> f64 {
        (0..self.dim())
            .map(|r| (self.r.row(r).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Assemble the recursion matrices from confidence weights and
/// participation probabilities.
///
/// Blockwise, with `a_k = w_k p_k`, `pbar_k = 1 - p_k`,
/// `s_k = p_k * sum_{l != k} w_l pbar_l` and `sigma = sum_k w_k pbar_k`:
/// the upper-left K x K block is `diag(pbar) diag(a) + diag(pbar) +
/// p a^T`, the upper-right column is `s`, the bottom row is `(a^T, sigma)`.
/// `R` must come out row-stochastic; any deviation beyond 1e-9 aborts.
pub fn build_recursion(weights: &[f64], participation: &[f64]) -> Result<RecursionMatrices> {
    let k = weights.len();
    if k == 0 || participation.len() != k {
        return Err(Error::invalid(
            "recursion matrices",
            "weights and participation must be non-empty and equally long",
        ));
    }
    let wsum: f64 = weights.iter().sum();
    if (wsum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(
            "recursion matrices",
            format!("weights sum to {wsum}, expected 1"),
        ));
    }
    for (i, (&w, &p)) in weights.iter().zip(participation).enumerate() {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::invalid(
                "recursion matrices",
                format!("weight {w} of agent {i} outside (0, 1]"),
            ));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(
                "recursion matrices",
                format!("participation {p} of agent {i} outside [0, 1]"),
            ));
        }
    }

    let a: Vec<f64> = weights
        .iter()
        .zip(participation)
        .map(|(w, p)| w * p)
        .collect();
    let pbar: Vec<f64> = participation.iter().map(|p| 1.0 - p).collect();
    let sigma: f64 = weights.iter().zip(&pbar).map(|(w, pb)| w * pb).sum();
    let s: Vec<f64> = (0..k)
        .map(|i| {
            participation[i]
                * (0..k)
                    .filter(|&l| l != i)
                    .map(|l| weights[l] * pbar[l])
                    .sum::<f64>()
        })
        .collect();

    let mut upper = DMat::zeros(k, k);
    for row in 0..k {
        for col in 0..k {
            let mut v = participation[row] * a[col];
            if row == col {
                v += pbar[row] * a[row] + pbar[row];
            }
            upper.set(row, col, v);
        }
    }

    let dim = k + 1;
    let mut r = DMat::zeros(dim, dim);
    let mut u = DMat::zeros(dim, k);
    for (row, &s_row) in s.iter().enumerate() {
        for col in 0..k {
            r.set(row, col, upper.at(row, col));
            u.set(row, col, upper.at(row, col));
        }
        r.set(row, k, s_row);
    }
    for (col, &a_col) in a.iter().enumerate() {
        r.set(k, col, a_col);
        u.set(k, col, a_col);
    }
    r.set(k, k, sigma);

    let matrices = RecursionMatrices { r, u, agents: k };
    let dev = matrices.max_row_sum_deviation();
    if dev > 1e-9 {
        return Err(Error::InternalConsistency(format!(
            "recursion matrix lost row-stochasticity (deviation {dev:e})"
        )));
    }
    Ok(matrices)
}

/// Iterate the expected-LBR recursion from the zero state. Entry `k` of
/// each output vector is agent `k`'s expected log-belief ratio, the last
/// entry is the fusion center's.
pub fn expected_lbr_trajectory(
    matrices: &RecursionMatrices,
    informativeness: &[f64],
    horizon: usize,
) -> Vec<Vec<f64>> {
    let forcing = matrices.u.mul_vec(informativeness);
    let mut state = vec![0.0; matrices.dim()];
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let propagated = matrices.r.mul_vec(&state);
        state = propagated
            .iter()
            .zip(&forcing)
            .map(|(a, b)| a + b)
            .collect();
        out.push(state.clone());
    }
    out
}

/// Asymptotic per-step growth rate of the expected log-belief ratios
/// without intervention: the stationary distribution of `R` applied to
/// `U d`. Every component of the state grows at this common rate.
pub fn steady_growth_rate(matrices: &RecursionMatrices, informativeness: &[f64]) -> f64 {
    let pi = left_perron_vector(&matrices.r, RADIUS_TOL, RADIUS_MAX_ITER);
    let forcing = matrices.u.mul_vec(informativeness);
    pi.iter().zip(&forcing).map(|(a, b)| a * b).sum()
}

/// The recursion with the intervened agent removed: its row and column are
/// deleted from `R`, its row from `U`, and its informativeness entry is
/// replaced by the intervention's log ratio `c`.
#[derive(Debug, Clone)]
pub struct ReducedMatrices {
    r: DMat,
    u: DMat,
    d: Vec<f64>,
}

impl ReducedMatrices {
    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// Spectral radius of the reduced transition matrix; strictly below
    /// one whenever the intervened agent has positive participation.
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.r, RADIUS_TOL, RADIUS_MAX_ITER)
    }
}

/// Build the reduced system for an intervention on agent `target` with
/// intervention log ratio `c` (for one wrong hypothesis) and per-agent
/// informativeness values `d` for that hypothesis.
pub fn reduce_for_intervention(
    matrices: &RecursionMatrices,
    target: usize,
    c: f64,
    informativeness: &[f64],
) -> Result<ReducedMatrices> {
    let k = matrices.agent_count();
    if target >= k {
        return Err(Error::invalid(
            "reduced matrices",
            format!("intervened agent {target} out of range"),
        ));
    }
    if informativeness.len() != k {
        return Err(Error::invalid(
            "reduced matrices",
            "informativeness length does not match the agent count",
        ));
    }
    let mut d = informativeness.to_vec();
    d[target] = c;
    Ok(ReducedMatrices {
        r: matrices.r.minor(target, target),
        u: matrices.u.drop_row(target),
        d,
    })
}

/// Steady state of the reduced recursion: solve `(I - R~) x = U~ d~` and
/// return the fusion-center component (the last entry). This is the
/// numerical route against which the symmetric-protocol closed form is
/// validated.
pub fn intervened_steady_state(reduced: &ReducedMatrices) -> Result<f64> {
    let radius = reduced.spectral_radius();
    if radius >= 1.0 - 1e-9 {
        return Err(Error::DegenerateConfiguration(format!(
            "reduced transition matrix has spectral radius {radius}; the intervened \
             steady state exists only below 1"
        )));
    }
    let n = reduced.dim();
    let mut system = DMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let v = if r == c { 1.0 } else { 0.0 } - reduced.r.at(r, c);
            system.set(r, c, v);
        }
    }
    let rhs = reduced.u.mul_vec(&reduced.d);
    let (x, condition) = solve(&system, &rhs)?;
    if condition > CONDITION_LIMIT {
        return Err(Error::DegenerateConfiguration(format!(
            "steady-state system conditioning estimate {condition:e} exceeds {CONDITION_LIMIT:e}"
        )));
    }
    Ok(x[n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::lambda_inf_symmetric;
    use crate::likelihood::InformativenessMatrix;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn reference() -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let w = [[0.125; 4], [0.075; 4], [0.05; 4]].concat();
        let p = [[0.8; 3], [0.6; 3], [0.4; 3], [0.2; 3]].concat();
        let d = (0..12)
            .map(|k| if k % 2 == 0 { 0.125 } else { 0.5 })
            .collect();
        (w, p, d)
    }

    #[test]
    fn full_participation_degenerates() {
        let m = build_recursion(&[0.5, 0.5], &[1.0, 1.0]).unwrap();
        // s = 0, sigma = 0, bottom row is (a^T, 0) with a = weights
        assert_eq!(m.r_at(2, 0), 0.5);
        assert_eq!(m.r_at(2, 1), 0.5);
        assert_eq!(m.r_at(2, 2), 0.0);
        assert_eq!(m.r_at(0, 2), 0.0);
        assert!(m.max_row_sum_deviation() < 1e-12);
    }

    #[test]
    fn rows_sum_to_one() {
        let m = build_recursion(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!(m.max_row_sum_deviation() < 1e-12);
        let (w, p, _) = reference();
        let m = build_recursion(&w, &p).unwrap();
        assert!(m.max_row_sum_deviation() < 1e-12);
    }

    #[test]
    fn interior_participation_gives_positive_entries() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..20 {
            let k = rng.random_range(2..6);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let p: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
            let m = build_recursion(&w, &p).unwrap();
            for r in 0..m.dim() {
                for c in 0..m.dim() {
                    assert!(m.r_at(r, c) > 0.0, "entry ({r},{c}) not positive");
                }
            }
        }
    }

    #[test]
    fn zero_informativeness_is_a_fixed_point() {
        let m = build_recursion(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        let traj = expected_lbr_trajectory(&m, &[0.0, 0.0], 10);
        for state in traj {
            assert!(state.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn growth_rate_matches_trajectory() {
        let (w, p, d) = reference();
        let m = build_recursion(&w, &p).unwrap();
        let rate = steady_growth_rate(&m, &d);
        let horizon = 10_000;
        let traj = expected_lbr_trajectory(&m, &d, horizon);
        let fc_avg = traj[horizon - 1][m.dim() - 1] / horizon as f64;
        assert!(
            (fc_avg - rate).abs() < 1e-3,
            "trajectory {fc_avg} vs Perron rate {rate}"
        );
    }

    #[test]
    fn cesaro_differences_shrink() {
        let (w, p, d) = reference();
        let m = build_recursion(&w, &p).unwrap();
        let horizon = 8192;
        let traj = expected_lbr_trajectory(&m, &d, horizon);
        let avg = |i: usize| {
            traj[i - 1]
                .iter()
                .map(|v| (v / i as f64).abs())
                .fold(0.0f64, f64::max)
        };
        let mut prev_gap = f64::INFINITY;
        for exp in [512usize, 1024, 2048, 4096, 8192].windows(2) {
            let gap = (avg(exp[0]) - avg(exp[1])).abs();
            assert!(gap < prev_gap, "Cesaro differences must shrink");
            prev_gap = gap;
        }
    }

    #[test]
    fn zero_forcing_steady_state_is_zero() {
        let m = build_recursion(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        let reduced = reduce_for_intervention(&m, 0, 0.0, &[0.0, 0.0]).unwrap();
        let lam = intervened_steady_state(&reduced).unwrap();
        assert!(lam.abs() < 1e-12);
    }

    #[test]
    fn reference_steady_state_matches_closed_form() {
        let (w, p, d) = reference();
        let m = build_recursion(&w, &p).unwrap();
        let reduced = reduce_for_intervention(&m, 0, 0.0, &d).unwrap();
        assert!(reduced.spectral_radius() < 1.0);
        let lam = intervened_steady_state(&reduced).unwrap();
        assert!(
            (lam - 3.083632396830369).abs() < 1e-10,
            "matrix route {lam}"
        );
    }

    #[test]
    fn random_configurations_agree_with_the_closed_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(4242);
        for _ in 0..100 {
            let k = rng.random_range(2..=8);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let p: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..=1.0)).collect();
            let d: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0)).collect();
            let c: f64 = rng.random_range(-3.0..3.0);
            let target = rng.random_range(0..k);

            let matrices = build_recursion(&w, &p).unwrap();
            let reduced = reduce_for_intervention(&matrices, target, c, &d).unwrap();
            let numeric = intervened_steady_state(&reduced).unwrap();

            let rows: Vec<Vec<f64>> = d.iter().map(|&v| vec![0.0, v]).collect();
            let info = InformativenessMatrix::new(rows, 0).unwrap();
            let mu = crate::analytics::belief_from_log_ratio(c, 2, 0).unwrap();
            let closed = lambda_inf_symmetric(&w, &p, &info, target, &mu)[1];

            assert!(
                (numeric - closed).abs() < 1e-10,
                "K={k} target={target}: matrix {numeric} vs closed form {closed}"
            );
        }
    }

    #[test]
    fn unstable_reduction_is_rejected() {
        // Hand-built reduced system at spectral radius 1.
        let m = build_recursion(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        let mut reduced = reduce_for_intervention(&m, 0, 0.0, &[0.3, 0.3]).unwrap();
        for r in 0..reduced.dim() {
            for c in 0..reduced.dim() {
                reduced
                    .r
                    .set(r, c, if c == 0 { 1.0 } else { 0.0 });
            }
        }
        assert!(matches!(
            intervened_steady_state(&reduced),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn asymmetric_growth_slope_is_effective_weighted_informativeness() {
        // Pre-intervention asymmetric recursion is scalar:
        // lbr_i = lbr_{i-1} + sum_k w_k p_k d_k. The matrix machinery is
        // for the symmetric protocol; this guards the simple slope.
        let (w, p, d) = reference();
        let slope: f64 = w
            .iter()
            .zip(&p)
            .zip(&d)
            .map(|((w, p), d)| w * p * d)
            .sum();
        assert!((slope - 0.173125).abs() < 1e-12);
    }
}
