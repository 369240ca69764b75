//! Minimal dense linear algebra for the steady-state oracle: the systems
//! involved are (K+1) x (K+1) with K around a dozen, so a hand-rolled LU
//! with partial pivoting and a power iteration cover everything needed.

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Copy without one row and one column.
    pub fn minor(&self, drop_row: usize, drop_col: usize) -> DMat {
        let mut out = DMat::zeros(self.rows - 1, self.cols - 1);
        let mut ri = 0;
        for r in 0..self.rows {
            if r == drop_row {
                continue;
            }
            let mut ci = 0;
            for c in 0..self.cols {
                if c == drop_col {
                    continue;
                }
                out.set(ri, ci, self.at(r, c));
                ci += 1;
            }
            ri += 1;
        }
        out
    }

    /// Copy without one row.
    pub fn drop_row(&self, drop: usize) -> DMat {
        let mut out = DMat::zeros(self.rows - 1, self.cols);
        let mut ri = 0;
        for r in 0..self.rows {
            if r == drop {
                continue;
            }
            for c in 0..self.cols {
                out.set(ri, c, self.at(r, c));
            }
            ri += 1;
        }
        out
    }

    pub fn transpose(&self) -> DMat {
        let mut out = DMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c));
            }
        }
        out
    }
}

/// Solve `A x = b` by LU with partial pivoting. Also returns the ratio of
/// the largest to the smallest pivot magnitude, a cheap conditioning proxy
/// used to reject nearly singular systems.
pub(crate) fn solve(a: &DMat, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = a.rows();
    debug_assert_eq!(a.cols(), n);
    debug_assert_eq!(b.len(), n);
    let mut lu = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    let mut max_pivot = 0.0f64;
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                lu.at(r1, col)
                    .abs()
                    .partial_cmp(&lu.at(r2, col).abs())
                    .expect("pivot comparison on finite entries")
            })
            .expect("non-empty pivot scan");
        let pivot = lu.at(pivot_row, col);
        if pivot == 0.0 {
            return Err(Error::DegenerateConfiguration(
                "singular linear system in the steady-state solve".into(),
            ));
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = lu.at(col, c);
                lu.set(col, c, lu.at(pivot_row, c));
                lu.set(pivot_row, c, tmp);
            }
            x.swap(col, pivot_row);
        }
        max_pivot = max_pivot.max(pivot.abs());
        min_pivot = min_pivot.min(pivot.abs());
        for r in (col + 1)..n {
            let factor = lu.at(r, col) / lu.at(col, col);
            if factor != 0.0 {
                for c in col..n {
                    lu.set(r, c, lu.at(r, c) - factor * lu.at(col, c));
                }
                x[r] -= factor * x[col];
            }
        }
    }

    for r in (0..n).rev() {
        let tail: f64 = lu.row(r)[r + 1..]
            .iter()
            .zip(&x[r + 1..])
            .map(|(a, b)| a * b)
            .sum();
        x[r] = (x[r] - tail) / lu.at(r, r);
    }
    Ok((x, max_pivot / min_pivot))
}

/// Spectral radius of a nonnegative matrix by power iteration.
pub(crate) fn spectral_radius(m: &DMat, tol: f64, max_iter: usize) -> f64 {
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    let mut radius = 0.0;
    for _ in 0..max_iter {
        let w = m.mul_vec(&v);
        let norm: f64 = w.iter().map(|x| x.abs()).sum();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm; // with the 1-normalized nonnegative iterate, |Mv| estimates rho
        v = w.iter().map(|x| x / norm).collect();
        if (next - radius).abs() <= tol {
            return next;
        }
        radius = next;
    }
    radius
}

/// Normalized left Perron vector (stationary distribution) of a
/// row-stochastic matrix, by power iteration on the transpose.
pub(crate) fn left_perron_vector(m: &DMat, tol: f64, max_iter: usize) -> Vec<f64> {
    let mt = m.transpose();
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let w = mt.mul_vec(&v);
        let norm: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        v = next;
        if delta <= tol {
            break;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let mut a = DMat::zeros(2, 2);
        a.set(0, 0, 2.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(1, 1, 3.0);
        let (x, cond) = solve(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!(cond >= 1.0);
    }

    #[test]
    fn solve_rejects_singular() {
        let mut a = DMat::zeros(2, 2);
        a.set(0, 0, 1.0);
        a.set(0, 1, 2.0);
        a.set(1, 0, 2.0);
        a.set(1, 1, 4.0);
        assert!(solve(&a, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn power_iteration_finds_the_dominant_eigenvalue() {
        let mut a = DMat::zeros(2, 2);
        a.set(0, 0, 0.9);
        a.set(0, 1, 0.1);
        a.set(1, 0, 0.2);
        a.set(1, 1, 0.8);
        // row-stochastic: dominant eigenvalue 1
        assert!((spectral_radius(&a, 1e-12, 100_000) - 1.0).abs() < 1e-10);

        let mut b = DMat::zeros(2, 2);
        b.set(0, 0, 0.5);
        b.set(1, 1, 0.25);
        assert!((spectral_radius(&b, 1e-12, 100_000) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn left_perron_of_stochastic_matrix() {
        let mut a = DMat::zeros(2, 2);
        a.set(0, 0, 0.9);
        a.set(0, 1, 0.1);
        a.set(1, 0, 0.2);
        a.set(1, 1, 0.8);
        // stationary distribution of this chain is (2/3, 1/3)
        let pi = left_perron_vector(&a, 1e-14, 100_000);
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((pi[1] - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn minor_and_drop_row() {
        let mut a = DMat::zeros(3, 3);
        for r in 0..3 {
            for c in 0..3 {
                a.set(r, c, (r * 3 + c) as f64);
            }
        }
        let m = a.minor(0, 0);
        assert_eq!(m.row(0), &[4.0, 5.0]);
        assert_eq!(m.row(1), &[7.0, 8.0]);
        let d = a.drop_row(1);
        assert_eq!(d.row(1), &[6.0, 7.0, 8.0]);
    }
}
