//! Exact value of a matrix game by the tableau simplex method with Bland's rule.
//!
//! With every entry shifted to be positive, the column player's problem is
//! `max Σ y  s.t.  K y ≤ 1, y ≥ 0`, whose optimum is `1 / value(K)`. The
//! column mixture is `y` rescaled, the row mixture comes from the duals of the
//! slack columns.

use num_traits::{One, Signed, Zero};

use super::SolveMethod;
use super::SolveReport;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn simplex(matrix: &[Vec<Rational>]) -> Result<SolveReport> {
    super::check_matrix(matrix)?;
    let rows = matrix.len();
    let cols = matrix[0].len();
    let min = matrix
        .iter()
        .flatten()
        .min()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let shift = Rational::one() - min;

    // Columns: y_0..y_{cols-1}, slack_0..slack_{rows-1}, rhs.
    let width = cols + rows + 1;
    let mut tableau: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t = vec![Rational::zero(); width];
            for (j, a) in row.iter().enumerate() {
                t[j] = a + &shift;
            }
            t[cols + i] = Rational::one();
            t[width - 1] = Rational::one();
            t
        })
        .collect();
    // Reduced costs; the last entry tracks minus the objective value.
    let mut reduced = vec![Rational::zero(); width];
    for r in reduced.iter_mut().take(cols) {
        *r = Rational::one();
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let mut pivots = 0u64;
    while let Some(enter) = (0..width - 1).find(|&j| reduced[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !tableau[i][enter].is_positive() {
                continue;
            }
            let ratio = &tableau[i][width - 1] / &tableau[i][enter];
            let better = match &leave {
                None => true,
                Some((best_row, best)) => {
                    ratio < *best || (ratio == *best && basis[i] < basis[*best_row])
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Err(Error::input(
                "value LP is unbounded; the matrix cannot be a game matrix",
            ));
        };

        let pivot = tableau[pivot_row][enter].clone();
        for x in tableau[pivot_row].iter_mut() {
            *x /= &pivot;
        }
        let pivot_values = tableau[pivot_row].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == pivot_row || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_values) {
                *x -= &factor * p;
            }
        }
        let factor = reduced[enter].clone();
        for (x, p) in reduced.iter_mut().zip(&pivot_values) {
            *x -= &factor * p;
        }
        basis[pivot_row] = enter;
        pivots += 1;
    }

    let mut y = vec![Rational::zero(); cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = tableau[i][width - 1].clone();
        }
    }
    let total: Rational = y.iter().sum();
    if !total.is_positive() {
        return Err(Error::input("degenerate value LP"));
    }
    let col_mixture: Vec<Rational> = y.iter().map(|v| v / &total).collect();
    let row_mixture: Vec<Rational> = (0..rows).map(|i| -&reduced[cols + i] / &total).collect();
    let value = Rational::one() / &total - shift;

    let report = SolveReport {
        method: SolveMethod::Simplex,
        lower: value.clone(),
        upper: value.clone(),
        value,
        row_mixture,
        col_mixture,
        iterations: Some(pivots),
    };
    debug_assert!(report.certifies(matrix));
    Ok(report)
}
