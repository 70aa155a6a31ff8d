//! Grid discretization of `ACB(X_A, X_B, n)` as a finite matrix game.
//!
//! Each player's force is split into units of `1/m`; the pure strategies are
//! the nondecreasing integer compositions of `X·m` into `n` parts. The
//! resulting constant-sum game is solved exactly by simplex, or approximately
//! by fictitious play as an independent check on the value.

mod fictitious;
mod simplex;

use num_traits::{One, Zero};
use serde::Serialize;

pub use fictitious::{fictitious_play, FictitiousPlay};
pub use simplex::simplex;

use crate::error::{Error, Result};
use crate::game::{score, Allocation, GameSpec};
use crate::rational::{self, Rational};

/// All nondecreasing `n`-tuples of nonnegative integers summing to `total`,
/// in lexicographic order.
pub fn enumerate_grid_strategies(total: u64, n: usize) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, min: u64, left: u64, slots: usize, out: &mut Vec<Vec<u64>>) {
        if slots == 1 {
            if left >= min {
                prefix.push(left);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        // Every remaining slot takes at least `x`.
        let mut x = min;
        while x * slots as u64 <= left {
            prefix.push(x);
            extend(prefix, x, left - x, slots - 1, out);
            prefix.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&mut Vec::with_capacity(n), 0, total, n, &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMatrixGame {
    pub spec: GameSpec,
    pub grid: u64,
    /// A's grid strategies (rows).
    pub rows: Vec<Allocation>,
    /// B's grid strategies (columns).
    pub cols: Vec<Allocation>,
    /// Payoff to A.
    pub matrix: Vec<Vec<Rational>>,
}

fn grid_total(budget: &Rational, m: u64, who: &str) -> Result<u64> {
    let scaled = budget * Rational::from_integer(m.into());
    if !scaled.is_integer() {
        return Err(Error::input(format!(
            "budget X_{who} = {} times grid {m} is not an integer; choose m divisible by {}",
            rational::format(budget),
            budget.denom()
        )));
    }
    u64::try_from(scaled.to_integer())
        .map_err(|_| Error::input(format!("scaled budget X_{who}·m does not fit in 64 bits")))
}

fn grid_allocations(total: u64, m: u64, n: usize, budget: &Rational) -> Result<Vec<Allocation>> {
    enumerate_grid_strategies(total, n)
        .into_iter()
        .map(|parts| {
            let levels = parts
                .into_iter()
                .map(|k| Rational::new(k.into(), m.into()))
                .collect();
            Allocation::new(levels, budget.clone())
        })
        .collect()
}

/// The grid game with step `1/m`. Needs `X_A·m` and `X_B·m` integral.
pub fn build_matrix(spec: &GameSpec, m: u64) -> Result<DiscreteMatrixGame> {
    if m == 0 {
        return Err(Error::input("grid size must be at least 1"));
    }
    let n = spec.battlefields;
    let rows = grid_allocations(grid_total(&spec.budget_a, m, "A")?, m, n, &spec.budget_a)?;
    let cols = grid_allocations(grid_total(&spec.budget_b, m, "B")?, m, n, &spec.budget_b)?;
    let matrix = rows
        .iter()
        .map(|r| cols.iter().map(|c| score(r.levels(), c.levels())).collect())
        .collect();
    Ok(DiscreteMatrixGame {
        spec: spec.clone(),
        grid: m,
        rows,
        cols,
        matrix,
    })
}

impl DiscreteMatrixGame {
    /// Matrix as CSV: header of column labels, one row per A strategy.
    pub fn matrix_csv(&self) -> String {
        let label = |a: &Allocation| {
            a.levels()
                .iter()
                .map(rational::format)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::from("row");
        for c in &self.cols {
            out.push_str(&format!(",({})", label(c)));
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.matrix) {
            out.push_str(&format!("({})", label(r)));
            for v in row {
                out.push(',');
                out.push_str(&rational::format(v));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Simplex,
    FictitiousPlay,
}

/// Value and optimal (or approximately optimal) mixtures of a matrix game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub method: SolveMethod,
    /// Exact for simplex; the midpoint of `[lower, upper]` for fictitious play.
    #[serde(with = "rational::serde_text")]
    pub value: Rational,
    /// The row mixture guarantees at least `lower`.
    #[serde(with = "rational::serde_text")]
    pub lower: Rational,
    /// The column mixture concedes at most `upper`.
    #[serde(with = "rational::serde_text")]
    pub upper: Rational,
    #[serde(with = "rational::serde_text_vec")]
    pub row_mixture: Vec<Rational>,
    #[serde(with = "rational::serde_text_vec")]
    pub col_mixture: Vec<Rational>,
    pub iterations: Option<u64>,
}

impl SolveReport {
    /// `min_j (p·A)_j ≥ lower` and `max_i (A·q)_i ≤ upper`, exactly, with
    /// both mixtures valid probability vectors.
    pub fn certifies(&self, matrix: &[Vec<Rational>]) -> bool {
        let valid = |mix: &[Rational], len: usize| {
            mix.len() == len
                && mix.iter().all(|x| x >= &Rational::zero())
                && mix.iter().sum::<Rational>().is_one()
        };
        let cols = matrix.first().map_or(0, Vec::len);
        if !valid(&self.row_mixture, matrix.len()) || !valid(&self.col_mixture, cols) {
            return false;
        }
        let row_guarantee = (0..cols)
            .map(|j| {
                matrix
                    .iter()
                    .zip(&self.row_mixture)
                    .map(|(row, p)| p * &row[j])
                    .sum::<Rational>()
            })
            .min();
        let col_concession = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.col_mixture)
                    .map(|(a, q)| a * q)
                    .sum::<Rational>()
            })
            .max();
        matches!((row_guarantee, col_concession), (Some(g), Some(c)) if g >= self.lower && c <= self.upper)
    }
}

fn check_matrix(matrix: &[Vec<Rational>]) -> Result<()> {
    let cols = matrix.first().map_or(0, Vec::len);
    if cols == 0 || matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::input("matrix must be nonempty and rectangular"));
    }
    Ok(())
}

/// Solves the zero-sum game with payoff `matrix` to the (maximizing) row player.
pub fn solve_matrix(matrix: &[Vec<Rational>], method: SolveMethod) -> Result<SolveReport> {
    check_matrix(matrix)?;
    match method {
        SolveMethod::Simplex => simplex(matrix),
        SolveMethod::FictitiousPlay => fictitious_play(matrix, &FictitiousPlay::default()),
    }
}

pub fn solve_zero_sum(game: &DiscreteMatrixGame, method: SolveMethod) -> Result<SolveReport> {
    solve_matrix(&game.matrix, method)
}

/// Exact value of the grid game with step `1/m`.
pub fn discrete_value(spec: &GameSpec, m: u64) -> Result<Rational> {
    Ok(solve_zero_sum(&build_matrix(spec, m)?, SolveMethod::Simplex)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn game(a: Rational, b: Rational, n: usize) -> GameSpec {
        GameSpec::new(a, b, n).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_grid_strategies(6, 3),
            vec![
                vec![0, 0, 6],
                vec![0, 1, 5],
                vec![0, 2, 4],
                vec![0, 3, 3],
                vec![1, 1, 4],
                vec![1, 2, 3],
                vec![2, 2, 2],
            ]
        );
        assert_eq!(
            enumerate_grid_strategies(2, 2),
            vec![vec![0, 2], vec![1, 1]]
        );
        assert_eq!(enumerate_grid_strategies(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(enumerate_grid_strategies(5, 1), vec![vec![5]]);
        assert!(enumerate_grid_strategies(3, 0).is_empty());
    }

    #[test]
    fn enumeration_counts_partitions() {
        // Partitions of N into at most 3 parts: round((N+3)²/12).
        for total in 0..40u64 {
            let expected = ((total + 3).pow(2) + 6) / 12;
            assert_eq!(
                enumerate_grid_strategies(total, 3).len() as u64,
                expected,
                "{total}"
            );
        }
    }

    #[test]
    fn matrix_examples() {
        let g = build_matrix(&game(int(1), int(1), 2), 2).unwrap();
        assert_eq!(g.matrix, vec![vec![ratio(1, 2); 2]; 2]);

        let g = build_matrix(&game(int(1), int(1), 3), 3).unwrap();
        let levels: Vec<Vec<Rational>> = g.rows.iter().map(|r| r.levels().to_vec()).collect();
        assert_eq!(
            levels,
            vec![
                vec![int(0), int(0), int(1)],
                vec![int(0), ratio(1, 3), ratio(2, 3)],
                vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)],
            ]
        );
        assert_eq!(g.rows, g.cols);

        let g = build_matrix(&game(int(1), ratio(2, 3), 3), 3).unwrap();
        let levels: Vec<Vec<Rational>> = g.cols.iter().map(|c| c.levels().to_vec()).collect();
        assert_eq!(
            levels,
            vec![
                vec![int(0), int(0), ratio(2, 3)],
                vec![int(0), ratio(1, 3), ratio(1, 3)]
            ]
        );
    }

    #[test]
    fn non_integral_budgets_are_rejected() {
        let err = build_matrix(&game(int(1), ratio(2, 3), 3), 4).unwrap_err();
        assert!(err.to_string().contains("divisible by 3"), "{err}");
        assert!(build_matrix(&game(int(1), int(1), 3), 0).is_err());
    }

    #[test]
    fn matching_pennies() {
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let r = solve_matrix(&m, SolveMethod::Simplex).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        assert_eq!(r.row_mixture, vec![ratio(1, 2); 2]);
        assert_eq!(r.col_mixture, vec![ratio(1, 2); 2]);
        assert!(r.certifies(&m));

        let fp = solve_matrix(&m, SolveMethod::FictitiousPlay).unwrap();
        assert!((rational::to_f64(&fp.value) - 0.5).abs() <= 1e-4);
        assert!(fp.certifies(&m));
    }

    #[test]
    fn rejects_ragged_or_empty() {
        assert!(solve_matrix(&[], SolveMethod::Simplex).is_err());
        assert!(solve_matrix(&[vec![int(1)], vec![]], SolveMethod::Simplex).is_err());
    }

    #[test]
    fn discrete_value_examples() {
        assert_eq!(
            discrete_value(&game(int(1), int(1), 3), 6).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            discrete_value(&game(int(1), ratio(1, 2), 2), 6).unwrap(),
            int(1)
        );
        assert_eq!(
            discrete_value(&game(int(1), int(1), 2), 4).unwrap(),
            ratio(1, 2)
        );
    }
}
