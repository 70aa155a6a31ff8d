//! Alternating fictitious play on an integer-scaled copy of the matrix.
//!
//! Each round the row player best-responds to the column player's empirical
//! play, then the column player best-responds to the updated row play; ties go
//! to the lowest index. After `t` rounds the row average guarantees
//! `min_j (row payoffs)_j / t` and the column average concedes at most
//! `max_i (column payoffs)_i / t`, so the value is bracketed exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{SolveMethod, SolveReport};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct FictitiousPlay {
    /// Stop once the bracket half-width is at most this.
    pub tolerance: f64,
    pub max_iterations: u64,
}

impl Default for FictitiousPlay {
    fn default() -> Self {
        Self {
            tolerance: 1e-4,
            max_iterations: 1_000_000,
        }
    }
}

/// Best bound seen so far, stored as `sum / rounds` in scaled units.
#[derive(Clone, Copy)]
struct Bracket {
    sum: i128,
    rounds: u64,
}

impl Bracket {
    fn as_f64(self, scale: f64) -> f64 {
        self.sum as f64 / self.rounds as f64 / scale
    }

    fn exceeds(self, other: Bracket) -> bool {
        self.sum * other.rounds as i128 > other.sum * self.rounds as i128
    }
}

pub fn fictitious_play(matrix: &[Vec<Rational>], config: &FictitiousPlay) -> Result<SolveReport> {
    super::check_matrix(matrix)?;
    let rows = matrix.len();
    let cols = matrix[0].len();

    let scale_big = rational::lcm_of_denominators(matrix.iter().flatten());
    let scaled: Vec<Vec<i64>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| {
                    (a * Rational::from_integer(scale_big.clone()))
                        .to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::input("matrix entries too large for fictitious play"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let scale = scale_big
        .to_f64()
        .ok_or_else(|| Error::input("matrix denominators too large for fictitious play"))?;

    // Twice the tolerance in scaled units, exactly.
    let width_limit = Rational::from_float(2.0 * config.tolerance)
        .ok_or_else(|| Error::input("tolerance must be finite"))?
        * Rational::from_integer(scale_big.clone());

    let mut row_counts = vec![0u64; rows];
    let mut col_counts = vec![0u64; cols];
    // row_payoff[i] = Σ_j A[i][j]·col_counts[j]; col_payoff[j] = Σ_i row_counts[i]·A[i][j].
    let mut row_payoff = vec![0i128; rows];
    let mut col_payoff = vec![0i128; cols];

    let mut lower: Option<(Bracket, Vec<u64>)> = None;
    let mut upper: Option<(Bracket, Vec<u64>)> = None;

    for round in 1..=config.max_iterations {
        let i = argmax(&row_payoff);
        row_counts[i] += 1;
        for (c, a) in col_payoff.iter_mut().zip(&scaled[i]) {
            *c += *a as i128;
        }
        let j = argmin(&col_payoff);
        col_counts[j] += 1;
        for (r, row) in row_payoff.iter_mut().zip(&scaled) {
            *r += row[j] as i128;
        }

        let guarantee = Bracket {
            sum: col_payoff[j],
            rounds: round,
        };
        if lower.as_ref().is_none_or(|(b, _)| guarantee.exceeds(*b)) {
            lower = Some((guarantee, row_counts.clone()));
        }
        let concession = Bracket {
            sum: row_payoff[argmax(&row_payoff)],
            rounds: round,
        };
        if upper.as_ref().is_none_or(|(b, _)| b.exceeds(concession)) {
            upper = Some((concession, col_counts.clone()));
        }

        let (lo, hi) = (lower.as_ref().unwrap().0, upper.as_ref().unwrap().0);
        let near = hi.as_f64(scale) - lo.as_f64(scale) <= 2.0 * config.tolerance * (1.0 + 1e-9);
        if near && within(lo, hi, &width_limit) {
            let (lo, row_mix) = lower.unwrap();
            let (hi, col_mix) = upper.unwrap();
            let to_rational = |b: Bracket| {
                Rational::new(BigInt::from(b.sum), BigInt::from(b.rounds) * &scale_big)
            };
            let lower = to_rational(lo);
            let upper = to_rational(hi);
            let mixture = |counts: Vec<u64>| {
                let total: u64 = counts.iter().sum();
                counts
                    .into_iter()
                    .map(|c| Rational::new(c.into(), total.into()))
                    .collect()
            };
            return Ok(SolveReport {
                method: SolveMethod::FictitiousPlay,
                value: (&lower + &upper) / Rational::from_integer(2.into()),
                lower,
                upper,
                row_mixture: mixture(row_mix),
                col_mixture: mixture(col_mix),
                iterations: Some(round),
            });
        }
    }

    Err(Error::Convergence {
        iterations: config.max_iterations,
        lower: lower.map_or(f64::NAN, |(b, _)| b.as_f64(scale)),
        upper: upper.map_or(f64::NAN, |(b, _)| b.as_f64(scale)),
    })
}

/// `hi − lo ≤ limit` in exact arithmetic.
fn within(lo: Bracket, hi: Bracket, limit: &Rational) -> bool {
    let width = Rational::new(
        BigInt::from(hi.sum) * BigInt::from(lo.rounds)
            - BigInt::from(lo.sum) * BigInt::from(hi.rounds),
        BigInt::from(hi.rounds) * BigInt::from(lo.rounds),
    );
    &width <= limit
}

fn argmax(xs: &[i128]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate().skip(1) {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

fn argmin(xs: &[i128]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate().skip(1) {
        if *x < xs[best] {
            best = i;
        }
    }
    best
}
