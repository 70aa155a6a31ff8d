//! Brute-force grid oracle and random instances shared by the integration tests.
#![allow(dead_code)]

use acb_core::rational::ratio;
use acb_core::{Allocation, FiniteMixedStrategy, Rational};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

/// A best-response instance with every level an integer multiple of `1/denom`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub denom: i64,
    /// Budget of the responding player, in units of `1/denom`.
    pub budget: i64,
    pub opponent_budget: i64,
    /// Opponent atoms in units of `1/denom`, with positive integer weights.
    pub atoms: Vec<(Vec<i64>, i64)>,
}

fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

/// Random nondecreasing composition of `total` into `n` parts.
fn composition(rng: &mut SplitMix64, total: i64, n: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = (0..n - 1)
        .map(|_| below(rng, total as u64 + 1) as i64)
        .collect();
    cuts.push(0);
    cuts.push(total);
    cuts.sort();
    let mut parts: Vec<i64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    parts.sort();
    parts
}

impl Instance {
    /// `n ≤ 3`, up to 5 atoms, a common level denominator `≤ 24` and budgets up to `3/2`.
    pub fn random(seed: u64) -> Self {
        let n = 1 + (seed % 3) as usize;
        Self::random_with(seed, n)
    }

    pub fn random_with(seed: u64, n: usize) -> Self {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let denom = 1 + below(&mut rng, 24) as i64;
        let budget = below(&mut rng, (3 * denom / 2 + 1) as u64) as i64;
        let opponent_budget = below(&mut rng, (3 * denom / 2 + 1) as u64) as i64;
        let count = 1 + below(&mut rng, 5) as usize;
        let atoms = (0..count)
            .map(|_| {
                (
                    composition(&mut rng, opponent_budget, n),
                    1 + below(&mut rng, 6) as i64,
                )
            })
            .collect();
        Self {
            n,
            denom,
            budget,
            opponent_budget,
            atoms,
        }
    }

    pub fn budget(&self) -> Rational {
        ratio(self.budget, self.denom)
    }

    pub fn opponent(&self) -> FiniteMixedStrategy {
        let total: i64 = self.atoms.iter().map(|(_, w)| w).sum();
        let atoms = self
            .atoms
            .iter()
            .map(|(levels, w)| {
                let alloc = Allocation::new(
                    levels.iter().map(|&l| ratio(l, self.denom)).collect(),
                    ratio(self.opponent_budget, self.denom),
                )
                .unwrap();
                (alloc, ratio(*w, total))
            })
            .collect();
        FiniteMixedStrategy::new(atoms).unwrap()
    }

    /// Best payoff over all feasible allocations with levels in `(1/(refine·denom))ℤ`,
    /// computed in integers.
    pub fn grid_max(&self, refine: i64) -> Rational {
        let total = self.budget * refine;
        let atoms: Vec<(Vec<i64>, i64)> = self
            .atoms
            .iter()
            .map(|(l, w)| (l.iter().map(|x| x * refine).collect(), *w))
            .collect();
        let weight: i64 = atoms.iter().map(|(_, w)| w).sum();
        let mut best = 0i64;
        let mut x = Vec::with_capacity(self.n);
        for_each_allocation(self.n, total, 0, &mut x, &mut |x| {
            let score: i64 = atoms
                .iter()
                .map(|(y, w)| {
                    w * x
                        .iter()
                        .zip(y)
                        .map(|(a, b)| match a.cmp(b) {
                            std::cmp::Ordering::Greater => 2,
                            std::cmp::Ordering::Equal => 1,
                            std::cmp::Ordering::Less => 0,
                        })
                        .sum::<i64>()
                })
                .sum();
            best = best.max(score);
        });
        ratio(best, 2 * self.n as i64 * weight)
    }
}

/// Calls `f` on every nondecreasing vector of `n` integers `≥ min` summing to `total`.
pub fn for_each_allocation(
    n: usize,
    total: i64,
    min: i64,
    x: &mut Vec<i64>,
    f: &mut impl FnMut(&[i64]),
) {
    if n == 1 {
        if total >= min {
            x.push(total);
            f(x);
            x.pop();
        }
        return;
    }
    let mut v = min;
    while v * n as i64 <= total {
        x.push(v);
        for_each_allocation(n - 1, total - v, v, x, f);
        x.pop();
        v += 1;
    }
}
