//! Exact best response against a finite mixed strategy.
//!
//! Against an opponent with finitely many atoms, the payoff of an allocation
//! depends only on how each coordinate compares with the opponent's levels on
//! that battlefield. Per battlefield the line splits into cells: a singleton
//! at each critical level and the open gap above it. Payoff is constant on a
//! product of cells and separable across battlefields, so the supremum is the
//! best cell profile that still contains a feasible (nonnegative,
//! nondecreasing, budget-exact) allocation. Every such profile contains a
//! rational allocation, so the supremum is always attained.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{payoff_against, payoff_mixed, Allocation, FiniteMixedStrategy, GameSpec};
use crate::rational::{self, int, Rational};

/// How a coordinate relates to its battlefield's critical level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Exactly at the level.
    Tie,
    /// Strictly above the level and below the next one.
    Beat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    #[serde(with = "rational::serde_text")]
    pub level: Rational,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BestResponseResult {
    #[serde(with = "rational::serde_text")]
    pub sup_payoff: Rational,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Allocation,
    pub attained: bool,
    pub profile: Vec<ProfileEntry>,
}

fn serialize_witness<S: serde::Serializer>(w: &Allocation, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    w.levels()
        .iter()
        .map(rational::format)
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Per battlefield, the sorted distinct values of `{0} ∪ {atom levels}`.
pub fn critical_levels(q: &FiniteMixedStrategy) -> Vec<Vec<Rational>> {
    (0..q.battlefields())
        .map(|j| {
            let mut levels: Vec<Rational> = std::iter::once(Rational::zero())
                .chain(q.atoms().iter().map(|(a, _)| a.levels()[j].clone()))
                .collect();
            levels.sort();
            levels.dedup();
            levels
        })
        .collect()
}

/// One end of an interval; `strict` marks an open end.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bound {
    value: Rational,
    strict: bool,
}

impl Bound {
    fn closed(value: Rational) -> Self {
        Self {
            value,
            strict: false,
        }
    }

    fn open(value: Rational) -> Self {
        Self {
            value,
            strict: true,
        }
    }

    /// The tighter of two lower bounds.
    fn max_lower(self, other: &Bound) -> Bound {
        match self.value.cmp(&other.value) {
            Ordering::Less => other.clone(),
            Ordering::Greater => self,
            Ordering::Equal => Bound {
                value: self.value,
                strict: self.strict || other.strict,
            },
        }
    }

    /// The tighter of two upper bounds.
    fn min_upper(self, other: &Bound) -> Bound {
        match self.value.cmp(&other.value) {
            Ordering::Greater => other.clone(),
            Ordering::Less => self,
            Ordering::Equal => Bound {
                value: self.value,
                strict: self.strict || other.strict,
            },
        }
    }
}

/// Whether some real lies between a lower and an upper bound.
fn admits(lower: &Bound, upper: &Bound) -> bool {
    match lower.value.cmp(&upper.value) {
        Ordering::Less => true,
        Ordering::Equal => !lower.strict && !upper.strict,
        Ordering::Greater => false,
    }
}

struct Cell {
    lower: Bound,
    upper: Bound,
    entry: ProfileEntry,
    /// Expected number of half-battlefields won here, times 2: `Σ p · 2s(x − a)`.
    score: Rational,
}

/// Cells of one battlefield in increasing order: `{c₀}, (c₀, c₁), {c₁}, …, {c_m}, (c_m, budget]`.
fn battlefield_cells(
    levels: &[Rational],
    atoms: &[(Rational, Rational)],
    budget: &Rational,
) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(2 * levels.len());
    for (i, c) in levels.iter().enumerate() {
        let tie_score = atoms
            .iter()
            .map(|(a, p)| match c.cmp(a) {
                Ordering::Greater => p * int(2),
                Ordering::Equal => p.clone(),
                Ordering::Less => Rational::zero(),
            })
            .sum();
        cells.push(Cell {
            lower: Bound::closed(c.clone()),
            upper: Bound::closed(c.clone()),
            entry: ProfileEntry {
                level: c.clone(),
                relation: Relation::Tie,
            },
            score: tie_score,
        });

        let upper = match levels.get(i + 1) {
            Some(next) => Bound::open(next.clone()),
            None => Bound::closed(budget.clone()),
        };
        let beat_score = atoms
            .iter()
            .filter(|(a, _)| a <= c)
            .map(|(_, p)| p * int(2))
            .sum();
        cells.push(Cell {
            lower: Bound::open(c.clone()),
            upper,
            entry: ProfileEntry {
                level: c.clone(),
                relation: Relation::Beat,
            },
            score: beat_score,
        });
    }
    cells
}

/// Finds a budget-exact nondecreasing point in the product of `cells`, if any.
fn feasible_point(cells: &[&Cell], budget: &Rational) -> Option<Vec<Rational>> {
    let n = cells.len();
    // Componentwise infimum and supremum of the nondecreasing points in the box.
    let mut low: Vec<Bound> = Vec::with_capacity(n);
    for cell in cells {
        let next = match low.last() {
            Some(prev) => cell.lower.clone().max_lower(prev),
            None => cell.lower.clone(),
        };
        low.push(next);
    }
    let mut high: Vec<Bound> = vec![Bound::closed(Rational::zero()); n];
    for j in (0..n).rev() {
        high[j] = if j + 1 < n {
            cells[j].upper.clone().min_upper(&high[j + 1])
        } else {
            cells[j].upper.clone()
        };
    }
    if !(0..n).all(|j| admits(&low[j], &high[j])) {
        return None;
    }

    let inf: Rational = low.iter().map(|b| &b.value).sum();
    let sup: Rational = high.iter().map(|b| &b.value).sum();
    let inf_attained = low.iter().all(|b| !b.strict);
    let sup_attained = high.iter().all(|b| !b.strict);
    let reachable = (&inf < budget && budget < &sup)
        || (budget == &inf && inf_attained)
        || (budget == &sup && sup_attained);
    if !reachable {
        return None;
    }

    let low: Vec<Rational> = low.into_iter().map(|b| b.value).collect();
    let high: Vec<Rational> = high.into_iter().map(|b| b.value).collect();
    if budget == &inf && inf_attained {
        return Some(low);
    }
    if budget == &sup && sup_attained {
        return Some(high);
    }
    // The midpoint of the two extreme points satisfies every open bound
    // strictly; slide from it toward the extreme on the budget's side.
    let two = int(2);
    let mid: Vec<Rational> = low.iter().zip(&high).map(|(l, h)| (l + h) / &two).collect();
    let mid_sum: Rational = mid.iter().sum();
    let (target, target_sum) = match budget.cmp(&mid_sum) {
        Ordering::Equal => return Some(mid),
        Ordering::Less => (&low, &inf),
        Ordering::Greater => (&high, &sup),
    };
    let weight = (budget - target_sum) / (&mid_sum - target_sum);
    Some(
        mid.iter()
            .zip(target)
            .map(|(m, e)| &weight * m + (Rational::one() - &weight) * e)
            .collect(),
    )
}

struct Search<'a> {
    cells: &'a [Vec<Cell>],
    best_remaining: Vec<Rational>,
    budget: &'a Rational,
    chosen: Vec<usize>,
    best: Option<(Rational, Vec<usize>, Vec<Rational>)>,
}

impl Search<'_> {
    fn run(&mut self, j: usize, score: Rational, floor: Option<&Bound>, floor_sum: &Rational) {
        let n = self.cells.len();
        if let Some((best, _, _)) = &self.best {
            if &(&score + &self.best_remaining[j]) <= best {
                return;
            }
        }
        if j == n {
            let picked: Vec<&Cell> = self
                .chosen
                .iter()
                .enumerate()
                .map(|(k, &c)| &self.cells[k][c])
                .collect();
            if let Some(point) = feasible_point(&picked, self.budget) {
                self.best = Some((score, self.chosen.clone(), point));
            }
            return;
        }
        for (idx, cell) in self.cells[j].iter().enumerate() {
            let low = match floor {
                Some(prev) => cell.lower.clone().max_lower(prev),
                None => cell.lower.clone(),
            };
            if !admits(&low, &cell.upper) {
                // Cells are increasing, so later cells on this battlefield may
                // still fit; only skip this one.
                continue;
            }
            let low_sum = floor_sum + &low.value;
            if &low_sum > self.budget {
                // Every later cell starts higher.
                break;
            }
            self.chosen.push(idx);
            self.run(j + 1, &score + &cell.score, Some(&low), &low_sum);
            self.chosen.pop();
        }
    }
}

/// Exact supremum of `Σ_i p_i · payoff(x, atom_i)` over feasible allocations
/// `x` with the given budget, with a witness allocation attaining it.
///
/// Ties are resolved toward the lexicographically smallest cell profile.
pub fn best_response(q: &FiniteMixedStrategy, budget: &Rational) -> Result<BestResponseResult> {
    if budget.is_negative() {
        return Err(Error::input("budget must be nonnegative"));
    }
    let n = q.battlefields();
    let levels = critical_levels(q);
    let cells: Vec<Vec<Cell>> = (0..n)
        .map(|j| {
            let atoms: Vec<(Rational, Rational)> = q
                .atoms()
                .iter()
                .map(|(a, p)| (a.levels()[j].clone(), p.clone()))
                .collect();
            battlefield_cells(&levels[j], &atoms, budget)
        })
        .collect();

    let mut best_remaining = vec![Rational::zero(); n + 1];
    for j in (0..n).rev() {
        let top = cells[j]
            .iter()
            .map(|c| &c.score)
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero);
        best_remaining[j] = &best_remaining[j + 1] + top;
    }

    let mut search = Search {
        cells: &cells,
        best_remaining,
        budget,
        chosen: Vec::with_capacity(n),
        best: None,
    };
    search.run(0, Rational::zero(), None, &Rational::zero());
    let (score, chosen, point) = search
        .best
        .ok_or_else(|| Error::input("no feasible allocation exists for this budget"))?;

    let sup_payoff = score / int(2 * n as i64);
    let witness = Allocation::new(point, budget.clone())?;
    let attained = payoff_against(witness.levels(), q) == sup_payoff;
    let profile = chosen
        .iter()
        .enumerate()
        .map(|(j, &c)| cells[j][c].entry.clone())
        .collect();
    Ok(BestResponseResult {
        sup_payoff,
        witness,
        attained,
        profile,
    })
}

/// How much each player gains by deviating: `(A's best response − A's payoff,
/// B's best response − B's payoff)`. `(0, 0)` certifies a Nash equilibrium.
pub fn exploitability(
    pa: &FiniteMixedStrategy,
    pb: &FiniteMixedStrategy,
    spec: &GameSpec,
) -> Result<(Rational, Rational)> {
    if pa.battlefields() != spec.battlefields || pb.battlefields() != spec.battlefields {
        return Err(Error::input("strategy dimensions do not match the game"));
    }
    let payoff_a = payoff_mixed(pa, pb, spec)?;
    let payoff_b = Rational::one() - &payoff_a;
    let gain_a = best_response(pb, &spec.budget_a)?.sup_payoff - payoff_a;
    let gain_b = best_response(pa, &spec.budget_b)?.sup_payoff - payoff_b;
    Ok((gain_a, gain_b))
}
