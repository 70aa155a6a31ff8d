//! The game model: feasible allocations, finite mixed strategies and the
//! tie-splitting payoff rule.
//!
//! Each of the `n` battlefields is worth `1/n`. The higher allocation takes the
//! battlefield, equal allocations split it. Allocations are nondecreasing across
//! battlefields and spend the owner's budget exactly. Every payoff is computed
//! in exact rational arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `ACB(X_A, X_B, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub budget_a: Rational,
    pub budget_b: Rational,
    pub battlefields: usize,
}

impl GameSpec {
    pub fn new(budget_a: Rational, budget_b: Rational, battlefields: usize) -> Result<Self> {
        if battlefields == 0 {
            return Err(Error::input("a game needs at least one battlefield"));
        }
        if budget_a.is_negative() || budget_b.is_negative() {
            return Err(Error::input("budgets must be nonnegative"));
        }
        Ok(Self {
            budget_a,
            budget_b,
            battlefields,
        })
    }

    /// The game with the roles of the players exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            budget_a: self.budget_b.clone(),
            budget_b: self.budget_a.clone(),
            battlefields: self.battlefields,
        }
    }
}

/// True iff `levels` is nonnegative, nondecreasing and sums exactly to `budget`.
pub fn feasible(levels: &[Rational], budget: &Rational, n: usize) -> Result<bool> {
    if levels.len() != n {
        return Err(Error::input(format!(
            "allocation has {} levels but the game has {n} battlefields",
            levels.len()
        )));
    }
    Ok(is_feasible(levels, budget))
}

fn is_feasible(levels: &[Rational], budget: &Rational) -> bool {
    let nonnegative = levels.first().is_none_or(rational::is_nonnegative);
    let sorted = levels.windows(2).all(|w| w[0] <= w[1]);
    let total: Rational = levels.iter().sum();
    nonnegative && sorted && &total == budget
}

/// A feasible pure strategy for a player with budget `owner_budget`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    levels: Vec<Rational>,
    owner_budget: Rational,
}

impl Allocation {
    pub fn new(levels: Vec<Rational>, owner_budget: Rational) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("an allocation needs at least one battlefield"));
        }
        if !is_feasible(&levels, &owner_budget) {
            return Err(Error::input(format!(
                "infeasible allocation ({}) for budget {}",
                levels
                    .iter()
                    .map(rational::format)
                    .collect::<Vec<_>>()
                    .join(", "),
                rational::format(&owner_budget)
            )));
        }
        Ok(Self {
            levels,
            owner_budget,
        })
    }

    /// Builds an allocation whose budget is the sum of `levels`.
    pub fn from_levels(levels: Vec<Rational>) -> Result<Self> {
        let budget = levels.iter().sum();
        Self::new(levels, budget)
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn owner_budget(&self) -> &Rational {
        &self.owner_budget
    }

    pub fn battlefields(&self) -> usize {
        self.levels.len()
    }
}

/// Twice the number of battlefields won by `x` against `y` (a tie counts once).
pub(crate) fn half_wins(x: &[Rational], y: &[Rational]) -> u64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| match a.cmp(b) {
            Ordering::Greater => 2,
            Ordering::Equal => 1,
            Ordering::Less => 0,
        })
        .sum()
}

/// `(1/n) Σ_j s(x_j − y_j)` for raw level vectors of equal length.
pub fn score(x: &[Rational], y: &[Rational]) -> Rational {
    debug_assert_eq!(x.len(), y.len());
    Rational::new(half_wins(x, y).into(), (2 * x.len() as u64).into())
}

/// Payoff to player A when A plays `a` and B plays `b`.
pub fn payoff_pure(a: &Allocation, b: &Allocation, spec: &GameSpec) -> Result<Rational> {
    check_side(a, &spec.budget_a, spec.battlefields, "A")?;
    check_side(b, &spec.budget_b, spec.battlefields, "B")?;
    Ok(score(&a.levels, &b.levels))
}

fn check_side(x: &Allocation, budget: &Rational, n: usize, who: &str) -> Result<()> {
    if x.battlefields() != n {
        return Err(Error::input(format!(
            "player {who} allocation has {} battlefields, game has {n}",
            x.battlefields()
        )));
    }
    if x.owner_budget() != budget {
        return Err(Error::input(format!(
            "player {who} allocation spends {} but the budget is {}",
            rational::format(x.owner_budget()),
            rational::format(budget)
        )));
    }
    Ok(())
}

/// A distribution over finitely many allocations with exact probabilities.
///
/// Atoms are kept in canonical form: duplicates merged and sorted by level
/// vector, so two strategies are equal iff they describe the same distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMixedStrategy {
    atoms: Vec<(Allocation, Rational)>,
}

impl FiniteMixedStrategy {
    pub fn new(atoms: Vec<(Allocation, Rational)>) -> Result<Self> {
        let Some((first, _)) = atoms.first() else {
            return Err(Error::input("a mixed strategy needs at least one atom"));
        };
        let budget = first.owner_budget().clone();
        let n = first.battlefields();

        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (alloc, prob) in atoms {
            if !prob.is_positive() {
                return Err(Error::input(format!(
                    "atom probabilities must be positive, got {}",
                    rational::format(&prob)
                )));
            }
            if alloc.battlefields() != n || alloc.owner_budget() != &budget {
                return Err(Error::input(
                    "all atoms must share the same budget and number of battlefields",
                ));
            }
            total += &prob;
            *merged.entry(alloc.levels).or_insert_with(Rational::zero) += prob;
        }
        if !total.is_one() {
            return Err(Error::input(format!(
                "atom probabilities sum to {}, not 1",
                rational::format(&total)
            )));
        }

        let atoms = merged
            .into_iter()
            .map(|(levels, p)| {
                (
                    Allocation {
                        levels,
                        owner_budget: budget.clone(),
                    },
                    p,
                )
            })
            .collect();
        Ok(Self { atoms })
    }

    pub fn pure(alloc: Allocation) -> Self {
        Self {
            atoms: vec![(alloc, Rational::one())],
        }
    }

    /// Equal weight on each allocation (duplicates merge).
    pub fn uniform(allocs: Vec<Allocation>) -> Result<Self> {
        let weight = Rational::new(1.into(), allocs.len().max(1).into());
        Self::new(allocs.into_iter().map(|a| (a, weight.clone())).collect())
    }

    pub fn atoms(&self) -> &[(Allocation, Rational)] {
        &self.atoms
    }

    pub fn budget(&self) -> &Rational {
        self.atoms[0].0.owner_budget()
    }

    pub fn battlefields(&self) -> usize {
        self.atoms[0].0.battlefields()
    }
}

/// Expected payoff of the pure levels `x` against every atom of `q`.
pub fn payoff_against(x: &[Rational], q: &FiniteMixedStrategy) -> Rational {
    q.atoms()
        .iter()
        .map(|(atom, p)| p * score(x, atom.levels()))
        .sum()
}

/// Payoff to player A under independent play of `pa` and `pb`.
pub fn payoff_mixed(
    pa: &FiniteMixedStrategy,
    pb: &FiniteMixedStrategy,
    spec: &GameSpec,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for (a, p) in pa.atoms() {
        check_side(a, &spec.budget_a, spec.battlefields, "A")?;
        for (b, q) in pb.atoms() {
            check_side(b, &spec.budget_b, spec.battlefields, "B")?;
            total += p * q * score(a.levels(), b.levels());
        }
    }
    Ok(total)
}

#[derive(Serialize, Deserialize)]
struct AtomWire {
    #[serde(with = "rational::serde_text_vec")]
    alloc: Vec<Rational>,
    #[serde(with = "rational::serde_text")]
    prob: Rational,
}

#[derive(Serialize, Deserialize)]
struct StrategyWire {
    #[serde(with = "rational::serde_text")]
    budget: Rational,
    n: usize,
    atoms: Vec<AtomWire>,
}

impl Serialize for FiniteMixedStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StrategyWire {
            budget: self.budget().clone(),
            n: self.battlefields(),
            atoms: self
                .atoms
                .iter()
                .map(|(a, p)| AtomWire {
                    alloc: a.levels.clone(),
                    prob: p.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMixedStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = StrategyWire::deserialize(d)?;
        Self::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<StrategyWire> for FiniteMixedStrategy {
    type Error = Error;

    fn try_from(wire: StrategyWire) -> Result<Self> {
        let atoms = wire
            .atoms
            .into_iter()
            .map(|atom| {
                if atom.alloc.len() != wire.n {
                    return Err(Error::input(format!(
                        "atom has {} levels but n = {}",
                        atom.alloc.len(),
                        wire.n
                    )));
                }
                Ok((Allocation::new(atom.alloc, wire.budget.clone())?, atom.prob))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }
}

impl FiniteMixedStrategy {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("strategy serialization cannot fail")
    }
}
