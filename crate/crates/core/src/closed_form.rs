//! Closed-form equilibrium values and strategies for `ACB(1, t, n)`, `n ∈ {2, 3}`.
//!
//! Budgets are normalized to `X_A = 1 ≥ X_B = t`. `W_n(t)` is player A's
//! equilibrium payoff.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::analytic::TriangleFamilySpec;
use crate::error::{Error, Result};
use crate::game::{Allocation, FiniteMixedStrategy, GameSpec};
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Known,
    UpperBound,
    LowerBound,
    Unknown,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Known => "Known",
            ValueKind::UpperBound => "UpperBound",
            ValueKind::LowerBound => "LowerBound",
            ValueKind::Unknown => "Unknown",
        })
    }
}

/// What is established about `W_n(t)` at one `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueAnswer {
    pub kind: ValueKind,
    #[serde(serialize_with = "rational::serde_text_opt::serialize")]
    pub value: Option<Rational>,
}

impl ValueAnswer {
    fn known(value: Rational) -> Self {
        Self {
            kind: ValueKind::Known,
            value: Some(value),
        }
    }

    fn unknown() -> Self {
        Self {
            kind: ValueKind::Unknown,
            value: None,
        }
    }
}

/// An explicit equilibrium pair for `ACB(1, t, n)` and the value it certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumConstruction {
    pub t: Rational,
    pub game: GameSpec,
    /// Index of the two-battlefield family the pair belongs to.
    pub k: Option<u64>,
    pub epsilon: Option<Rational>,
    pub pa: FiniteMixedStrategy,
    pub pb: FiniteMixedStrategy,
    /// Player A's payoff under the pair.
    pub value: Rational,
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_negative() || t > &Rational::one() {
        return Err(Error::input(format!(
            "t must lie in [0, 1], got {}",
            rational::format(t)
        )));
    }
    Ok(())
}

fn levels(xs: Vec<Rational>, budget: &Rational) -> Result<Allocation> {
    Allocation::new(xs, budget.clone())
}

/// `k = floor(t / (2 − 2t))`, the index with `2k/(2k+1) ≤ t < (2k+2)/(2k+3)`.
/// Defined for `0 ≤ t < 1`.
pub fn w2_index(t: &Rational) -> Result<u64> {
    check_t(t)?;
    if t.is_one() {
        return Err(Error::input(
            "the two-battlefield family index is undefined at t = 1",
        ));
    }
    let k = rational::floor(&(t / (int(2) - int(2) * t)));
    k.to_u64()
        .ok_or_else(|| Error::input("t too close to 1 for a 64-bit family index"))
}

/// Open interval `((2k+1)t/2 − k, min(1 − t, tk − k + 1/2))` of admissible ε.
pub fn w2_epsilon_interval(t: &Rational, k: u64) -> (Rational, Rational) {
    let k = int(k as i64);
    let lo = (int(2) * &k + int(1)) * t / int(2) - &k;
    let hi = (int(1) - t).min(t * &k - &k + ratio(1, 2));
    (lo, hi)
}

/// `W₂(t)`: 1 below 2/3, `(k+2)/(2k+2)` on `[2k/(2k+1), (2k+2)/(2k+3))`, 1/2 at 1.
pub fn w2_value(t: &Rational) -> Result<Rational> {
    check_t(t)?;
    if t.is_one() {
        return Ok(ratio(1, 2));
    }
    let k = int(w2_index(t)? as i64);
    Ok((&k + int(2)) / (int(2) * &k + int(2)))
}

/// The equilibrium pair for `ACB(1, t, 2)`.
pub fn w2_equilibrium(t: &Rational) -> Result<EquilibriumConstruction> {
    check_t(t)?;
    let one = Rational::one();
    let game = GameSpec::new(one.clone(), t.clone(), 2)?;
    let value = w2_value(t)?;

    if t.is_one() {
        let half = levels(vec![ratio(1, 2), ratio(1, 2)], &one)?;
        return Ok(EquilibriumConstruction {
            t: t.clone(),
            game,
            k: None,
            epsilon: None,
            pa: FiniteMixedStrategy::pure(half.clone()),
            pb: FiniteMixedStrategy::pure(half),
            value,
        });
    }

    if t < &ratio(2, 3) {
        // A wins both battlefields outright.
        let pa = levels(vec![ratio(1, 3), ratio(2, 3)], &one)?;
        let pb = levels(vec![t / int(2), t / int(2)], t)?;
        return Ok(EquilibriumConstruction {
            t: t.clone(),
            game,
            k: Some(0),
            epsilon: None,
            pa: FiniteMixedStrategy::pure(pa),
            pb: FiniteMixedStrategy::pure(pb),
            value,
        });
    }

    let k = w2_index(t)?;
    let (lo, hi) = w2_epsilon_interval(t, k);
    let epsilon = (lo + hi) / int(2);
    let gap = &one - t;
    let mut a_atoms = Vec::new();
    let mut b_atoms = Vec::new();
    for j in 0..=k {
        let shift = int(j as i64) * &gap;
        let a_first = &epsilon + &shift;
        a_atoms.push(levels(vec![a_first.clone(), &one - &a_first], &one)?);
        b_atoms.push(levels(vec![shift.clone(), t - &shift], t)?);
    }
    Ok(EquilibriumConstruction {
        t: t.clone(),
        game,
        k: Some(k),
        epsilon: Some(epsilon),
        pa: FiniteMixedStrategy::uniform(a_atoms)?,
        pb: FiniteMixedStrategy::uniform(b_atoms)?,
        value,
    })
}

/// What is known about `W₃(t)`.
///
/// Interval endpoints follow the theorem statements exactly; `t = 18/31`,
/// `t = 3/5` and `t = 30/47` are not covered by any result and map to `Unknown`.
pub fn w3_value(t: &Rational) -> Result<ValueAnswer> {
    check_t(t)?;
    let answer = if t < &ratio(6, 11) {
        ValueAnswer::known(int(1))
    } else if t < &ratio(18, 31) {
        ValueAnswer::known(ratio(8, 9))
    } else if t > &ratio(3, 5) && t < &ratio(30, 47) {
        ValueAnswer::known(ratio(5, 6))
    } else if t == &ratio(2, 3) {
        ValueAnswer {
            kind: ValueKind::UpperBound,
            value: Some(ratio(4, 5)),
        }
    } else if t == &ratio(5, 6) {
        ValueAnswer {
            kind: ValueKind::LowerBound,
            value: Some(ratio(2, 3)),
        }
    } else if t.is_one() {
        ValueAnswer::known(ratio(1, 2))
    } else {
        ValueAnswer::unknown()
    };
    Ok(answer)
}

/// A three-battlefield equilibrium: an explicit finite pair, or (at `t = 1`)
/// the atomless triangle-family strategy played by both players.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum W3Equilibrium {
    Finite(EquilibriumConstruction),
    Triangle(TriangleFamilySpec),
}

/// The known equilibrium of `ACB(1, t, 3)`, if `t` lies in a covered range.
pub fn w3_equilibrium(t: &Rational) -> Result<Option<W3Equilibrium>> {
    check_t(t)?;
    if t.is_one() {
        return Ok(Some(W3Equilibrium::Triangle(TriangleFamilySpec::depth(0))));
    }
    let one = Rational::one();
    let game = GameSpec::new(one.clone(), t.clone(), 3)?;
    let third = t / int(3);
    let half = t / int(2);

    let construction = if t < &ratio(6, 11) {
        let pa = levels(vec![ratio(2, 11), ratio(3, 11), ratio(6, 11)], &one)?;
        let pb = levels(vec![third.clone(), third.clone(), third], t)?;
        EquilibriumConstruction {
            t: t.clone(),
            game,
            k: None,
            epsilon: None,
            pa: FiniteMixedStrategy::pure(pa),
            pb: FiniteMixedStrategy::pure(pb),
            value: int(1),
        }
    } else if t < &ratio(18, 31) {
        let eps = (&one - ratio(31, 18) * t) / int(4);
        let two_eps = int(2) * &eps;
        let pa = FiniteMixedStrategy::uniform(vec![
            levels(
                vec![
                    &third + &eps,
                    &half + &eps,
                    &one - ratio(5, 6) * t - &two_eps,
                ],
                &one,
            )?,
            levels(
                vec![&third + &eps, &one - ratio(4, 3) * t - &two_eps, t + &eps],
                &one,
            )?,
            levels(
                vec![&one - ratio(3, 2) * t - &two_eps, &half + &eps, t + &eps],
                &one,
            )?,
        ])?;
        let pb = FiniteMixedStrategy::uniform(vec![
            levels(vec![int(0), int(0), t.clone()], t)?,
            levels(vec![int(0), half.clone(), half], t)?,
            levels(vec![third.clone(), third.clone(), third], t)?,
        ])?;
        EquilibriumConstruction {
            t: t.clone(),
            game,
            k: None,
            epsilon: Some(eps),
            pa,
            pb,
            value: ratio(8, 9),
        }
    } else if t > &ratio(3, 5) && t < &ratio(30, 47) {
        let pa = FiniteMixedStrategy::uniform(vec![
            levels(
                vec![
                    (int(30) - int(22) * t) / int(75),
                    (int(15) - int(11) * t) / int(25),
                    int(11) * t / int(15),
                ],
                &one,
            )?,
            levels(
                vec![
                    int(2) * t / int(15),
                    int(13) * t / int(30),
                    &one - int(17) * t / int(30),
                ],
                &one,
            )?,
        ])?;
        let pb = FiniteMixedStrategy::uniform(vec![
            levels(vec![third.clone(), third.clone(), third], t)?,
            levels(vec![int(0), int(0), t.clone()], t)?,
        ])?;
        EquilibriumConstruction {
            t: t.clone(),
            game,
            k: None,
            epsilon: None,
            pa,
            pb,
            value: ratio(5, 6),
        }
    } else {
        return Ok(None);
    };
    Ok(Some(W3Equilibrium::Finite(construction)))
}

/// Whether a two-atom strategy for A belongs to the family of equilibrium
/// strategies for `3/5 < t < 30/47`: atoms `(a,b,c)` and `(d,e,f)` with
/// `a > t/3`, `b > t/2`, `f > t`, `2d + c ≥ t` and `d + 2e ≥ t`.
///
/// Atoms are unordered, so the strategy qualifies if either labeling works.
pub fn check_w3_family(pa: &FiniteMixedStrategy, t: &Rational) -> Result<bool> {
    check_t(t)?;
    let atoms = pa.atoms();
    if atoms.len() != 2 || atoms.iter().any(|(_, p)| p != &ratio(1, 2)) {
        return Err(Error::input(
            "the family has exactly two atoms of probability 1/2",
        ));
    }
    if !pa.budget().is_one() || pa.battlefields() != 3 {
        return Err(Error::input(
            "the family is for budget 1 on three battlefields",
        ));
    }
    let fits = |first: &Allocation, second: &Allocation| {
        let [a, b, c] = first.levels() else {
            return false;
        };
        let [d, e, f] = second.levels() else {
            return false;
        };
        a > &(t / int(3))
            && b > &(t / int(2))
            && f > t
            && &(int(2) * d + c) >= t
            && &(d + int(2) * e) >= t
    };
    let (x, y) = (&atoms[0].0, &atoms[1].0);
    Ok(fits(x, y) || fits(y, x))
}

/// Fixed strategies used for the computer-verified three-battlefield bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedStrategy {
    /// Five-atom strategy for B with budget 2/3, capping A at 4/5.
    UpperBoundAtTwoThirds,
    /// Pure strategy for A with budget 1 guaranteeing 2/3 against budget 5/6.
    LowerBoundAtFiveSixths,
}

impl FromStr for FixedStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "5.4-B" => Ok(Self::UpperBoundAtTwoThirds),
            "5.5-A" => Ok(Self::LowerBoundAtFiveSixths),
            other => Err(Error::input(format!(
                "unknown fixed strategy {other:?} (expected \"5.4-B\" or \"5.5-A\")"
            ))),
        }
    }
}

pub fn fixed_strategy(which: FixedStrategy) -> FiniteMixedStrategy {
    let build = || -> Result<FiniteMixedStrategy> {
        match which {
            FixedStrategy::UpperBoundAtTwoThirds => {
                let budget = ratio(2, 3);
                let atoms = [
                    [(0, 1), (1, 16), (29, 48)],
                    [(0, 1), (0, 1), (2, 3)],
                    [(1, 16), (1, 16), (13, 24)],
                    [(1, 8), (13, 48), (13, 48)],
                    [(5, 24), (11, 48), (11, 48)],
                ];
                FiniteMixedStrategy::uniform(
                    atoms
                        .iter()
                        .map(|a| levels(a.iter().map(|&(p, q)| ratio(p, q)).collect(), &budget))
                        .collect::<Result<_>>()?,
                )
            }
            FixedStrategy::LowerBoundAtFiveSixths => Ok(FiniteMixedStrategy::pure(levels(
                vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)],
                &int(1),
            )?)),
        }
    };
    build().expect("fixed strategies are feasible")
}

/// Looks a fixed strategy up by its id, `"5.4-B"` or `"5.5-A"`.
pub fn fixed_strategies(id: &str) -> Result<FiniteMixedStrategy> {
    Ok(fixed_strategy(id.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::payoff_mixed;

    fn finite(t: &Rational) -> EquilibriumConstruction {
        match w3_equilibrium(t).unwrap() {
            Some(W3Equilibrium::Finite(c)) => c,
            other => panic!("expected a finite construction, got {other:?}"),
        }
    }

    fn atom_levels(s: &FiniteMixedStrategy) -> Vec<Vec<Rational>> {
        s.atoms().iter().map(|(a, _)| a.levels().to_vec()).collect()
    }

    #[test]
    fn w2_value_examples() {
        assert_eq!(w2_value(&ratio(1, 2)).unwrap(), int(1));
        assert_eq!(w2_value(&ratio(2, 3)).unwrap(), ratio(3, 4));
        assert_eq!(w2_value(&ratio(4, 5)).unwrap(), ratio(2, 3));
        assert_eq!(w2_value(&int(1)).unwrap(), ratio(1, 2));
        assert_eq!(w2_value(&int(0)).unwrap(), int(1));
        assert!(w2_value(&ratio(-1, 2)).is_err());
        assert!(w2_value(&ratio(3, 2)).is_err());
    }

    #[test]
    fn w2_equilibrium_at_three_quarters() {
        let c = w2_equilibrium(&ratio(3, 4)).unwrap();
        assert_eq!(c.k, Some(1));
        assert_eq!(c.epsilon, Some(ratio(3, 16)));
        assert_eq!(
            atom_levels(&c.pa),
            vec![
                vec![ratio(3, 16), ratio(13, 16)],
                vec![ratio(7, 16), ratio(9, 16)]
            ]
        );
        assert_eq!(
            atom_levels(&c.pb),
            vec![vec![int(0), ratio(3, 4)], vec![ratio(1, 4), ratio(1, 2)]]
        );
        assert_eq!(payoff_mixed(&c.pa, &c.pb, &c.game).unwrap(), ratio(3, 4));
    }

    #[test]
    fn w2_equilibrium_overwhelm_and_symmetric_cases() {
        let c = w2_equilibrium(&ratio(1, 2)).unwrap();
        assert_eq!(atom_levels(&c.pa), vec![vec![ratio(1, 3), ratio(2, 3)]]);
        assert_eq!(atom_levels(&c.pb), vec![vec![ratio(1, 4), ratio(1, 4)]]);
        let c = w2_equilibrium(&int(1)).unwrap();
        assert_eq!(atom_levels(&c.pa), vec![vec![ratio(1, 2), ratio(1, 2)]]);
        assert_eq!(c.pa, c.pb);
    }

    #[test]
    fn w3_value_examples() {
        let v = |p, q| w3_value(&ratio(p, q)).unwrap();
        assert_eq!(v(1, 2), ValueAnswer::known(int(1)));
        assert_eq!(v(6, 11), ValueAnswer::known(ratio(8, 9)));
        assert_eq!(v(5, 9), ValueAnswer::known(ratio(8, 9)));
        assert_eq!(v(5, 8), ValueAnswer::known(ratio(5, 6)));
        assert_eq!(
            v(2, 3),
            ValueAnswer {
                kind: ValueKind::UpperBound,
                value: Some(ratio(4, 5))
            }
        );
        assert_eq!(
            v(5, 6),
            ValueAnswer {
                kind: ValueKind::LowerBound,
                value: Some(ratio(2, 3))
            }
        );
        assert_eq!(v(1, 1), ValueAnswer::known(ratio(1, 2)));
        for (p, q) in [(19, 32), (18, 31), (3, 5), (30, 47), (7, 10), (9, 10)] {
            assert_eq!(v(p, q).kind, ValueKind::Unknown, "{p}/{q}");
        }
    }

    #[test]
    fn thm_5_2_construction_at_five_ninths() {
        let c = finite(&ratio(5, 9));
        assert_eq!(c.epsilon, Some(ratio(7, 648)));
        let mut expected = vec![
            vec![int(0), int(0), ratio(5, 9)],
            vec![int(0), ratio(5, 18), ratio(5, 18)],
            vec![ratio(5, 27), ratio(5, 27), ratio(5, 27)],
        ];
        expected.sort();
        assert_eq!(atom_levels(&c.pb), expected);
        assert!(c.pb.atoms().iter().all(|(_, p)| p == &ratio(1, 3)));
        // A's atoms worked out by hand at ε = 7/648.
        let mut a = vec![
            vec![ratio(127, 648), ratio(187, 648), ratio(334, 648)],
            vec![ratio(127, 648), ratio(154, 648), ratio(367, 648)],
            vec![ratio(94, 648), ratio(187, 648), ratio(367, 648)],
        ];
        a.sort();
        assert_eq!(atom_levels(&c.pa), a);
        assert_eq!(payoff_mixed(&c.pa, &c.pb, &c.game).unwrap(), ratio(8, 9));
    }

    #[test]
    fn thm_5_3_construction_at_five_eighths() {
        let c = finite(&ratio(5, 8));
        // ((30−22t)/75, (15−11t)/25, 11t/15) and (2t/15, 13t/30, 1−17t/30) at t = 5/8.
        assert_eq!(
            atom_levels(&c.pa),
            vec![
                vec![ratio(1, 12), ratio(13, 48), ratio(31, 48)],
                vec![ratio(13, 60), ratio(13, 40), ratio(11, 24)],
            ]
        );
        assert_eq!(payoff_mixed(&c.pa, &c.pb, &c.game).unwrap(), ratio(5, 6));
    }

    #[test]
    fn w3_equilibrium_coverage() {
        assert!(w3_equilibrium(&ratio(19, 32)).unwrap().is_none());
        assert!(w3_equilibrium(&ratio(3, 5)).unwrap().is_none());
        assert!(w3_equilibrium(&ratio(2, 3)).unwrap().is_none());
        assert_eq!(
            w3_equilibrium(&int(1)).unwrap(),
            Some(W3Equilibrium::Triangle(TriangleFamilySpec::depth(0)))
        );
        let c = finite(&ratio(1, 2));
        assert_eq!(
            atom_levels(&c.pa),
            vec![vec![ratio(2, 11), ratio(3, 11), ratio(6, 11)]]
        );
        assert_eq!(
            atom_levels(&c.pb),
            vec![vec![ratio(1, 6), ratio(1, 6), ratio(1, 6)]]
        );
    }

    #[test]
    fn family_membership() {
        let t = ratio(5, 8);
        assert!(check_w3_family(&finite(&t).pa, &t).unwrap());

        let pa = |x: [Rational; 3], y: [Rational; 3]| {
            FiniteMixedStrategy::uniform(vec![
                Allocation::new(x.to_vec(), int(1)).unwrap(),
                Allocation::new(y.to_vec(), int(1)).unwrap(),
            ])
            .unwrap()
        };
        let third = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        let split = [int(0), ratio(1, 2), ratio(1, 2)];
        // f = 1/2 < t fails under either labeling.
        assert!(!check_w3_family(&pa(third.clone(), split), &t).unwrap());

        // a = t/3 exactly violates the strict inequality.
        let boundary = [ratio(5, 24), ratio(1, 3), ratio(11, 24)];
        let tall = [ratio(1, 12), ratio(13, 48), ratio(31, 48)];
        assert!(!check_w3_family(&pa(boundary, tall.clone()), &t).unwrap());
        let inside = [ratio(13, 60), ratio(13, 40), ratio(11, 24)];
        assert!(check_w3_family(&pa(inside, tall), &t).unwrap());

        assert!(check_w3_family(
            &FiniteMixedStrategy::pure(Allocation::new(third.to_vec(), int(1)).unwrap()),
            &t
        )
        .is_err());
    }

    #[test]
    fn fixed_strategy_lookup() {
        let b = fixed_strategies("5.4-B").unwrap();
        assert_eq!(b.atoms().len(), 5);
        assert_eq!(b.budget(), &ratio(2, 3));
        assert!(b.atoms().iter().all(|(_, p)| p == &ratio(1, 5)));
        assert!(b
            .atoms()
            .iter()
            .any(|(a, _)| a.levels() == [ratio(1, 8), ratio(13, 48), ratio(13, 48)]));

        let a = fixed_strategies("5.5-A").unwrap();
        assert_eq!(
            atom_levels(&a),
            vec![vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)]]
        );
        assert!(fixed_strategies("5.6-A").is_err());
    }
}
