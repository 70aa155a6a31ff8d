//! Verification suites for the individual results and CSV data for plots.
//!
//! Each suite is a list of [`Check`]s with exact expected and observed values
//! (decimal with a stated tolerance for Monte Carlo checks). Suites are
//! deterministic given their options, so reports are reproducible byte for byte.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::analytic::{self, TriangleFamilySpec};
use crate::best_response::{best_response, exploitability};
use crate::closed_form::{
    self, check_w3_family, fixed_strategy, w2_epsilon_interval, w2_equilibrium, w2_value,
    w3_equilibrium, w3_value, FixedStrategy, ValueKind, W3Equilibrium,
};
use crate::discrete::{build_matrix, solve_matrix, SolveMethod};
use crate::error::{Error, Result};
use crate::game::{payoff_mixed, Allocation, GameSpec};
use crate::rational::{self, int, ratio, Rational};

/// Largest allowed Kolmogorov–Smirnov distance for the marginal checks.
pub const KS_THRESHOLD: f64 = 0.02;
/// Largest allowed gap between the simplex and fictitious-play values.
pub const VALUE_AGREEMENT: f64 = 1e-4;
/// Denominator of the rational grid scanned for the support-box check.
pub const BOX_GRID: i64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theorem {
    /// Equilibrium payoffs of constant-sum games are unique.
    UniqueValue,
    /// `ACB(1,1,3)` marginals and value 1/2.
    Marginals,
    /// `W₂(t)`.
    TwoBattlefields,
    /// `W₃(t) = 1` for `t < 6/11`.
    Overwhelm,
    /// `W₃(t) = 8/9` on `[6/11, 18/31)`.
    EightNinths,
    /// `W₃(t) = 5/6` on `(3/5, 30/47)`.
    FiveSixths,
    /// `W₃(2/3) ≤ 4/5`.
    UpperBound,
    /// `W₃(5/6) ≥ 2/3`.
    LowerBound,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::UniqueValue,
        Theorem::Marginals,
        Theorem::TwoBattlefields,
        Theorem::Overwhelm,
        Theorem::EightNinths,
        Theorem::FiveSixths,
        Theorem::UpperBound,
        Theorem::LowerBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::UniqueValue => "2.1",
            Theorem::Marginals => "3.4",
            Theorem::TwoBattlefields => "4.1",
            Theorem::Overwhelm => "5.1",
            Theorem::EightNinths => "5.2",
            Theorem::FiveSixths => "5.3",
            Theorem::UpperBound => "5.4",
            Theorem::LowerBound => "5.5",
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| {
                Error::input(format!(
                    "unknown theorem {s:?}; expected one of {}",
                    Theorem::ALL.map(Theorem::id).join(", ")
                ))
            })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl Check {
    fn exact(description: impl Into<String>, expected: &Rational, observed: &Rational) -> Self {
        Self {
            description: description.into(),
            expected: rational::format(expected),
            observed: rational::format(observed),
            pass: expected == observed,
        }
    }

    fn at_most(description: impl Into<String>, bound: &Rational, observed: &Rational) -> Self {
        Self {
            description: description.into(),
            expected: format!("<= {}", rational::format(bound)),
            observed: rational::format(observed),
            pass: observed <= bound,
        }
    }

    fn holds(
        description: impl Into<String>,
        expected: impl Into<String>,
        observed: impl Into<String>,
        pass: bool,
    ) -> Self {
        Self {
            description: description.into(),
            expected: expected.into(),
            observed: observed.into(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Wall-clock time; left empty unless requested because it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    fn new(theorem: Theorem, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            theorem: theorem.id().to_string(),
            checks,
            pass,
            runtime_ms: None,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Monte Carlo samples per triangle-family depth.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 42,
        }
    }
}

pub fn verify_theorem(theorem: Theorem, options: &VerifyOptions) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let checks = match theorem {
        Theorem::UniqueValue => unique_value_checks()?,
        Theorem::Marginals => marginal_checks(options)?,
        Theorem::TwoBattlefields => two_battlefield_checks()?,
        Theorem::Overwhelm => {
            three_battlefield_checks(&[ratio(1, 5), ratio(1, 2), ratio(53, 100)], int(1))?
        }
        Theorem::EightNinths => {
            three_battlefield_checks(&[ratio(6, 11), ratio(5, 9), ratio(4, 7)], ratio(8, 9))?
        }
        Theorem::FiveSixths => {
            let ts = [ratio(61, 100), ratio(5, 8), ratio(63, 100)];
            let mut checks = three_battlefield_checks(&ts, ratio(5, 6))?;
            for t in &ts {
                if let Some(W3Equilibrium::Finite(c)) = w3_equilibrium(t)? {
                    let member = check_w3_family(&c.pa, t)?;
                    checks.push(Check::holds(
                        format!(
                            "t={}: A's strategy satisfies the two-atom family inequalities",
                            rational::format(t)
                        ),
                        "true",
                        member.to_string(),
                        member,
                    ));
                }
            }
            checks
        }
        Theorem::UpperBound => {
            let result = best_response(
                &fixed_strategy(FixedStrategy::UpperBoundAtTwoThirds),
                &int(1),
            )?;
            vec![
                Check::at_most(
                    "best response of A (budget 1) to the five-atom B strategy",
                    &ratio(4, 5),
                    &result.sup_payoff,
                ),
                Check::holds(
                    "supremum attained by a feasible witness",
                    "true",
                    result.attained.to_string(),
                    result.attained,
                ),
            ]
        }
        Theorem::LowerBound => {
            let result = best_response(
                &fixed_strategy(FixedStrategy::LowerBoundAtFiveSixths),
                &ratio(5, 6),
            )?;
            vec![Check::at_most(
                "best response of B (budget 5/6) to A's (1/6, 1/3, 1/2), i.e. A keeps at least 2/3",
                &ratio(1, 3),
                &result.sup_payoff,
            )]
        }
    };
    let mut report = VerificationReport::new(theorem, checks);
    report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// The instances on which simplex and fictitious play are compared.
pub fn value_agreement_instances() -> Vec<(GameSpec, u64)> {
    let g = |b: Rational, n| GameSpec::new(int(1), b, n).expect("valid game");
    vec![
        (g(int(1), 2), 8),
        (g(int(1), 3), 9),
        (g(ratio(2, 3), 2), 6),
        (g(ratio(2, 3), 3), 6),
        (g(ratio(1, 2), 3), 6),
    ]
}

fn game_label(spec: &GameSpec, m: u64) -> String {
    format!(
        "ACB({}, {}, {}) grid {m}",
        rational::format(&spec.budget_a),
        rational::format(&spec.budget_b),
        spec.battlefields
    )
}

fn unique_value_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (spec, m) in value_agreement_instances() {
        let label = game_label(&spec, m);
        let game = build_matrix(&spec, m)?;
        let exact = solve_matrix(&game.matrix, SolveMethod::Simplex)?;
        let approx = solve_matrix(&game.matrix, SolveMethod::FictitiousPlay)?;
        let gap = (&exact.value - &approx.value).abs();
        checks.push(Check::holds(
            format!("{label}: simplex certificate holds exactly"),
            "true",
            exact.certifies(&game.matrix).to_string(),
            exact.certifies(&game.matrix),
        ));
        checks.push(Check::holds(
            format!("{label}: fictitious play agrees with simplex within {VALUE_AGREEMENT:e}"),
            rational::decimal(&exact.value),
            format!(
                "{} after {} rounds",
                rational::decimal(&approx.value),
                approx.iterations.unwrap_or(0)
            ),
            gap <= Rational::from_float(VALUE_AGREEMENT).expect("finite tolerance"),
        ));
        let reversed: Vec<Vec<Rational>> = game.matrix.iter().rev().cloned().collect();
        let again = solve_matrix(&reversed, SolveMethod::Simplex)?;
        checks.push(Check::exact(
            format!("{label}: simplex value with rows reversed"),
            &exact.value,
            &again.value,
        ));
        if spec.budget_a == spec.budget_b {
            checks.push(Check::exact(
                format!("{label}: symmetric game value"),
                &ratio(1, 2),
                &exact.value,
            ));
        }
    }
    Ok(checks)
}

fn marginal_checks(options: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for depth in 0..=2u32 {
        let samples = analytic::sample_triangle_strategy(
            &TriangleFamilySpec::depth(depth),
            options.samples,
            options.seed.wrapping_add(depth as u64),
        )?;
        let inside = samples
            .iter()
            .filter(|s| analytic::in_support_box(s))
            .count();
        checks.push(Check::holds(
            format!("depth {depth}: samples inside the marginal supports"),
            samples.len().to_string(),
            inside.to_string(),
            inside == samples.len(),
        ));
        for j in 1..=3 {
            let distance = analytic::empirical_sup_distance(&samples, j)?;
            checks.push(Check::holds(
                format!(
                    "depth {depth}, battlefield {j}: KS distance over {} samples",
                    samples.len()
                ),
                format!("<= {KS_THRESHOLD}"),
                format!("{distance:.6}"),
                distance <= KS_THRESHOLD,
            ));
        }
    }

    let scan = support_box_scan(BOX_GRID)?;
    checks.push(Check::exact(
        format!("max payoff against the triangle strategy on the 1/{BOX_GRID} grid"),
        &ratio(1, 2),
        &scan.max,
    ));
    checks.push(Check::holds(
        "payoff is exactly 1/2 inside the support box and below 1/2 outside",
        format!("{} grid points consistent", scan.points),
        format!("{} inconsistent", scan.mismatches),
        scan.mismatches == 0,
    ));
    Ok(checks)
}

/// Result of scanning `payoff_vs_triangle` over all feasible grid allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxScan {
    pub max: Rational,
    pub points: usize,
    /// Points where "payoff = 1/2" and "inside the support box" disagree.
    pub mismatches: usize,
}

pub fn support_box_scan(denominator: i64) -> Result<BoxScan> {
    let half = ratio(1, 2);
    let mut max = Rational::zero();
    let mut points = 0;
    let mut mismatches = 0;
    for a in 0..=denominator {
        for b in a..=denominator {
            let c = denominator - a - b;
            if c < b {
                break;
            }
            let p = Allocation::new(
                vec![
                    ratio(a, denominator),
                    ratio(b, denominator),
                    ratio(c, denominator),
                ],
                int(1),
            )?;
            let payoff = analytic::payoff_vs_triangle(&p)?;
            if (payoff == half) != analytic::in_support_box(&p) {
                mismatches += 1;
            }
            max = max.max(payoff);
            points += 1;
        }
    }
    Ok(BoxScan {
        max,
        points,
        mismatches,
    })
}

/// Parameters at which the two-battlefield results are checked, with the value expected at each.
pub fn two_battlefield_table() -> Vec<(Rational, Rational)> {
    vec![
        (ratio(1, 2), int(1)),
        (ratio(2, 3), ratio(3, 4)),
        (ratio(7, 10), ratio(3, 4)),
        (ratio(3, 4), ratio(3, 4)),
        (ratio(4, 5), ratio(2, 3)),
        (ratio(9, 10), ratio(3, 5)),
        (int(1), ratio(1, 2)),
    ]
}

fn two_battlefield_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (t, expected) in two_battlefield_table() {
        let label = format!("t={}", rational::format(&t));
        checks.push(Check::exact(
            format!("{label}: W2(t)"),
            &expected,
            &w2_value(&t)?,
        ));
        let c = w2_equilibrium(&t)?;
        checks.push(Check::exact(
            format!("{label}: payoff of the constructed pair"),
            &expected,
            &payoff_mixed(&c.pa, &c.pb, &c.game)?,
        ));
        push_exploitability(&mut checks, &label, &c.pa, &c.pb, &c.game)?;
        if let (Some(k), Some(eps)) = (c.k, &c.epsilon) {
            let (lo, hi) = w2_epsilon_interval(&t, k);
            let strict = &lo < eps && eps < &hi;
            checks.push(Check::holds(
                format!("{label}: epsilon strictly inside its interval"),
                format!("({}, {})", rational::format(&lo), rational::format(&hi)),
                rational::format(eps),
                strict,
            ));
        }
    }
    Ok(checks)
}

fn push_exploitability(
    checks: &mut Vec<Check>,
    label: &str,
    pa: &crate::game::FiniteMixedStrategy,
    pb: &crate::game::FiniteMixedStrategy,
    spec: &GameSpec,
) -> Result<()> {
    let (gain_a, gain_b) = exploitability(pa, pb, spec)?;
    checks.push(Check::exact(
        format!("{label}: A's gain from deviating"),
        &Rational::zero(),
        &gain_a,
    ));
    checks.push(Check::exact(
        format!("{label}: B's gain from deviating"),
        &Rational::zero(),
        &gain_b,
    ));
    Ok(())
}

fn three_battlefield_checks(ts: &[Rational], expected: Rational) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for t in ts {
        let label = format!("t={}", rational::format(t));
        let answer = w3_value(t)?;
        checks.push(Check::holds(
            format!("{label}: W3(t) is known"),
            format!("Known {}", rational::format(&expected)),
            format!(
                "{} {}",
                answer.kind,
                answer
                    .value
                    .as_ref()
                    .map(rational::format)
                    .unwrap_or_default()
            ),
            answer.kind == ValueKind::Known && answer.value.as_ref() == Some(&expected),
        ));
        match w3_equilibrium(t)? {
            Some(W3Equilibrium::Finite(c)) => {
                checks.push(Check::exact(
                    format!("{label}: payoff of the constructed pair"),
                    &expected,
                    &payoff_mixed(&c.pa, &c.pb, &c.game)?,
                ));
                push_exploitability(&mut checks, &label, &c.pa, &c.pb, &c.game)?;
            }
            _ => checks.push(Check::holds(
                format!("{label}: finite construction"),
                "present",
                "absent",
                false,
            )),
        }
    }
    Ok(checks)
}

fn csv_pair(r: &Rational) -> String {
    format!("{},{}", rational::decimal(r), rational::format(r))
}

fn grid(points: u64) -> Result<impl Iterator<Item = Rational>> {
    if points < 2 {
        return Err(Error::input("plot data needs at least 2 points"));
    }
    Ok((0..=points).map(move |i| Rational::new(i.into(), points.into())))
}

/// `(t, W₂(t))` at `t = i/points`, `i = 0..=points`.
pub fn w2_csv(points: u64) -> Result<String> {
    let mut out = String::from("t,t_exact,w2,w2_exact\n");
    for t in grid(points)? {
        out.push_str(&format!("{},{}\n", csv_pair(&t), csv_pair(&w2_value(&t)?)));
    }
    Ok(out)
}

/// `(t, kind, W₃(t))` at `t = i/points`; the value columns are empty when unknown.
pub fn w3_csv(points: u64) -> Result<String> {
    let mut out = String::from("t,t_exact,kind,w3,w3_exact\n");
    for t in grid(points)? {
        let answer = w3_value(&t)?;
        let value = answer
            .value
            .as_ref()
            .map(csv_pair)
            .unwrap_or_else(|| ",".to_string());
        out.push_str(&format!("{},{},{}\n", csv_pair(&t), answer.kind, value));
    }
    Ok(out)
}

/// `(u, F¹(u), F²(u), F³(u))` at `u = i/points`.
pub fn marginals_csv(points: u64) -> Result<String> {
    let mut out = String::from("u,u_exact,F1,F1_exact,F2,F2_exact,F3,F3_exact\n");
    for u in grid(points)? {
        let fs = (1..=3)
            .map(|j| analytic::marginal_cdf(j, &u).map(|f| csv_pair(&f)))
            .collect::<Result<Vec<_>>>()?;
        out.push_str(&format!("{},{}\n", csv_pair(&u), fs.join(",")));
    }
    Ok(out)
}

/// Raw samples, one exact rational per coordinate.
pub fn samples_csv(samples: &[Allocation]) -> String {
    let mut out = String::from("x1,x2,x3\n");
    for s in samples {
        let row: Vec<String> = s.levels().iter().map(rational::format).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub use closed_form::fixed_strategies;
