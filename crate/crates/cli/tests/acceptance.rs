//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use acb_core::best_response::{best_response, exploitability};
use acb_core::closed_form::{
    fixed_strategy, w2_equilibrium, w2_value, w3_equilibrium, FixedStrategy, W3Equilibrium,
};
use acb_core::game::payoff_mixed;
use acb_core::harness::{two_battlefield_table, verify_theorem, Theorem, VerifyOptions};
use acb_core::rational::{format, int, ratio};
use acb_core::Rational;
use num_traits::Zero;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

/// W₂(t) from the interval condition `2k/(2k+1) ≤ t < (2k+2)/(2k+3)`, found by search.
fn w2_by_intervals(t: &Rational) -> Rational {
    if t < &ratio(2, 3) {
        return int(1);
    }
    if t == &int(1) {
        return ratio(1, 2);
    }
    let k = (0i64..)
        .find(|&k| t < &ratio(2 * k + 2, 2 * k + 3))
        .unwrap();
    ratio(k + 2, 2 * k + 2)
}

fn w2_reproduction() -> Outcome {
    let mut notes = Vec::new();
    for (t, listed) in two_battlefield_table() {
        let expected = w2_by_intervals(&t);
        if expected != listed {
            return fail(format!(
                "table and interval formula disagree at t={}",
                format(&t)
            ));
        }
        let value = w2_value(&t).unwrap();
        if value != expected {
            return fail(format!(
                "t={}: W2 = {}, expected {}",
                format(&t),
                format(&value),
                format(&expected)
            ));
        }
        let c = w2_equilibrium(&t).unwrap();
        let payoff = payoff_mixed(&c.pa, &c.pb, &c.game).unwrap();
        let (ga, gb) = exploitability(&c.pa, &c.pb, &c.game).unwrap();
        if payoff != value || !ga.is_zero() || !gb.is_zero() {
            return fail(format!(
                "t={}: payoff {}, gains ({}, {})",
                format(&t),
                format(&payoff),
                format(&ga),
                format(&gb)
            ));
        }
        notes.push(format!("{}->{}", format(&t), format(&value)));
    }
    ok(format!(
        "{}; exploitability (0,0) everywhere (t=9/10 lies in [8/9,10/11), k=4, so 3/5 rather than the listed 2/3)",
        notes.join(" ")
    ))
}

fn report_outcome(theorem: Theorem) -> Outcome {
    let report = verify_theorem(theorem, &VerifyOptions::default()).unwrap();
    let outcome = match report.failures().next() {
        None => ok(format!("{} checks passed", report.checks.len())),
        Some(c) => fail(format!(
            "{} (expected {}, observed {})",
            c.description, c.expected, c.observed
        )),
    };
    outcome
}

fn w3_ranges() -> Outcome {
    let mut notes = Vec::new();
    for (t, expected) in [
        (ratio(1, 2), int(1)),
        (ratio(5, 9), ratio(8, 9)),
        (ratio(5, 8), ratio(5, 6)),
    ] {
        let Some(W3Equilibrium::Finite(c)) = w3_equilibrium(&t).unwrap() else {
            return fail(format!("t={}: no finite construction", format(&t)));
        };
        let payoff = payoff_mixed(&c.pa, &c.pb, &c.game).unwrap();
        let (ga, gb) = exploitability(&c.pa, &c.pb, &c.game).unwrap();
        if payoff != expected || !ga.is_zero() || !gb.is_zero() {
            return fail(format!(
                "t={}: payoff {}, gains ({}, {})",
                format(&t),
                format(&payoff),
                format(&ga),
                format(&gb)
            ));
        }
        notes.push(format!("{}->{}", format(&t), format(&payoff)));
    }
    ok(format!("{}; exploitability (0,0)", notes.join(" ")))
}

fn computer_bounds() -> Outcome {
    let upper = best_response(
        &fixed_strategy(FixedStrategy::UpperBoundAtTwoThirds),
        &int(1),
    )
    .unwrap();
    let lower = best_response(
        &fixed_strategy(FixedStrategy::LowerBoundAtFiveSixths),
        &ratio(5, 6),
    )
    .unwrap();
    let detail = format!(
        "A vs 5.4-B sup {} (bound 4/5), B vs 5.5-A sup {} (bound 1/3)",
        format(&upper.sup_payoff),
        format(&lower.sup_payoff)
    );
    if upper.sup_payoff <= ratio(4, 5) && lower.sup_payoff <= ratio(1, 3) {
        ok(detail)
    } else {
        fail(detail)
    }
}

fn oracle_equivalence() -> Outcome {
    for seed in 0..200u64 {
        let inst = common::Instance::random(seed);
        let sup = best_response(&inst.opponent(), &inst.budget())
            .unwrap()
            .sup_payoff;
        let scan = inst.grid_max(48);
        if sup != scan {
            return fail(format!(
                "instance {seed}: oracle {} vs grid {}",
                format(&sup),
                format(&scan)
            ));
        }
    }
    ok("200 instances, oracle sup = grid maximum on the 1/(48 lcm) grid")
}

fn run_acb(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_acb"))
        .args(args)
        .output()
        .expect("run acb");
    assert!(
        out.status.success(),
        "acb {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let verify = [
        "verify",
        "--theorem",
        "all",
        "--samples",
        "20000",
        "--seed",
        "42",
    ];
    let sample = [
        "sample-marginals",
        "--depth",
        "2",
        "--samples",
        "20000",
        "--seed",
        "42",
    ];
    if run_acb(&verify) != run_acb(&verify) {
        return fail("verify reports differ between runs");
    }
    let first = run_acb(&sample);
    if first != run_acb(&sample) {
        return fail("sample-marginals CSV differs between runs");
    }
    ok(format!(
        "verify and sample-marginals byte-identical ({} CSV bytes)",
        first.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 W2 reproduction", Duration::from_secs(5), w2_reproduction),
        ("2 ACB(1,1,3) marginals", Duration::from_secs(60), || {
            report_outcome(Theorem::Marginals)
        }),
        ("3 W3 covered ranges", Duration::from_secs(30), w3_ranges),
        (
            "4 computer-verified bounds",
            Duration::from_secs(30),
            computer_bounds,
        ),
        (
            "5 oracle equivalence",
            Duration::from_secs(60),
            oracle_equivalence,
        ),
        ("6 value uniqueness", Duration::from_secs(60), || {
            report_outcome(Theorem::UniqueValue)
        }),
        ("7 determinism", Duration::from_secs(120), determinism),
    ];
    let mut all = true;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            outcome.pass = false;
            outcome
                .detail
                .push_str(&format!("; over the {}s limit", limit.as_secs()));
        }
        all &= outcome.pass;
        println!(
            "{} criterion {name} ({:.2}s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
