use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acb_core::analytic::{sample_triangle_strategy, TriangleFamilySpec};
use acb_core::best_response::best_response;
use acb_core::closed_form::{
    check_w3_family, fixed_strategies, w2_equilibrium, w2_value, w3_equilibrium, w3_value,
};
use acb_core::discrete::{build_matrix, solve_zero_sum};
use acb_core::game::payoff_mixed;
use acb_core::harness::{self, Theorem, VerifyOptions};
use acb_core::rational::{self, int};
use acb_core::{
    EquilibriumConstruction, FiniteMixedStrategy, GameSpec, Rational, SolveMethod,
    VerificationReport, W3Equilibrium,
};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "acb",
    version,
    about = "Asymmetric Colonel Blotto games: values, equilibria and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected payoff of A for two mixed strategies given as JSON files.
    Payoff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Exact best response against a finite mixed strategy.
    BestResponse {
        /// Strategy JSON file, or a fixed strategy id ("5.4-B", "5.5-A").
        #[arg(long)]
        against: String,
        #[arg(long, value_parser = parse_rational)]
        budget: Rational,
    },
    /// W2(t).
    ValueW2 {
        #[arg(long, value_parser = parse_rational)]
        t: Rational,
    },
    /// What is known about W3(t).
    ValueW3 {
        #[arg(long, value_parser = parse_rational)]
        t: Rational,
    },
    /// Closed-form equilibrium pair of ACB(1, t, n).
    Equilibrium {
        #[arg(long, value_parser = parse_rational)]
        t: Rational,
        #[arg(long)]
        n: usize,
    },
    /// Whether a strategy of A satisfies the three-battlefield two-atom family inequalities.
    CheckFamily {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        t: Rational,
    },
    /// Run the check suite of one result (or all of them).
    Verify {
        /// Result id (2.1, 3.4, 4.1, 5.1, 5.2, 5.3, 5.4, 5.5) or "all".
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include wall-clock runtimes (makes output run dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the grid discretization of ACB(ta, tb, n).
    SolveDiscrete {
        #[arg(long, value_parser = parse_rational)]
        ta: Rational,
        #[arg(long, value_parser = parse_rational)]
        tb: Rational,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        grid: u64,
        #[arg(long, value_enum, default_value_t = Method::Simplex)]
        method: Method,
        /// Also write the payoff matrix as CSV.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Sample the triangle-family strategy of ACB(1, 1, 3).
    SampleMarginals {
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV data for the value curves and the marginal CDFs.
    PlotData {
        #[arg(long, value_enum)]
        curve: Curve,
        #[arg(long, default_value_t = 1000)]
        points: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Simplex,
    Fp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Curve {
    W2,
    W3,
    Marginals,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Payoff { a, b } => {
            let pa = read_strategy(&a)?;
            let pb = read_strategy(&b)?;
            let spec = GameSpec::new(pa.budget().clone(), pb.budget().clone(), pa.battlefields())?;
            let value = payoff_mixed(&pa, &pb, &spec)?;
            emit(
                None,
                &pretty(
                    &json!({ "payoff": rational::format(&value), "decimal": rational::decimal(&value) }),
                ),
            )?;
        }
        Command::BestResponse { against, budget } => {
            let q = match fixed_strategies(&against) {
                Ok(q) => q,
                Err(_) => read_strategy(Path::new(&against))?,
            };
            let result = best_response(&q, &budget)?;
            emit(None, &pretty(&serde_json::to_value(&result)?))?;
        }
        Command::ValueW2 { t } => {
            let value = w2_value(&t)?;
            emit(
                None,
                &pretty(&json!({
                    "t": rational::format(&t),
                    "kind": "known",
                    "value": rational::format(&value),
                })),
            )?;
        }
        Command::ValueW3 { t } => {
            let mut answer = serde_json::to_value(w3_value(&t)?)?;
            answer["t"] = json!(rational::format(&t));
            emit(None, &pretty(&answer))?;
        }
        Command::Equilibrium { t, n } => {
            let out = match n {
                2 => construction_json(&w2_equilibrium(&t)?),
                3 => match w3_equilibrium(&t)? {
                    Some(W3Equilibrium::Finite(c)) => construction_json(&c),
                    Some(W3Equilibrium::Triangle(spec)) => triangle_json(&t, &spec),
                    None => bail!(
                        "no closed-form equilibrium is known for ACB(1, {}, 3)",
                        rational::format(&t)
                    ),
                },
                _ => bail!("closed forms exist only for n = 2 and n = 3, got {n}"),
            };
            emit(None, &pretty(&out))?;
        }
        Command::CheckFamily { strategy, t } => {
            let pa = read_strategy(&strategy)?;
            let member = check_w3_family(&pa, &t)?;
            emit(
                None,
                &pretty(&json!({ "t": rational::format(&t), "member": member })),
            )?;
            if !member {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Verify {
            theorem,
            samples,
            seed,
            format,
            timing,
            out,
        } => {
            let theorems: Vec<Theorem> = if theorem == "all" {
                Theorem::ALL.to_vec()
            } else {
                vec![theorem.parse()?]
            };
            let options = VerifyOptions { samples, seed };
            let mut reports = Vec::new();
            for t in theorems {
                let mut report = harness::verify_theorem(t, &options)?;
                if !timing {
                    report.runtime_ms = None;
                }
                reports.push(report);
            }
            let text = match format {
                Format::Json => pretty(&serde_json::to_value(&reports)?),
                Format::Csv => reports_csv(&reports)?,
            };
            emit(out.as_deref(), &text)?;
            let mut failed = false;
            for report in &reports {
                for check in report.failures() {
                    failed = true;
                    eprintln!(
                        "FAIL {}: {} (expected {}, observed {})",
                        report.theorem, check.description, check.expected, check.observed
                    );
                }
            }
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::SolveDiscrete {
            ta,
            tb,
            n,
            grid,
            method,
            matrix_out,
        } => {
            let spec = GameSpec::new(ta, tb, n)?;
            let game = build_matrix(&spec, grid)?;
            if let Some(path) = matrix_out {
                write_atomic(&path, &game.matrix_csv())?;
            }
            let method = match method {
                Method::Simplex => SolveMethod::Simplex,
                Method::Fp => SolveMethod::FictitiousPlay,
            };
            let report = solve_zero_sum(&game, method)?;
            emit(None, &pretty(&serde_json::to_value(&report)?))?;
        }
        Command::SampleMarginals {
            depth,
            samples,
            seed,
            out,
        } => {
            let points =
                sample_triangle_strategy(&TriangleFamilySpec::depth(depth), samples, seed)?;
            emit(out.as_deref(), &harness::samples_csv(&points))?;
        }
        Command::PlotData { curve, points, out } => {
            let text = match curve {
                Curve::W2 => harness::w2_csv(points)?,
                Curve::W3 => harness::w3_csv(points)?,
                Curve::Marginals => harness::marginals_csv(points)?,
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_strategy(path: &Path) -> anyhow::Result<FiniteMixedStrategy> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FiniteMixedStrategy::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn strategy_value(s: &FiniteMixedStrategy) -> Value {
    serde_json::to_value(s).expect("strategies always serialize")
}

fn construction_json(c: &EquilibriumConstruction) -> Value {
    json!({
        "t": rational::format(&c.t),
        "n": c.game.battlefields,
        "k": c.k,
        "epsilon": c.epsilon.as_ref().map(rational::format),
        "value": rational::format(&c.value),
        "pa": strategy_value(&c.pa),
        "pb": strategy_value(&c.pb),
    })
}

fn triangle_json(t: &Rational, spec: &TriangleFamilySpec) -> Value {
    json!({
        "t": rational::format(t),
        "n": 3,
        "value": rational::format(&acb_core::rational::ratio(1, 2)),
        "both": { "triangle_family_depth": spec.depth },
        "budget": rational::format(&int(1)),
    })
}

fn reports_csv(reports: &[VerificationReport]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theorem", "description", "expected", "observed", "pass"])?;
    for r in reports {
        for c in &r.checks {
            w.write_record([
                &r.theorem,
                &c.description,
                &c.expected,
                &c.observed,
                &c.pass.to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes to `path` through a temporary sibling file, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
