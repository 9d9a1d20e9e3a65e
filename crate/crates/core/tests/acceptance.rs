//! Acceptance gate: each criterion runs at full size and prints one PASS/FAIL line.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use sumset_minimax::oracle::enumerate_optimal;
use sumset_minimax::verify::{run_suite, Suite, SuiteReport};
use sumset_minimax::{brute_force_phi, classify, restricted_sumset};

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn suites(runs: &[(Suite, usize)]) -> Outcome {
    let reports: Vec<SuiteReport> = runs
        .iter()
        .map(|&(suite, bound)| run_suite(suite, Some(bound)).unwrap_or_else(|e| panic!("{suite}: {e}")))
        .collect();
    let passed = reports.iter().all(SuiteReport::passed);
    let detail = reports
        .iter()
        .map(|r| {
            let mut s = format!("{}<={}: {} cases, {} violations", r.suite, r.bound, r.cases, r.violations);
            for e in &r.examples {
                s.push_str(&format!("\n        {e}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn prime_eleven_two_colorings() -> Outcome {
    let value = brute_force_phi(11, 2).expect("oracle").value;
    let optimal = enumerate_optimal(11, 2, 1 << 10).expect("enumeration");
    let mut exceptions = 0;
    for c in &optimal {
        let ok = c.classes().iter().any(|a| {
            a.len() == 6 && restricted_sumset(a).len() == 9 && classify(a, true).is_progression()
        });
        if !ok {
            exceptions += 1;
        }
    }
    Outcome {
        passed: value == 9 && !optimal.is_empty() && exceptions == 0,
        detail: format!("value {value}, {} optimal colorings, {exceptions} exceptions", optimal.len()),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("prime formula, p <= 13", Box::new(|| suites(&[(Suite::PrimeFormula, 13)]))),
        ("bounds sandwich the oracle and are attained, n <= 14", Box::new(|| suites(&[(Suite::Sandwich, 14)]))),
        (
            "interval and coset regimes exact, n <= 14",
            Box::new(|| suites(&[(Suite::IntervalRegime, 14), (Suite::CosetRegime, 14)])),
        ),
        ("optimal 2-colorings of Z_11 contain a progression class", Box::new(prime_eleven_two_colorings)),
        (
            "block, coset, lower-bound and window laws",
            Box::new(|| {
                suites(&[
                    (Suite::BlockLaw, 30),
                    (Suite::CosetLaw, 60),
                    (Suite::LowerBound, 16),
                    (Suite::WindowLaw, 30),
                ])
            }),
        ),
        (
            "stability bounds and concentration",
            Box::new(|| {
                suites(&[
                    (Suite::StabilityBounds, 14),
                    (Suite::Concentration, 14),
                    (Suite::CrossCosets, 30),
                ])
            }),
        ),
        ("internal minus cross bound gap, x in 3..=5", Box::new(|| suites(&[(Suite::InternalGap, 5)]))),
        ("3-element sets have 3 sums, n <= 64", Box::new(|| suites(&[(Suite::ThreeSet, 64)]))),
    ];

    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name} [{secs:.2}s] {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
