//! Exit criteria, one line per criterion. Run with
//! `cargo test -p fibreg --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fibreg::rep::{build_for_prime, build_thm14, verify_monoid_structure, verify_relations};
use fibreg::{
    conjecture_scan, digit_sum_invariance_check, kernel_rank, lengyel_valuation, primes_up_to,
    wall_check, KernelConfig, Lengyel, PeriodData, Prime, RankReport,
};
use num_bigint::BigInt;
use rayon::prelude::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn within(outcome: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    if outcome.ok && elapsed > budget {
        fail(format!(
            "{} but took {:.1}s, budget {:.0}s",
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs_f64()
        ))
    } else {
        outcome
    }
}

fn triple_agreement() -> Outcome {
    let mut checked = 0u64;
    for p in primes_up_to(50) {
        let formula = Lengyel::new(Prime::new(p).unwrap()).unwrap();
        let rep = build_for_prime(p).unwrap();
        for n in 1..=5000u64 {
            let lengyel = formula.valuation(n).unwrap();
            let direct = formula.direct(n).unwrap();
            let matrix = rep.evaluate(n - 1);
            if direct != lengyel || matrix != BigInt::from(lengyel) {
                return fail(format!(
                    "p = {p}, n = {n}: direct {direct}, closed form {lengyel}, matrix {matrix}"
                ));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} (p, n) pairs agree"))
}

fn rank_is(p: u64, expected: usize) -> Outcome {
    let report = kernel_rank(p, &KernelConfig::default()).unwrap();
    let line = format!(
        "p = {p}: rank {} (expected {expected}), L = {}, stabilized = {}",
        report.rank, report.truncation_length, report.stabilized
    );
    if report.rank == expected && report.stabilized {
        pass(line)
    } else {
        fail(line)
    }
}

fn published_ranks() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (p, expected) in [(2, 5), (5, 2), (11, 11), (29, 15), (47, 17)] {
        let o = rank_is(p, expected);
        ok &= o.ok;
        lines.push(o.detail);
    }
    Outcome {
        ok,
        detail: lines.join("; "),
    }
}

fn bound_compliance(reports: &[RankReport]) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.stabilized || !r.within_bound())
        .map(|r| {
            format!(
                "p = {} rank {} bound {} stabilized {}",
                r.p, r.rank, r.theorem_bound, r.stabilized
            )
        })
        .collect();
    if bad.is_empty() {
        pass(format!(
            "{} primes <= 200 within their class bound",
            reports.len()
        ))
    } else {
        fail(bad.join("; "))
    }
}

fn conjecture(reports: &[RankReport]) -> Outcome {
    let considered: Vec<&RankReport> = reports.iter().filter(|r| !matches!(r.p, 2 | 5)).collect();
    let bad: Vec<String> = considered
        .iter()
        .filter(|r| r.conjecture_holds != Some(true))
        .map(|r| {
            format!(
                "p = {} rank {} alpha+1 = {} stabilized {}",
                r.p, r.rank, r.alpha_plus_one, r.stabilized
            )
        })
        .collect();
    if bad.is_empty() {
        pass(format!(
            "rank = alpha(p) + 1 for all {} primes 3 <= p <= 200, p != 5",
            considered.len()
        ))
    } else {
        fail(bad.join("; "))
    }
}

fn relation_suites() -> Outcome {
    let n_max = 2000;
    let mut total = 0;
    for p in [2u64, 11, 19, 29, 31, 13, 17, 37, 3, 7, 23, 43] {
        let reports = verify_relations(p, n_max).unwrap();
        if p == 2 && reports.len() != 10 {
            return fail(format!(
                "expected ten binary relations, got {}",
                reports.len()
            ));
        }
        for r in &reports {
            if !r.holds() {
                return fail(format!(
                    "p = {p}, {}: {} failures, first {:?}",
                    r.relation,
                    r.failures.len(),
                    r.failures[0]
                ));
            }
        }
        total += reports.len();
    }
    pass(format!("{total} relation reports empty for n <= {n_max}"))
}

fn digit_sum_examples() -> Outcome {
    let first = digit_sum_invariance_check(11, 31_411_600, 13_310);
    if !matches!(first, Ok(4)) {
        return fail(format!("31411600 vs 13310: {first:?}"));
    }
    // every ordering of the base-11 digits 1, 2, 8, 9
    let digits = [1u64, 2, 8, 9];
    let mut values = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let idx = [a, b, c, d];
                    let mut sorted = idx;
                    sorted.sort();
                    if sorted == [0, 1, 2, 3] {
                        let n = idx.iter().fold(0, |acc, &i| acc * 11 + digits[i]);
                        values.push(n);
                    }
                }
            }
        }
    }
    values.sort();
    if values.first() != Some(&1670) || values.last() != Some(&12_970) || values.len() != 24 {
        return fail(format!("unexpected permutation family {values:?}"));
    }
    for &n in &values {
        match digit_sum_invariance_check(11, 1670, n) {
            Ok(1) => {}
            other => return fail(format!("1670 vs {n}: {other:?}")),
        }
    }
    let v = lengyel_valuation(11, 31_411_600).unwrap();
    pass(format!(
        "nu_11(F_31411600) = nu_11(F_13310) = {v}; nu_11(F_n) = 1 for all 24 orderings 1670..12970"
    ))
}

fn monoid() -> Outcome {
    for p in [11u64, 19, 29] {
        let verdict = verify_monoid_structure(&build_thm14(p).unwrap()).unwrap();
        if !verdict.holds() || verdict.products_checked as u64 != (p - 1) * (p - 1) {
            return fail(format!("p = {p}: {verdict:?}"));
        }
    }
    pass("cyclic products and non-commutation hold for p = 11, 19, 29")
}

fn wall_scan() -> Outcome {
    let primes = primes_up_to(100_000);
    let bad: Vec<u64> = primes
        .par_iter()
        .filter(|&&p| {
            let r = wall_check(p).unwrap();
            !r.wall_negative || !r.is_consistent()
        })
        .copied()
        .collect();
    if bad.is_empty() {
        pass(format!(
            "all {} primes <= 10^5 have nu_p(F_alpha(p)) = 1 and pi(p^2) != pi(p)",
            primes.len()
        ))
    } else {
        fail(format!("counterexamples or inconsistencies at {bad:?}"))
    }
}

fn vinson() -> Outcome {
    let mut count = 0;
    for p in primes_up_to(10_000)
        .into_iter()
        .filter(|p| matches!(p % 20, 13 | 17))
    {
        let d = PeriodData::compute(p).unwrap();
        if 4 * d.restricted != d.pisano {
            return fail(format!("p = {p}: alpha {} pi {}", d.restricted, d.pisano));
        }
        count += 1;
    }
    pass(format!(
        "4 alpha(p) = pi(p) for all {count} primes <= 10^4 in 13,17 mod 20"
    ))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report =
        |id: &str, name: &str, f: &mut dyn FnMut() -> Outcome, budget: Option<Duration>| {
            let start = Instant::now();
            let mut outcome = f();
            let elapsed = start.elapsed();
            if let Some(budget) = budget {
                outcome = within(outcome, elapsed, budget);
            }
            all_ok &= outcome.ok;
            println!(
                "[{}] {id:>3} {name} ({:.1}s): {}",
                if outcome.ok { "PASS" } else { "FAIL" },
                elapsed.as_secs_f64(),
                outcome.detail
            );
        };
    let minute = Duration::from_secs(60);
    let ten_minutes = Duration::from_secs(600);

    report(
        "1",
        "triple-oracle agreement",
        &mut triple_agreement,
        Some(minute),
    );
    report("2", "published kernel ranks", &mut published_ranks, None);
    report(
        "2a",
        "rank for p = 113",
        &mut || rank_is(113, 20),
        Some(ten_minutes),
    );
    report(
        "2b",
        "rank for p = 233",
        &mut || rank_is(233, 14),
        Some(ten_minutes),
    );

    let start = Instant::now();
    let scan = conjecture_scan(200, &KernelConfig::default()).unwrap();
    println!(
        "        (rank scan over primes <= 200 took {:.1}s)",
        start.elapsed().as_secs_f64()
    );
    report(
        "3",
        "rank bound compliance",
        &mut || bound_compliance(&scan),
        None,
    );
    report("4", "rank = alpha(p) + 1", &mut || conjecture(&scan), None);

    report("5", "relation suites", &mut relation_suites, None);
    report("6", "digit-sum examples", &mut digit_sum_examples, None);
    report("7", "monoid structure", &mut monoid, None);
    report(
        "8",
        "Wall desk-scale scan",
        &mut wall_scan,
        Some(ten_minutes),
    );
    report(
        "9",
        "4 alpha(p) = pi(p) for 13,17 mod 20",
        &mut vinson,
        None,
    );

    if all_ok {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
