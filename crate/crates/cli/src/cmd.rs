use std::io::{self, Write};
use std::path::PathBuf;

use fibreg::rep::{
    build_for_prime, build_thm14, verify_monoid_structure, verify_relations, RelationReport,
};
use fibreg::{
    conjecture_scan, digit_sum_invariance_check, kernel_rank, primes_up_to, to_digits, wall_check,
    write_rank_csv, Digits, Error, KernelConfig, Lengyel, LinearRep, PeriodData, Prime, PrimeClass,
    RankReport, Result, WallReport,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::{Exit, Method, OutputFormat};

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn csv_writer() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

fn csv_rows<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> Result<()> {
    let mut w = csv_writer();
    let io_err = |e: csv::Error| Error::InvalidArgument(format!("writing csv: {e}"));
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("writing csv: {e}")))?;
    Ok(())
}

pub fn valuation(p: u64, n: u64, method: Method, format: Option<OutputFormat>) -> Result<Exit> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let formula = Lengyel::new(Prime::new(p)?)?;
    let format = format.unwrap_or(OutputFormat::Human);
    if method != Method::All {
        let value = match method {
            Method::Direct => BigInt::from(formula.direct(n)?),
            Method::Lengyel => BigInt::from(formula.valuation(n)?),
            _ => build_for_prime(p)?.evaluate(n - 1),
        };
        let name = match method {
            Method::Direct => "direct",
            Method::Lengyel => "lengyel",
            _ => "matrix",
        };
        match format {
            OutputFormat::Human => println!("{value}"),
            OutputFormat::Json => print_json(&json!({
                "p": p, "n": n, "method": name, "value": value.to_string(),
            })),
            OutputFormat::Csv => csv_rows(
                ["p", "n", "method", "value"],
                &[[
                    p.to_string(),
                    n.to_string(),
                    name.to_string(),
                    value.to_string(),
                ]],
            )?,
        }
        return Ok(Exit::Success);
    }

    let direct = formula.direct(n)?;
    let lengyel = formula.valuation(n)?;
    let matrix = build_for_prime(p)?.evaluate(n - 1);
    let agree = direct == lengyel && matrix == BigInt::from(lengyel);
    let flag = if agree { "MATCH" } else { "MISMATCH" };
    match format {
        OutputFormat::Human => println!("{direct}, {lengyel}, {matrix}, {flag}"),
        OutputFormat::Json => print_json(&json!({
            "p": p, "n": n, "direct": direct, "lengyel": lengyel,
            "matrix": matrix.to_string(), "match": agree,
        })),
        OutputFormat::Csv => csv_rows(
            ["p", "n", "direct", "lengyel", "matrix", "match"],
            &[[
                p.to_string(),
                n.to_string(),
                direct.to_string(),
                lengyel.to_string(),
                matrix.to_string(),
                agree.to_string(),
            ]],
        )?,
    }
    Ok(if agree {
        Exit::Success
    } else {
        Exit::Verification
    })
}

pub fn periods(m: u64, format: Option<OutputFormat>) -> Result<Exit> {
    let d = PeriodData::compute(m)?;
    let divides = d.restricted_divides_pisano();
    match format.unwrap_or(OutputFormat::Human) {
        OutputFormat::Human => println!(
            "m={} alpha={} pi={} alpha_divides_pi={divides}",
            d.modulus, d.restricted, d.pisano
        ),
        OutputFormat::Json => print_json(&json!({
            "modulus": d.modulus, "alpha": d.restricted, "pisano": d.pisano,
            "alpha_divides_pi": divides,
        })),
        OutputFormat::Csv => csv_rows(
            ["modulus", "alpha", "pisano", "alpha_divides_pi"],
            &[[
                d.modulus.to_string(),
                d.restricted.to_string(),
                d.pisano.to_string(),
                divides.to_string(),
            ]],
        )?,
    }
    Ok(if divides {
        Exit::Success
    } else {
        Exit::Verification
    })
}

/// First `n` in `1..=n_max` where the representation disagrees with the
/// closed form, if any.
fn evaluation_mismatch(rep: &LinearRep, n_max: u64) -> Result<Option<u64>> {
    let formula = Lengyel::new(Prime::new(rep.base())?)?;
    for n in 1..=n_max {
        if rep.evaluate(n - 1) != BigInt::from(formula.valuation(n)?) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn print_rep(rep: &LinearRep) {
    println!(
        "p={} rank={} provenance={:?}",
        rep.base(),
        rep.rank(),
        rep.provenance()
    );
    for (i, m) in rep.matrices().iter().enumerate() {
        println!("M_{i} =\n{m}");
    }
    println!("lambda = {:?}", rep.lambda());
    println!("kappa  = {:?}", rep.kappa());
}

pub fn rep(
    p: Option<u64>,
    out: Option<PathBuf>,
    load: Option<PathBuf>,
    n_max: u64,
    format: Option<OutputFormat>,
) -> Result<Exit> {
    let rep = match (&load, p) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            LinearRep::from_json(&text)?
        }
        (None, Some(p)) => {
            let formula = Lengyel::new(Prime::new(p)?)?;
            if !formula.wall_negative() {
                eprintln!(
                    "notice: nu_{p}(F_alpha) = {} != 1, using the general construction",
                    formula.val_at_alpha()
                );
            }
            build_for_prime(p)?
        }
        (None, None) => {
            return Err(Error::InvalidArgument(
                "a prime or --load FILE is required".into(),
            ))
        }
    };
    if let Some(path) = &out {
        std::fs::write(path, rep.to_json()?)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    }

    let relations = if load.is_none() {
        verify_relations(rep.base(), n_max)?
    } else {
        Vec::new()
    };
    let mismatch = evaluation_mismatch(&rep, n_max)?;
    let ok = mismatch.is_none() && relations.iter().all(RelationReport::holds);

    match format.unwrap_or(OutputFormat::Human) {
        OutputFormat::Human => {
            print_rep(&rep);
            print_relations(&relations);
            match mismatch {
                None => println!("PASS evaluation matches the closed form for n <= {n_max}"),
                Some(n) => println!("FAIL evaluation differs from the closed form at n = {n}"),
            }
        }
        OutputFormat::Json => {
            let rep_value: serde_json::Value = serde_json::from_str(&rep.to_json()?)?;
            print_json(&json!({
                "rep": rep_value,
                "relations": relation_summaries(&relations),
                "evaluation_mismatch": mismatch,
                "n_max": n_max,
            }))
        }
        OutputFormat::Csv => csv_rows(
            ["relation", "cases", "failures"],
            &relation_rows(&relations, mismatch, n_max),
        )?,
    }
    Ok(if ok {
        Exit::Success
    } else {
        Exit::Verification
    })
}

fn print_relations(relations: &[RelationReport]) {
    for r in relations {
        let verdict = if r.holds() { "PASS" } else { "FAIL" };
        print!("{verdict} {} ({} cases)", r.relation, r.cases);
        match r.failures.first() {
            Some(f) => println!(
                ": {} failures, first at n = {}, digit {}, generator {}: {} != {}",
                r.failures.len(),
                f.n,
                f.digit,
                f.generator,
                f.lhs,
                f.rhs
            ),
            None => println!(),
        }
    }
}

fn relation_summaries(relations: &[RelationReport]) -> serde_json::Value {
    relations
        .iter()
        .map(|r| {
            json!({
                "relation": r.relation,
                "cases": r.cases,
                "failures": r.failures.len(),
            })
        })
        .collect()
}

fn relation_rows(
    relations: &[RelationReport],
    mismatch: Option<u64>,
    n_max: u64,
) -> Vec<[String; 3]> {
    let mut rows: Vec<[String; 3]> = relations
        .iter()
        .map(|r| {
            [
                r.relation.clone(),
                r.cases.to_string(),
                r.failures.len().to_string(),
            ]
        })
        .collect();
    rows.push([
        "evaluation".to_string(),
        n_max.to_string(),
        usize::from(mismatch.is_some()).to_string(),
    ]);
    rows
}

pub fn rank(
    p: Option<u64>,
    scan: Option<u64>,
    config: &KernelConfig,
    format: Option<OutputFormat>,
) -> Result<Exit> {
    let reports = match (p, scan) {
        (Some(p), _) => vec![kernel_rank(p, config)?],
        (None, Some(p_max)) => {
            if p_max < 3 {
                return Err(Error::InvalidArgument("--scan needs p_max >= 3".into()));
            }
            conjecture_scan(p_max, config)?
        }
        (None, None) => {
            return Err(Error::InvalidArgument(
                "a prime or --scan P_MAX is required".into(),
            ))
        }
    };
    for r in reports.iter().filter(|r| !r.stabilized) {
        eprintln!(
            "warning: p = {} did not stabilize ({:?}); raise --L or --max-depth",
            r.p, r.ranks_by_truncation
        );
    }
    match format.unwrap_or(OutputFormat::Human) {
        OutputFormat::Human => {
            for r in &reports {
                print_rank(r);
            }
        }
        OutputFormat::Json => print_json(&serde_json::to_value(&reports)?),
        OutputFormat::Csv => write_rank_csv(&reports, io::stdout())
            .map_err(|e| Error::InvalidArgument(format!("writing csv: {e}")))?,
    }
    let violation = reports
        .iter()
        .any(|r| r.violates_bound() || (r.stabilized && r.conjecture_holds == Some(false)));
    Ok(if violation {
        Exit::Violation
    } else {
        Exit::Success
    })
}

fn print_rank(r: &RankReport) {
    let conjecture = match r.conjecture_holds {
        Some(b) => b.to_string(),
        None => "n/a".to_string(),
    };
    println!(
        "p={} class={} alpha={} rank={} bound={} conjecture_holds={conjecture} L={} stabilized={}",
        r.p, r.class, r.alpha, r.rank, r.theorem_bound, r.truncation_length, r.stabilized
    );
}

const WALL_HEADER: [&str; 6] = [
    "p",
    "alpha",
    "val_at_alpha",
    "pi_p",
    "pi_p2",
    "wall_negative",
];

fn wall_row(r: &WallReport) -> [String; 6] {
    [
        r.p.to_string(),
        r.alpha.to_string(),
        r.val_at_alpha.to_string(),
        r.pi_p.to_string(),
        r.pi_p2.to_string(),
        r.wall_negative.to_string(),
    ]
}

pub fn wall(p: Option<u64>, scan: Option<u64>, format: Option<OutputFormat>) -> Result<Exit> {
    let primes = match (p, scan) {
        (Some(p), _) => vec![Prime::new(p)?.get()],
        (None, Some(p_max)) => {
            if p_max < 2 {
                return Err(Error::InvalidArgument("--scan needs p_max >= 2".into()));
            }
            primes_up_to(p_max)
        }
        (None, None) => {
            return Err(Error::InvalidArgument(
                "a prime or --scan P_MAX is required".into(),
            ))
        }
    };
    let reports = primes
        .par_iter()
        .map(|&p| wall_check(p))
        .collect::<Result<Vec<_>>>()?;
    match format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let rows: Vec<_> = reports.iter().map(wall_row).collect();
            csv_rows(WALL_HEADER, &rows)?;
        }
        OutputFormat::Json => print_json(&serde_json::to_value(&reports)?),
        OutputFormat::Human => {
            let counter: Vec<u64> = reports
                .iter()
                .filter(|r| !r.wall_negative)
                .map(|r| r.p)
                .collect();
            if counter.is_empty() {
                println!("{} primes checked, all wall_negative=true", reports.len());
            } else {
                println!("wall_negative=false for p in {counter:?}");
            }
        }
    }
    let inconsistent: Vec<u64> = reports
        .iter()
        .filter(|r| !r.is_consistent())
        .map(|r| r.p)
        .collect();
    if !inconsistent.is_empty() {
        eprintln!("error: nu_p(F_alpha) and pi(p^2) disagree for p in {inconsistent:?}");
        return Ok(Exit::Verification);
    }
    if reports.iter().any(|r| !r.wall_negative) {
        eprintln!("counterexample found: see rows with wall_negative=false");
        return Ok(Exit::Violation);
    }
    Ok(Exit::Success)
}

/// Draws a random `n` and a reordering `m` of its nonzero-position digits:
/// the trailing zeros stay in place, so both the trailing zero count and the
/// digit sum are shared.
fn digit_shuffle(p: u64, rng: &mut ChaCha8Rng) -> Option<(u64, u64)> {
    let n = rng.gen_range(1..=u64::from(u32::MAX));
    let d = to_digits(n, p).ok()?;
    let tz = d.trailing_zeros();
    let mut digits = d.digits().to_vec();
    digits[tz..].shuffle(rng);
    if digits[tz] == 0 {
        return None;
    }
    let m = Digits::from_digits(p, &digits).ok()?;
    Some((n, m.value()))
}

pub fn verify(
    p: u64,
    n_max: u64,
    samples: usize,
    seed: u64,
    format: Option<OutputFormat>,
) -> Result<Exit> {
    let prime = Prime::new(p)?;
    if n_max == 0 {
        return Err(Error::ZeroArgument);
    }
    let relations = verify_relations(p, n_max)?;

    let formula = Lengyel::new(prime)?;
    let rep = build_for_prime(p)?;
    let sweep_failure = (1..=n_max).find(|&n| {
        let l = formula.valuation(n).ok();
        l.is_none()
            || formula.direct(n).ok() != l
            || rep.evaluate(n - 1) != BigInt::from(l.unwrap())
    });

    let monoid = if prime.class() == PrimeClass::OneFourMod5 {
        Some(verify_monoid_structure(&build_thm14(p)?)?)
    } else {
        None
    };

    let mut digit_failures = Vec::new();
    let mut digit_checked = 0usize;
    if samples > 0 && prime.class() == PrimeClass::OneFourMod5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while digit_checked < samples {
            let Some((n, m)) = digit_shuffle(p, &mut rng) else {
                continue;
            };
            digit_checked += 1;
            if let Err(e) = digit_sum_invariance_check(p, n, m) {
                digit_failures.push(format!("{n} vs {m}: {e}"));
            }
        }
    }

    let ok = relations.iter().all(RelationReport::holds)
        && sweep_failure.is_none()
        && monoid.as_ref().is_none_or(|m| m.holds())
        && digit_failures.is_empty();

    match format.unwrap_or(OutputFormat::Human) {
        OutputFormat::Human => {
            print_relations(&relations);
            match sweep_failure {
                None => println!("PASS direct = closed form = matrix for n <= {n_max}"),
                Some(n) => println!("FAIL three-way sweep disagrees at n = {n}"),
            }
            if let Some(m) = &monoid {
                let verdict = if m.holds() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} monoid structure ({} products, {} failures, {} commute with M_{})",
                    m.products_checked,
                    m.product_failures.len(),
                    m.commuting_with_last.len(),
                    p - 1
                );
            }
            if digit_checked > 0 {
                let verdict = if digit_failures.is_empty() {
                    "PASS"
                } else {
                    "FAIL"
                };
                println!("{verdict} digit-sum invariance ({digit_checked} samples, seed {seed})");
                for f in &digit_failures {
                    println!("  {f}");
                }
            }
        }
        OutputFormat::Json => print_json(&json!({
            "p": p,
            "n_max": n_max,
            "relations": relation_summaries(&relations),
            "sweep_failure": sweep_failure,
            "monoid": monoid,
            "digit_sum": { "samples": digit_checked, "seed": seed, "failures": digit_failures },
            "ok": ok,
        })),
        OutputFormat::Csv => {
            let mut rows = relation_rows(&relations, sweep_failure, n_max);
            if let Some(m) = &monoid {
                rows.push([
                    "monoid".to_string(),
                    m.products_checked.to_string(),
                    (m.product_failures.len() + m.commuting_with_last.len()).to_string(),
                ]);
            }
            if digit_checked > 0 {
                rows.push([
                    "digit-sum".to_string(),
                    digit_checked.to_string(),
                    digit_failures.len().to_string(),
                ]);
            }
            csv_rows(["check", "cases", "failures"], &rows)?;
        }
    }
    io::stdout().flush().ok();
    Ok(if ok {
        Exit::Success
    } else {
        Exit::Verification
    })
}
