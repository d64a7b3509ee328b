use serde::{Deserialize, Serialize};

use super::systems::GeneratorSystem;
use super::{LinearRep, Provenance};
use crate::error::{Error, Result};
use crate::lengyel::Lengyel;
use crate::primes::{Prime, PrimeClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFailure {
    pub n: u64,
    /// Digit appended below `n`.
    pub digit: u64,
    /// Generator whose subsequence is expanded.
    pub generator: usize,
    pub lhs: i64,
    pub rhs: i64,
}

/// Outcome of checking one relation (or one family of relations) for all
/// `0 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub n_max: u64,
    pub cases: u64,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

type IndexFn = fn(u64) -> u64;

/// The ten relations of the rank-5 base-2 representation, one per
/// `(generator, digit)`, with both sides written as Fibonacci indices.
struct BinaryRelation {
    text: &'static str,
    generator: usize,
    digit: u64,
    lhs: IndexFn,
    rhs: &'static [(i64, IndexFn)],
}

const BINARY_RELATIONS: [BinaryRelation; 10] = [
    BinaryRelation {
        text: "v(F[(2n+0)+1]) = v(F[2n+1])",
        generator: 0,
        digit: 0,
        lhs: |n| 2 * n + 1,
        rhs: &[(1, |n| 2 * n + 1)],
    },
    BinaryRelation {
        text: "v(F[2(2n+0)+1]) = v(F[4n+1])",
        generator: 1,
        digit: 0,
        lhs: |n| 2 * (2 * n) + 1,
        rhs: &[(1, |n| 4 * n + 1)],
    },
    BinaryRelation {
        text: "v(F[(2(2n+0)+1)+1]) = 3 v(F[2n+1])",
        generator: 2,
        digit: 0,
        lhs: |n| (2 * (2 * n) + 1) + 1,
        rhs: &[(3, |n| 2 * n + 1)],
    },
    BinaryRelation {
        text: "v(F[4(2n+0)+1]) = v(F[2n+1])",
        generator: 3,
        digit: 0,
        lhs: |n| 4 * (2 * n) + 1,
        rhs: &[(1, |n| 2 * n + 1)],
    },
    BinaryRelation {
        text: "v(F[(4(2n+0)+2)+1]) = v(F[(4n+2)+1])",
        generator: 4,
        digit: 0,
        lhs: |n| (4 * (2 * n) + 2) + 1,
        rhs: &[(1, |n| (4 * n + 2) + 1)],
    },
    BinaryRelation {
        text: "v(F[(2n+1)+1]) = v(F[(2n+1)+1])",
        generator: 0,
        digit: 1,
        lhs: |n| (2 * n + 1) + 1,
        rhs: &[(1, |n| (2 * n + 1) + 1)],
    },
    BinaryRelation {
        text: "v(F[2(2n+1)+1]) = v(F[(4n+2)+1])",
        generator: 1,
        digit: 1,
        lhs: |n| 2 * (2 * n + 1) + 1,
        rhs: &[(1, |n| (4 * n + 2) + 1)],
    },
    BinaryRelation {
        text: "v(F[(2(2n+1)+1)+1]) = v(F[4n+1]) + v(F[(2n+1)+1])",
        generator: 2,
        digit: 1,
        lhs: |n| (2 * (2 * n + 1) + 1) + 1,
        rhs: &[(1, |n| 4 * n + 1), (1, |n| (2 * n + 1) + 1)],
    },
    BinaryRelation {
        text: "v(F[4(2n+1)+1]) = v(F[4n+1])",
        generator: 3,
        digit: 1,
        lhs: |n| 4 * (2 * n + 1) + 1,
        rhs: &[(1, |n| 4 * n + 1)],
    },
    BinaryRelation {
        text: "v(F[(4(2n+1)+2)+1]) = v(F[2n+1])",
        generator: 4,
        digit: 1,
        lhs: |n| (4 * (2 * n + 1) + 2) + 1,
        rhs: &[(1, |n| 2 * n + 1)],
    },
];

fn verify_binary(formula: &Lengyel, n_max: u64) -> Vec<RelationReport> {
    let v = |m: u64| formula.valuation_unchecked(m) as i64;
    BINARY_RELATIONS
        .iter()
        .map(|rel| {
            let failures = (0..=n_max)
                .filter_map(|n| {
                    let lhs = v((rel.lhs)(n));
                    let rhs = rel.rhs.iter().map(|&(c, f)| c * v(f(n))).sum();
                    (lhs != rhs).then_some(RelationFailure {
                        n,
                        digit: rel.digit,
                        generator: rel.generator,
                        lhs,
                        rhs,
                    })
                })
                .collect();
            RelationReport {
                relation: rel.text.to_string(),
                n_max,
                cases: n_max + 1,
                failures,
            }
        })
        .collect()
}

/// Checks every relation of `system` with both sides evaluated through
/// `value`, grouped by family.
fn verify_system(
    system: &GeneratorSystem,
    value: impl Fn(u64) -> i64,
    n_max: u64,
) -> Vec<RelationReport> {
    let p = system.base;
    let mut reports: Vec<RelationReport> = system
        .families()
        .iter()
        .map(|f| RelationReport {
            relation: f.to_string(),
            n_max,
            cases: 0,
            failures: Vec::new(),
        })
        .collect();
    for (gen, map) in system.generators.iter().enumerate() {
        for digit in 0..p {
            let rel = system.relation(gen, digit);
            let slot = system
                .families()
                .iter()
                .position(|f| *f == rel.family)
                .expect("family listed");
            let report = &mut reports[slot];
            for n in 0..=n_max {
                let lhs = value(map.at(p * n + digit));
                let rhs = rel
                    .terms
                    .iter()
                    .map(|&(t, c)| c * value(system.generators[t].at(n)))
                    .sum();
                report.cases += 1;
                if lhs != rhs {
                    report.failures.push(RelationFailure {
                        n,
                        digit,
                        generator: gen,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    for report in &mut reports {
        report.failures.sort_by_key(|f| (f.n, f.generator, f.digit));
    }
    reports
}

/// Checks, for `0 <= n <= n_max`, the relations among the generators chosen
/// for `p`'s class, evaluating both sides with the closed form. Relations
/// depending on `ν_p(F_α(p)) = 1` report failures if that fails.
pub fn verify_relations(p: u64, n_max: u64) -> Result<Vec<RelationReport>> {
    let prime = Prime::new(p)?;
    let formula = Lengyel::new(prime)?;
    let value = |m: u64| formula.valuation_unchecked(m) as i64;
    Ok(match prime.class() {
        PrimeClass::Two => verify_binary(&formula, n_max),
        PrimeClass::Five => verify_system(&GeneratorSystem::nu_k(5), value, n_max),
        PrimeClass::OneFourMod5 => verify_system(&GeneratorSystem::one_four(p), value, n_max),
        PrimeClass::ThirteenSeventeenMod20 => {
            let mut out = verify_system(&GeneratorSystem::thirteen_seventeen(p), value, n_max);
            out.extend(verify_system(&GeneratorSystem::two_three(p), value, n_max));
            out
        }
        PrimeClass::ThreeSevenMod20 => verify_system(&GeneratorSystem::two_three(p), value, n_max),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidVerdict {
    pub p: u64,
    pub products_checked: usize,
    /// `(i, j)` with `M_i M_j != M_{(i+j) mod (p-1)}`.
    pub product_failures: Vec<(u64, u64)>,
    /// `i <= p-2` with `M_i M_{p-1} = M_{p-1} M_i`.
    pub commuting_with_last: Vec<u64>,
}

impl MonoidVerdict {
    pub fn holds(&self) -> bool {
        self.product_failures.is_empty() && self.commuting_with_last.is_empty()
    }
}

/// For the `p ≡ 1, 4 (mod 5)` construction: `M_0, …, M_{p-2}` form a cyclic
/// group under `M_i M_j = M_{(i+j) mod (p-1)}`, and `M_{p-1}` commutes with
/// none of them.
pub fn verify_monoid_structure(rep: &LinearRep) -> Result<MonoidVerdict> {
    if rep.provenance() != Provenance::Thm14 {
        return Err(Error::InvalidArgument(format!(
            "monoid structure applies to the 1,4 mod 5 construction, got {:?}",
            rep.provenance()
        )));
    }
    let p = rep.base();
    let cyclic = p - 1;
    let last = rep.matrix(p - 1);
    let mut verdict = MonoidVerdict {
        p,
        products_checked: 0,
        product_failures: Vec::new(),
        commuting_with_last: Vec::new(),
    };
    for i in 0..cyclic {
        let mi = rep.matrix(i);
        for j in 0..cyclic {
            verdict.products_checked += 1;
            if mi.mul(rep.matrix(j)) != *rep.matrix((i + j) % cyclic) {
                verdict.product_failures.push((i, j));
            }
        }
        if mi.mul(last) == last.mul(mi) {
            verdict.commuting_with_last.push(i);
        }
    }
    Ok(verdict)
}
