use num_integer::Integer;

use super::systems::GeneratorSystem;
use super::{LinearRep, Provenance};
use crate::error::{Error, Result};
use crate::fib::nu_unchecked;
use crate::lengyel::Lengyel;
use crate::linalg::IntMatrix;
use crate::primes::{Prime, PrimeClass};

/// Rank-2 representation of `ν_k(n+1)` for any base `k >= 2`.
pub fn build_nu_k(k: u64) -> Result<LinearRep> {
    if k < 2 {
        return Err(Error::InvalidBase(k));
    }
    let system = GeneratorSystem::nu_k(k);
    let kappa = system.initial_terms(|m| nu_unchecked(k, m) as i64);
    LinearRep::new(
        k,
        system.matrices(),
        vec![1, 0],
        kappa,
        Provenance::NuKPlusOne,
    )
}

/// The rank-5 representation of `ν_2(F_{n+1})` with generators
/// `ν_2(F_{n+1}), ν_2(F_{2n+1}), ν_2(F_{(2n+1)+1}), ν_2(F_{4n+1}),
/// ν_2(F_{(4n+2)+1})`.
pub fn build_p2() -> LinearRep {
    let (m0, m1) = p2_matrices();
    // first terms: ν_2(F_1), ν_2(F_1), ν_2(F_2), ν_2(F_1), ν_2(F_3)
    let kappa = vec![0, 0, 0, 0, 1];
    LinearRep::new(
        2,
        vec![m0, m1],
        vec![1, 0, 0, 0, 0],
        kappa,
        Provenance::PeqTwo,
    )
    .expect("fixed shapes")
}

pub(crate) fn p2_matrices() -> (IntMatrix, IntMatrix) {
    let m0 = IntMatrix::from_rows(&[
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0],
        vec![0, 3, 0, 0, 0],
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 1],
    ])
    .expect("square");
    let m1 = IntMatrix::from_rows(&[
        vec![0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 1, 1, 0],
        vec![0, 0, 0, 1, 0],
        vec![0, 1, 0, 0, 0],
    ])
    .expect("square");
    (m0, m1)
}

/// `ν_5(F_{n+1}) = ν_5(n+1)`, so this is [`build_nu_k`] for base 5.
pub fn build_p5() -> LinearRep {
    build_nu_k(5)
        .expect("base 5")
        .with_provenance(Provenance::PeqFive)
}

fn require_class(p: Prime, ok: bool, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongClass {
            p: p.get(),
            actual: p.class(),
            expected,
        })
    }
}

fn require_wall_negative(formula: &Lengyel) -> Result<()> {
    if formula.wall_negative() {
        Ok(())
    } else {
        Err(Error::WallHypothesis {
            p: formula.prime().get(),
            val_at_alpha: formula.val_at_alpha(),
        })
    }
}

/// Representation of the closed form with `ν_p(F_α(p))` taken as 1, i.e. of
/// `b(n) = [α(p) | n+1] (ν_p(n+1) + 1)`.
fn system_rep(system: &GeneratorSystem, formula: &Lengyel, provenance: Provenance) -> LinearRep {
    let normalized = formula.with_val_at_alpha(1);
    let kappa = system.initial_terms(|m| normalized.valuation_unchecked(m) as i64);
    let mut lambda = vec![0; system.dimension()];
    lambda[0] = 1;
    LinearRep::new(system.base, system.matrices(), lambda, kappa, provenance)
        .expect("generator systems produce consistent shapes")
}

/// The `p × p` matrices in the patterned form they are usually displayed in:
/// for `i <= p-2` rows `1..p-1` are a cyclic shift by `i` of the identity on
/// columns `1..p-1` and row 0 repeats row 1; `M_{p-1}` is the identity with an
/// extra 1 at row 0, column 1.
pub fn displayed_one_four_matrices(p: u64) -> Vec<IntMatrix> {
    let r = p as usize;
    let mut out = Vec::with_capacity(r);
    for i in 0..r - 1 {
        let mut m = IntMatrix::zeros(r, r);
        for row in 1..r {
            m[(row, 1 + (row - 1 + i) % (r - 1))] = 1;
        }
        m[(0, 1 + i)] = 1;
        out.push(m);
    }
    let mut last = IntMatrix::identity(r);
    last[(0, 1)] = 1;
    out.push(last);
    out
}

/// `p ≡ 1, 4 (mod 5)` with `ν_p(F_α(p)) = 1`: the `p`-dimensional
/// representation with generators `ν_p(F_{n+1})`, `ν_p(F_{pn+j+1})`.
pub fn build_thm14(p: u64) -> Result<LinearRep> {
    let prime = Prime::new(p)?;
    require_class(prime, prime.class() == PrimeClass::OneFourMod5, "1,4 mod 5")?;
    let formula = Lengyel::new(prime)?;
    require_wall_negative(&formula)?;
    Ok(one_four_rep(&formula))
}

fn one_four_rep(formula: &Lengyel) -> LinearRep {
    let p = formula.prime().get();
    let system = GeneratorSystem::one_four(p);
    let rep = system_rep(&system, formula, Provenance::Thm14);
    // the patterned matrices must encode the same relations
    assert_eq!(
        rep.matrices(),
        displayed_one_four_matrices(p).as_slice(),
        "relation rows disagree with the displayed matrices for p = {p}"
    );
    rep
}

/// `p ≡ 13, 17 (mod 20)` with `ν_p(F_α(p)) = 1`: dimension `(p+3)/2`.
pub fn build_thm1317(p: u64) -> Result<LinearRep> {
    let prime = Prime::new(p)?;
    require_class(
        prime,
        prime.class() == PrimeClass::ThirteenSeventeenMod20,
        "13,17 mod 20",
    )?;
    let formula = Lengyel::new(prime)?;
    require_wall_negative(&formula)?;
    Ok(system_rep(
        &GeneratorSystem::thirteen_seventeen(p),
        &formula,
        Provenance::Thm1317,
    ))
}

/// `p ≡ 2, 3 (mod 5)`, `p != 2`, with `ν_p(F_α(p)) = 1`: dimension `p+2`.
pub fn build_thm23(p: u64) -> Result<LinearRep> {
    let prime = Prime::new(p)?;
    require_class(
        prime,
        prime.class().is_two_three_mod5(),
        "2,3 mod 5 (p != 2)",
    )?;
    let formula = Lengyel::new(prime)?;
    require_wall_negative(&formula)?;
    Ok(system_rep(
        &GeneratorSystem::two_three(p),
        &formula,
        Provenance::Thm23,
    ))
}

/// `modulus`-dimensional representation in base `base` of
/// `a(n) = [modulus | n+1]`. The state is the residue of `n` modulo
/// `modulus`; needs `gcd(base, modulus) = 1`.
pub fn build_residue_indicator(base: u64, modulus: u64) -> Result<LinearRep> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    if modulus == 0 {
        return Err(Error::InvalidModulus(modulus));
    }
    let m = modulus as i128;
    let gcd = (base as i128).extended_gcd(&m);
    if gcd.gcd != 1 {
        return Err(Error::InvalidArgument(format!(
            "base {base} is not invertible modulo {modulus}"
        )));
    }
    let inverse = gcd.x.rem_euclid(m);
    let r = modulus as usize;
    // [n ≡ s] at p·n + i equals [n ≡ p⁻¹(s - i)]
    let matrices = (0..base)
        .map(|i| {
            let mut mat = IntMatrix::zeros(r, r);
            for s in 0..r {
                let target = ((s as i128 - i as i128) * inverse).rem_euclid(m);
                mat[(s, target as usize)] = 1;
            }
            mat
        })
        .collect();
    let mut lambda = vec![0; r];
    lambda[r - 1] = 1;
    let mut kappa = vec![0; r];
    kappa[0] = 1;
    LinearRep::new(base, matrices, lambda, kappa, Provenance::Empirical)
}

/// Unconditional representation of `ν_p(F_{n+1})` for `p != 2, 5`:
/// `b(n) + (ν_p(F_α(p)) - 1) · [α(p) | n+1]` as a block sum. For 2 and 5 this
/// returns [`build_p2`] and [`build_p5`], which need no hypothesis.
pub fn build_general(p: u64) -> Result<LinearRep> {
    let prime = Prime::new(p)?;
    build_general_for(&Lengyel::new(prime)?)
}

/// [`build_general`] for the closed form described by `formula`, which may
/// carry a hypothetical `ν_p(F_α(p))`.
pub fn build_general_for(formula: &Lengyel) -> Result<LinearRep> {
    let p = formula.prime();
    let b = match p.class() {
        PrimeClass::Two => return Ok(build_p2()),
        PrimeClass::Five => return Ok(build_p5()),
        PrimeClass::OneFourMod5 => one_four_rep(formula),
        PrimeClass::ThirteenSeventeenMod20 => system_rep(
            &GeneratorSystem::thirteen_seventeen(p.get()),
            formula,
            Provenance::Thm1317,
        ),
        PrimeClass::ThreeSevenMod20 => system_rep(
            &GeneratorSystem::two_three(p.get()),
            formula,
            Provenance::Thm23,
        ),
    };
    let indicator = build_residue_indicator(p.get(), formula.alpha())?;
    b.direct_sum(&indicator, formula.val_at_alpha() as i64 - 1)
}

/// The class-specific representation of `ν_p(F_{n+1})`, or
/// [`build_general`] when `ν_p(F_α(p)) != 1`.
pub fn build_for_prime(p: u64) -> Result<LinearRep> {
    let prime = Prime::new(p)?;
    match prime.class() {
        PrimeClass::Two => return Ok(build_p2()),
        PrimeClass::Five => return Ok(build_p5()),
        _ => {}
    }
    let formula = Lengyel::new(prime)?;
    if !formula.wall_negative() {
        return build_general_for(&formula);
    }
    Ok(match prime.class() {
        PrimeClass::OneFourMod5 => one_four_rep(&formula),
        PrimeClass::ThirteenSeventeenMod20 => system_rep(
            &GeneratorSystem::thirteen_seventeen(p),
            &formula,
            Provenance::Thm1317,
        ),
        _ => system_rep(&GeneratorSystem::two_three(p), &formula, Provenance::Thm23),
    })
}
