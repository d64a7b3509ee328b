//! Closed form for `ν_p(F_n)` (Lengyel), the modular oracle it is checked
//! against, digit-sum invariance and the Wall predicate.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::digits::to_digits;
use crate::error::{Error, Result};
use crate::fib::{fib_pair_mod, fib_pair_mod_big, nu_big, nu_unchecked};
use crate::periods::{pisano_period_prime_square, restricted_period, PeriodData};
use crate::primes::{Prime, PrimeClass};

/// `ν_p(F_n)` if it is smaller than `k`, from `F_n mod p^k`; `None` when
/// `p^k | F_n`.
pub fn fib_valuation_below(p: Prime, n: u64, k: u32) -> Option<u32> {
    let p = p.get();
    match p.checked_pow(k) {
        Some(modulus) => {
            let residue = fib_pair_mod(n, modulus).0;
            (residue != 0).then(|| nu_unchecked(p, residue))
        }
        None => {
            let modulus = BigUint::from(p).pow(k);
            let residue = fib_pair_mod_big(n, &modulus).0;
            (!residue.is_zero()).then(|| nu_big(p, &residue).expect("nonzero residue"))
        }
    }
}

/// `ν_p(F_n)` for `n >= 1` by increasing the precision `p^k` until the
/// residue is nonzero.
fn valuation_from(p: Prime, n: u64, mut k: u32) -> u32 {
    debug_assert!(n >= 1);
    loop {
        if let Some(v) = fib_valuation_below(p, n, k) {
            return v;
        }
        k = k.saturating_mul(2);
    }
}

/// Precomputed data for the closed form of `ν_p(F_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lengyel {
    p: Prime,
    alpha: u64,
    val_at_alpha: u32,
}

impl Lengyel {
    pub fn new(p: Prime) -> Result<Self> {
        let alpha = restricted_period(p.get())?;
        let val_at_alpha = valuation_from(p, alpha, 3);
        Ok(Lengyel {
            p,
            alpha,
            val_at_alpha,
        })
    }

    /// The same formula with `ν_p(F_α(p))` replaced by `val_at_alpha`.
    ///
    /// With `val_at_alpha = 1` this is the sequence `b` used to build
    /// representations without assuming anything about Wall's question.
    pub fn with_val_at_alpha(&self, val_at_alpha: u32) -> Self {
        Lengyel {
            val_at_alpha,
            ..*self
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn val_at_alpha(&self) -> u32 {
        self.val_at_alpha
    }

    pub fn wall_negative(&self) -> bool {
        self.val_at_alpha == 1
    }

    pub fn valuation(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.valuation_unchecked(n))
    }

    #[inline]
    pub(crate) fn valuation_unchecked(&self, n: u64) -> u32 {
        let p = self.p.get();
        match p {
            2 => match n % 6 {
                0 => n.trailing_zeros() + 2,
                3 => 1,
                _ => 0,
            },
            5 => nu_unchecked(5, n),
            _ => {
                if n.is_multiple_of(self.alpha) {
                    nu_unchecked(p, n) + self.val_at_alpha
                } else {
                    0
                }
            }
        }
    }

    /// Modular oracle for the same quantity, with precision seeded from the
    /// cached `ν_p(F_α(p))`.
    pub fn direct(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let k = nu_unchecked(self.p.get(), n) + self.val_at_alpha + 4;
        Ok(valuation_from(self.p, n, k))
    }
}

pub fn lengyel_valuation(p: u64, n: u64) -> Result<u32> {
    Lengyel::new(Prime::new(p)?)?.valuation(n)
}

/// `ν_p(F_n)` from `F_n mod p^K`, `K = ν_p(n) + ν_p(F_α(p)) + 4`, escalating
/// `K` if the residue vanishes.
pub fn direct_valuation(p: u64, n: u64) -> Result<u32> {
    let p = Prime::new(p)?;
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let alpha = restricted_period(p.get())?;
    let val_at_alpha = valuation_from(p, alpha, 3);
    let k = nu_unchecked(p.get(), n) + val_at_alpha + 4;
    Ok(valuation_from(p, n, k))
}

/// Checks that `ν_p(F_n) = ν_p(F_m)` for `p ≡ 1, 4 (mod 5)` when `n` and `m`
/// have the same number of trailing zeros in base `p` and digit sums that
/// agree modulo `α(p)`. Returns the common valuation.
pub fn digit_sum_invariance_check(p: u64, n: u64, m: u64) -> Result<u32> {
    let prime = Prime::new(p)?;
    if prime.class() != PrimeClass::OneFourMod5 {
        return Err(Error::WrongClass {
            p,
            actual: prime.class(),
            expected: "1,4 mod 5",
        });
    }
    if n == 0 || m == 0 {
        return Err(Error::ZeroArgument);
    }
    let formula = Lengyel::new(prime)?;
    let (dn, dm) = (to_digits(n, p)?, to_digits(m, p)?);
    let mut failed = Vec::new();
    if dn.trailing_zeros() != dm.trailing_zeros() {
        failed.push(format!(
            "trailing zeros differ ({} vs {})",
            dn.trailing_zeros(),
            dm.trailing_zeros()
        ));
    }
    let alpha = formula.alpha();
    if dn.digit_sum() % alpha != dm.digit_sum() % alpha {
        failed.push(format!(
            "digit sums differ mod alpha({p}) = {alpha} ({} vs {})",
            dn.digit_sum(),
            dm.digit_sum()
        ));
    }
    if !failed.is_empty() {
        return Err(Error::Precondition(failed.join("; ")));
    }
    let lhs = formula.valuation_unchecked(n);
    let rhs = formula.valuation_unchecked(m);
    if lhs != rhs {
        return Err(Error::InvarianceViolated { p, n, m, lhs, rhs });
    }
    Ok(lhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallReport {
    pub p: u64,
    pub alpha: u64,
    /// `ν_p(F_α(p))`
    pub val_at_alpha: u32,
    pub pi_p: u64,
    pub pi_p2: u64,
    /// `ν_p(F_α(p)) = 1`
    pub wall_negative: bool,
}

impl WallReport {
    /// Whether `wall_negative` agrees with `π(p²) != π(p)`.
    pub fn is_consistent(&self) -> bool {
        self.wall_negative == (self.pi_p2 != self.pi_p)
    }
}

pub fn wall_check(p: u64) -> Result<WallReport> {
    let prime = Prime::new(p)?;
    let periods = PeriodData::compute(p)?;
    let val_at_alpha = valuation_from(prime, periods.restricted, 3);
    let pi_p2 = pisano_period_prime_square(prime)?;
    Ok(WallReport {
        p,
        alpha: periods.restricted,
        val_at_alpha,
        pi_p: periods.pisano,
        pi_p2,
        wall_negative: val_at_alpha == 1,
    })
}
