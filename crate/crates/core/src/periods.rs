//! Pisano period `π(m)` and restricted period (rank of apparition) `α(m)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fib::fib_pair_mod;
use crate::primes::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodData {
    pub modulus: u64,
    /// `π(m)`
    pub pisano: u64,
    /// `α(m)`
    pub restricted: u64,
}

impl PeriodData {
    /// Both periods from one scan of the residue pairs `(F_t, F_{t+1}) mod m`.
    pub fn compute(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        let (mut a, mut b) = (0u64, 1u64);
        let mut restricted = 0;
        let mut t = 0u64;
        loop {
            // (a, b) <- (b, a + b) without overflowing for m near u64::MAX
            let c = if b >= m - a { b - (m - a) } else { a + b };
            a = b;
            b = c;
            t += 1;
            if a == 0 {
                if restricted == 0 {
                    restricted = t;
                }
                if b == 1 {
                    return Ok(PeriodData {
                        modulus: m,
                        pisano: t,
                        restricted,
                    });
                }
            }
        }
    }

    pub fn restricted_divides_pisano(&self) -> bool {
        self.pisano.is_multiple_of(self.restricted)
    }
}

/// `α(m)`: the least `n >= 1` with `m | F_n`.
pub fn restricted_period(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let (mut a, mut b) = (1u64, 1u64);
    let mut n = 1u64;
    while a != 0 {
        let c = if b >= m - a { b - (m - a) } else { a + b };
        a = b;
        b = c;
        n += 1;
    }
    Ok(n)
}

/// `π(m)`: the least `t >= 1` with `(F_t, F_{t+1}) ≡ (0, 1) (mod m)`.
pub fn pisano_period(m: u64) -> Result<u64> {
    Ok(PeriodData::compute(m)?.pisano)
}

/// `π(p²)` without scanning `p²` residue pairs.
///
/// The period mod `p²` is a multiple of `π(p)` and the quotient divides `p`,
/// so it is either `π(p)` or `p·π(p)`. The second case is confirmed by
/// evaluation as well.
pub fn pisano_period_prime_square(p: Prime) -> Result<u64> {
    let p = p.get();
    let square = p.checked_mul(p).ok_or(Error::Overflow)?;
    let base = pisano_period(p)?;
    if fib_pair_mod(base, square) == (0, 1) {
        return Ok(base);
    }
    let lifted = base.checked_mul(p).ok_or(Error::Overflow)?;
    if fib_pair_mod(lifted, square) != (0, 1) {
        return Err(Error::InvalidArgument(format!(
            "no period of F mod {p}^2 among multiples of pi({p})"
        )));
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_up_to;

    #[test]
    fn examples() {
        assert_eq!(restricted_period(11).unwrap(), 10);
        assert_eq!(restricted_period(2).unwrap(), 3);
        assert_eq!(restricted_period(5).unwrap(), 5);
        assert_eq!(restricted_period(7).unwrap(), 8);
        assert_eq!(pisano_period(2).unwrap(), 3);
        assert_eq!(pisano_period(11).unwrap(), 10);
        assert_eq!(pisano_period(7).unwrap(), 16);
        assert_eq!(pisano_period(10).unwrap(), 60);
        assert!(matches!(pisano_period(1), Err(Error::InvalidModulus(1))));
        assert!(matches!(
            restricted_period(0),
            Err(Error::InvalidModulus(0))
        ));
    }

    #[test]
    fn period_invariants_up_to_500() {
        for m in 2..=500u64 {
            let data = PeriodData::compute(m).unwrap();
            assert_eq!(data.restricted, restricted_period(m).unwrap());
            assert!(data.restricted_divides_pisano(), "m = {m}");
            assert_eq!(fib_pair_mod(data.restricted, m).0, 0);
            for j in 1..data.restricted {
                assert_ne!(fib_pair_mod(j, m).0, 0, "m = {m}, j = {j}");
            }
            assert_eq!(fib_pair_mod(data.pisano, m), (0, 1));
            for t in 1..data.pisano {
                assert_ne!(fib_pair_mod(t, m), (0, 1), "m = {m}, t = {t}");
            }
        }
    }

    #[test]
    fn prime_square_matches_scan() {
        for p in primes_up_to(300) {
            let prime = Prime::new(p).unwrap();
            assert_eq!(
                pisano_period_prime_square(prime).unwrap(),
                pisano_period(p * p).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn divisibility_by_legendre_class() {
        for p in primes_up_to(10_000) {
            let data = PeriodData::compute(p).unwrap();
            let (alpha, pi) = (data.restricted, data.pisano);
            match p % 5 {
                0 => assert_eq!(alpha, 5),
                1 | 4 => {
                    assert_eq!((p - 1) % alpha, 0, "p = {p}");
                    assert_eq!((p - 1) % pi, 0, "p = {p}");
                }
                _ => {
                    assert_eq!((p + 1) % alpha, 0, "p = {p}");
                    assert_eq!((2 * (p + 1)) % pi, 0, "p = {p}");
                }
            }
            if matches!(p % 20, 13 | 17) {
                assert_eq!(4 * alpha, pi, "p = {p}");
                assert_eq!(((p + 1) / 2) % alpha, 0, "p = {p}");
            }
        }
    }
}
