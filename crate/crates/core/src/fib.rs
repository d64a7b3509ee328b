//! Exact and modular Fibonacci numbers, and the k-adic valuation.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `F_n` with `F_0 = 0`, `F_1 = F_2 = 1`, by fast doubling.
pub fn fib(n: u64) -> BigUint {
    fib_pair(n).0
}

/// `(F_n, F_{n+1})`.
pub fn fib_pair(n: u64) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        // F(2k) = F(k) (2 F(k+1) - F(k)),  F(2k+1) = F(k)^2 + F(k+1)^2
        let c = &a * ((&b << 1u32) - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            a = d.clone();
            b = c + d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// `(F_n mod m, F_{n+1} mod m)` in `O(log n)` modular steps. `m = 1` is
/// accepted and yields `(0, 0)`.
pub fn fib_pair_mod(n: u64, m: u64) -> (u64, u64) {
    assert!(m >= 1, "modulus must be positive");
    let mut a = 0u64;
    let mut b = 1 % m;
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let twice_b = add_mod(b, b, m);
        let c = mul_mod(a, add_mod(twice_b, m - a, m), m);
        let d = add_mod(mul_mod(a, a, m), mul_mod(b, b, m), m);
        if (n >> bit) & 1 == 1 {
            a = d;
            b = add_mod(c, d, m);
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// Arbitrary-precision modulus variant of [`fib_pair_mod`].
pub fn fib_pair_mod_big(n: u64, m: &BigUint) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one() % m;
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let c = (&a * ((&b << 1u32) + m - &a)) % m;
        let d = (&a * &a + &b * &b) % m;
        if (n >> bit) & 1 == 1 {
            b = (&c + &d) % m;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// Largest `e` with `k^e | n`.
pub fn nu(k: u64, n: u64) -> Result<u32> {
    if k < 2 {
        return Err(Error::InvalidBase(k));
    }
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(nu_unchecked(k, n))
}

/// [`nu`] without argument checks; `k >= 2` and `n >= 1` are the caller's job.
#[inline]
pub(crate) fn nu_unchecked(k: u64, mut n: u64) -> u32 {
    debug_assert!(k >= 2 && n >= 1);
    if k == 2 {
        return n.trailing_zeros();
    }
    let mut e = 0;
    while n.is_multiple_of(k) {
        n /= k;
        e += 1;
    }
    e
}

pub fn nu_big(k: u64, n: &BigUint) -> Result<u32> {
    if k < 2 {
        return Err(Error::InvalidBase(k));
    }
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let k = BigUint::from(k);
    let mut n = n.clone();
    let mut e = 0;
    while (&n % &k).is_zero() {
        n /= &k;
        e += 1;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iterative(n: u64) -> BigUint {
        let (mut a, mut b) = (BigUint::zero(), BigUint::one());
        for _ in 0..n {
            let c = &a + &b;
            a = b;
            b = c;
        }
        a
    }

    #[test]
    fn small_values() {
        assert_eq!(fib(0), BigUint::zero());
        assert_eq!(fib(1), BigUint::one());
        assert_eq!(fib(2), BigUint::one());
        assert_eq!(fib(12), BigUint::from(144u32));
        assert_eq!(
            fib(100),
            "354224848179261915075".parse::<BigUint>().unwrap()
        );
    }

    #[test]
    fn doubling_matches_recurrence() {
        for n in 0..300 {
            assert_eq!(fib(n), iterative(n), "n = {n}");
        }
    }

    #[test]
    fn pair_mod_examples() {
        assert_eq!(fib_pair_mod(12, 1000), (144, 233));
        assert_eq!(fib_pair_mod(0, 7), (0, 1));
        assert_eq!(fib_pair_mod(10, 11), (0, 1));
    }

    #[test]
    fn pair_mod_matches_iteration() {
        for m in [2u64, 3, 10, 97, 500, 1 << 20] {
            let (mut a, mut b) = (0u64, 1 % m);
            for n in 0..10_000u64 {
                assert_eq!(fib_pair_mod(n, m), (a, b), "n = {n}, m = {m}");
                let c = (a + b) % m;
                a = b;
                b = c;
            }
        }
    }

    #[test]
    fn pair_mod_near_u64_max() {
        let m = u64::MAX - 58;
        let big = BigUint::from(m);
        for n in [1u64, 93, 94, 1_000, 123_456_789] {
            let (a, b) = fib_pair_mod(n, m);
            let (x, y) = fib_pair_mod_big(n, &big);
            assert_eq!((BigUint::from(a), BigUint::from(b)), (x, y));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(nu(2, 144).unwrap(), 4);
        assert_eq!(nu(7, 1).unwrap(), 0);
        assert_eq!(nu(3, 162).unwrap(), 4);
        assert_eq!(nu(10, 100).unwrap(), 2);
        assert!(matches!(nu(3, 0), Err(Error::ZeroArgument)));
        assert!(matches!(nu(1, 5), Err(Error::InvalidBase(1))));
        assert_eq!(nu_big(2, &fib(12)).unwrap(), 4);
    }

    proptest! {
        #[test]
        fn big_modulus_agrees_with_exact(n in 0u64..2_000, m in 2u64..1_000_000_000) {
            let exact = fib(n);
            let (a, b) = fib_pair_mod(n, m);
            prop_assert_eq!(BigUint::from(a), &exact % m);
            prop_assert_eq!(BigUint::from(b), fib(n + 1) % m);
        }

        #[test]
        fn nu_is_maximal(k in 2u64..50, n in 1u64..1_000_000) {
            let e = nu(k, n).unwrap();
            let ke = k.pow(e);
            prop_assert_eq!(n % ke, 0);
            prop_assert!(n % (ke * k) != 0);
        }
    }
}
