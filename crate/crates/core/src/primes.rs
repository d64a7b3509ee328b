//! Primality, sieving and the residue-class split of the primes used by the
//! representation constructors.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Witnesses that make Miller–Rabin deterministic below 3.3 * 10^24, which
/// covers every `u64`.
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// A prime number, certified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn class(self) -> PrimeClass {
        PrimeClass::of(self)
    }
}

impl Deref for Prime {
    type Target = u64;

    fn deref(&self) -> &u64 {
        &self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

/// Case split of the primes: 2 and 5 on their own, then by `p mod 20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeClass {
    Two,
    Five,
    /// `p ≡ 1, 4 (mod 5)`
    OneFourMod5,
    /// `p ≡ 13, 17 (mod 20)`
    ThirteenSeventeenMod20,
    /// `p ≡ 3, 7 (mod 20)`
    ThreeSevenMod20,
}

impl PrimeClass {
    pub fn of(p: Prime) -> Self {
        match p.get() {
            2 => PrimeClass::Two,
            5 => PrimeClass::Five,
            p => match p % 20 {
                1 | 4 | 6 | 9 | 11 | 14 | 16 | 19 => PrimeClass::OneFourMod5,
                13 | 17 => PrimeClass::ThirteenSeventeenMod20,
                3 | 7 => PrimeClass::ThreeSevenMod20,
                r => unreachable!("odd prime {p} with residue {r} mod 20"),
            },
        }
    }

    /// `p ≡ 2, 3 (mod 5)` with `p != 2`.
    pub fn is_two_three_mod5(self) -> bool {
        matches!(
            self,
            PrimeClass::ThirteenSeventeenMod20 | PrimeClass::ThreeSevenMod20
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            PrimeClass::Two => "two",
            PrimeClass::Five => "five",
            PrimeClass::OneFourMod5 => "1,4 mod 5",
            PrimeClass::ThirteenSeventeenMod20 => "13,17 mod 20",
            PrimeClass::ThreeSevenMod20 => "3,7 mod 20",
        }
    }
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_prime(p: u64) -> Result<PrimeClass> {
    Ok(Prime::new(p)?.class())
}
