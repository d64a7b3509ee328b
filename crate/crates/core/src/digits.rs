use crate::error::{Error, Result};

/// Canonical base-`b` expansion of a nonnegative integer, least-significant
/// digit first. Zero is the empty digit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digits {
    base: u64,
    digits: Vec<u64>,
    value: u64,
}

impl Digits {
    pub fn new(n: u64, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        let mut digits = Vec::new();
        let mut rest = n;
        while rest > 0 {
            digits.push(rest % base);
            rest /= base;
        }
        Ok(Digits {
            base,
            digits,
            value: n,
        })
    }

    /// Builds from least-significant-first digits. Most-significant zeros are
    /// dropped so the result is canonical.
    pub fn from_digits(base: u64, digits: &[u64]) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        let mut value = 0u64;
        for &d in digits.iter().rev() {
            if d >= base {
                return Err(Error::InvalidDigit { digit: d, base });
            }
            value = value
                .checked_mul(base)
                .and_then(|v| v.checked_add(d))
                .ok_or(Error::Overflow)?;
        }
        let len = digits.len() - digits.iter().rev().take_while(|&&d| d == 0).count();
        Ok(Digits {
            base,
            digits: digits[..len].to_vec(),
            value,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Sum of the digits.
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Length of the block of zeros at the least-significant end. Zero has
    /// none.
    pub fn trailing_zeros(&self) -> usize {
        self.digits.iter().take_while(|&&d| d == 0).count()
    }
}

pub fn to_digits(n: u64, base: u64) -> Result<Digits> {
    Digits::new(n, base)
}
