//! p-adic valuations of Fibonacci numbers computed three ways (modular
//! arithmetic, Lengyel's closed form and p-regular matrix products), the
//! relations behind the matrix representations, and empirical p-kernel
//! ranks.

pub mod digits;
pub mod error;
pub mod fib;
pub mod kernel;
pub mod lengyel;
pub mod linalg;
pub mod periods;
pub mod primes;
pub mod rep;

pub use digits::{to_digits, Digits};
pub use error::{Error, Result};
pub use fib::{fib, fib_pair_mod, nu};
pub use kernel::{
    conjecture_scan, kernel_rank, kernel_rank_with, rank_of_rep, write_rank_csv,
    FibValuationSequence, KernelConfig, KernelNode, RankReport, SequenceOracle,
};
pub use lengyel::{
    digit_sum_invariance_check, direct_valuation, lengyel_valuation, wall_check, Lengyel,
    WallReport,
};
pub use periods::{pisano_period, restricted_period, PeriodData};
pub use primes::{classify_prime, is_prime, primes_up_to, Prime, PrimeClass};
pub use rep::{LinearRep, Provenance};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// `ν_p(F_n)` from the three independent routes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationTriple {
    pub p: u64,
    pub n: u64,
    pub direct: u32,
    pub lengyel: u32,
    pub matrix: BigInt,
}

impl ValuationTriple {
    pub fn agree(&self) -> bool {
        self.direct == self.lengyel && self.matrix == BigInt::from(self.lengyel)
    }
}

/// Evaluates all three routes for one `(p, n)`, building the class
/// representation on the way. For sweeps, build the pieces once instead.
pub fn valuation_triple(p: u64, n: u64) -> Result<ValuationTriple> {
    let formula = Lengyel::new(Prime::new(p)?)?;
    let lengyel = formula.valuation(n)?;
    let direct = formula.direct(n)?;
    let matrix = rep::build_for_prime(p)?.evaluate(n - 1);
    Ok(ValuationTriple {
        p,
        n,
        direct,
        lengyel,
        matrix,
    })
}
