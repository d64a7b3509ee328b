//! Linear representations `a(n) = λ · M_{n_0} ⋯ M_{n_l} · κ` over the base-`p`
//! digits of `n` (least significant first), their constructors for
//! `ν_p(F_{n+1})`, and checks of the relations they encode.

mod build;
mod systems;
mod verify;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub use build::{
    build_for_prime, build_general, build_general_for, build_nu_k, build_p2, build_p5,
    build_residue_indicator, build_thm1317, build_thm14, build_thm23, displayed_one_four_matrices,
};
pub use verify::{
    verify_monoid_structure, verify_relations, MonoidVerdict, RelationFailure, RelationReport,
};

/// Which construction produced a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// `ν_k(n+1)` for an arbitrary base `k`.
    NuKPlusOne,
    PeqTwo,
    PeqFive,
    /// `p ≡ 1, 4 (mod 5)`, dimension `p`.
    Thm14,
    /// `p ≡ 13, 17 (mod 20)`, dimension `(p+3)/2`.
    Thm1317,
    /// `p ≡ 2, 3 (mod 5)`, dimension `p+2`.
    Thm23,
    /// Block sum of two representations.
    DirectSum,
    /// Loaded from outside or built by other means.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRep {
    base: u64,
    matrices: Vec<IntMatrix>,
    lambda: Vec<i64>,
    kappa: Vec<i64>,
    provenance: Provenance,
}

impl LinearRep {
    pub fn new(
        base: u64,
        matrices: Vec<IntMatrix>,
        lambda: Vec<i64>,
        kappa: Vec<i64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if matrices.len() as u64 != base {
            return Err(Error::InvalidRepresentation(format!(
                "{} matrices for base {base}",
                matrices.len()
            )));
        }
        let r = lambda.len();
        if kappa.len() != r {
            return Err(Error::InvalidRepresentation(format!(
                "lambda has length {r} but kappa has length {}",
                kappa.len()
            )));
        }
        if let Some((d, m)) = matrices
            .iter()
            .enumerate()
            .find(|(_, m)| m.rows() != r || m.cols() != r)
        {
            return Err(Error::InvalidRepresentation(format!(
                "matrix {d} is {}x{}, expected {r}x{r}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(LinearRep {
            base,
            matrices,
            lambda,
            kappa,
            provenance,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Dimension `r` of the matrices.
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, digit: u64) -> &IntMatrix {
        &self.matrices[digit as usize]
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn kappa(&self) -> &[i64] {
        &self.kappa
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// `λ · M_{n_0} ⋯ M_{n_l} · κ`; `n = 0` gives `λ · κ`.
    pub fn evaluate(&self, n: u64) -> BigInt {
        self.evaluate_from(&self.lambda, n)
    }

    /// Same product over an explicit least-significant-first digit string,
    /// which may carry most-significant zeros.
    pub fn evaluate_digits(&self, digits: &[u64]) -> Result<BigInt> {
        if let Some(&d) = digits.iter().find(|&&d| d >= self.base) {
            return Err(Error::InvalidDigit {
                digit: d,
                base: self.base,
            });
        }
        Ok(self.product(&self.lambda, digits.iter().copied()))
    }

    /// Value at `n` of the `index`-th generator sequence, i.e. the
    /// evaluation with `λ` replaced by the `index`-th unit vector.
    pub fn generator_value(&self, index: usize, n: u64) -> BigInt {
        let mut unit = vec![0; self.rank()];
        unit[index] = 1;
        self.evaluate_from(&unit, n)
    }

    fn evaluate_from(&self, start: &[i64], n: u64) -> BigInt {
        let base = self.base;
        let digits = std::iter::successors((n > 0).then_some(n), move |&m| {
            (m >= base).then_some(m / base)
        })
        .map(move |m| m % base);
        self.product(start, digits)
    }

    fn product(&self, start: &[i64], digits: impl Iterator<Item = u64> + Clone) -> BigInt {
        match self.product_i64(start, digits.clone()) {
            Some(v) => BigInt::from(v),
            None => self.product_big(start, digits),
        }
    }

    fn product_i64(&self, start: &[i64], digits: impl Iterator<Item = u64>) -> Option<i64> {
        let r = self.rank();
        let mut v = start.to_vec();
        let mut next = vec![0i64; r];
        for d in digits {
            let m = &self.matrices[d as usize];
            next.iter_mut().for_each(|x| *x = 0);
            for (k, &coef) in v.iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                for (j, &entry) in m.row(k).iter().enumerate() {
                    if entry != 0 {
                        next[j] = next[j].checked_add(coef.checked_mul(entry)?)?;
                    }
                }
            }
            std::mem::swap(&mut v, &mut next);
        }
        v.iter()
            .zip(&self.kappa)
            .try_fold(0i64, |acc, (&a, &b)| acc.checked_add(a.checked_mul(b)?))
    }

    fn product_big(&self, start: &[i64], digits: impl Iterator<Item = u64>) -> BigInt {
        let r = self.rank();
        let mut v: Vec<BigInt> = start.iter().map(|&x| BigInt::from(x)).collect();
        for d in digits {
            let m = &self.matrices[d as usize];
            let mut next = vec![BigInt::zero(); r];
            for (k, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for (j, &entry) in m.row(k).iter().enumerate() {
                    if entry != 0 {
                        next[j] += coef * entry;
                    }
                }
            }
            v = next;
        }
        v.iter().zip(&self.kappa).map(|(a, &b)| a * b).sum()
    }

    /// Block sum representing `self(n) + weight · other(n)`.
    pub fn direct_sum(&self, other: &LinearRep, weight: i64) -> Result<LinearRep> {
        if self.base != other.base {
            return Err(Error::InvalidRepresentation(format!(
                "cannot add representations in bases {} and {}",
                self.base, other.base
            )));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let mut lambda = self.lambda.clone();
        for &x in &other.lambda {
            lambda.push(x.checked_mul(weight).ok_or(Error::Overflow)?);
        }
        let kappa = [self.kappa.as_slice(), other.kappa.as_slice()].concat();
        LinearRep::new(self.base, matrices, lambda, kappa, Provenance::DirectSum)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RepJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RepJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// On-disk layout; each matrix is a list of rows.
#[derive(Debug, Serialize, Deserialize)]
struct RepJson {
    p: u64,
    rank: usize,
    matrices: Vec<Vec<Vec<i64>>>,
    lambda: Vec<i64>,
    kappa: Vec<i64>,
    provenance: Provenance,
}

impl From<&LinearRep> for RepJson {
    fn from(rep: &LinearRep) -> Self {
        RepJson {
            p: rep.base,
            rank: rep.rank(),
            matrices: rep.matrices.iter().map(IntMatrix::to_rows).collect(),
            lambda: rep.lambda.clone(),
            kappa: rep.kappa.clone(),
            provenance: rep.provenance,
        }
    }
}

impl TryFrom<RepJson> for LinearRep {
    type Error = Error;

    fn try_from(raw: RepJson) -> Result<Self> {
        if raw.rank != raw.lambda.len() {
            return Err(Error::InvalidRepresentation(format!(
                "rank {} does not match lambda length {}",
                raw.rank,
                raw.lambda.len()
            )));
        }
        let matrices = raw
            .matrices
            .iter()
            .enumerate()
            .map(|(d, rows)| {
                if rows.is_empty() && raw.rank == 0 {
                    return Ok(IntMatrix::zeros(0, 0));
                }
                IntMatrix::from_rows(rows).ok_or_else(|| {
                    Error::InvalidRepresentation(format!("matrix {d} has ragged rows"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinearRep::new(raw.p, matrices, raw.lambda, raw.kappa, raw.provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu_k(k: u64) -> LinearRep {
        build_nu_k(k).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(nu_k(10).evaluate(99), BigInt::from(2));
        assert_eq!(nu_k(2).evaluate(0), BigInt::from(0));
        assert_eq!(nu_k(3).evaluate(53), BigInt::from(3));
        assert_eq!(nu_k(2).evaluate(7), BigInt::from(3));
    }

    #[test]
    fn empty_product_is_lambda_dot_kappa() {
        let rep = LinearRep::new(
            2,
            vec![IntMatrix::identity(2), IntMatrix::identity(2)],
            vec![3, -1],
            vec![2, 5],
            Provenance::Empirical,
        )
        .unwrap();
        assert_eq!(rep.evaluate(0), BigInt::from(1));
        assert_eq!(rep.evaluate_digits(&[]).unwrap(), BigInt::from(1));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let grow = IntMatrix::from_rows(&[vec![1 << 20]]).unwrap();
        let rep = LinearRep::new(
            2,
            vec![grow.clone(), grow],
            vec![1],
            vec![1],
            Provenance::Empirical,
        )
        .unwrap();
        // 2^20 raised to the number of binary digits of 2^10 - 1
        assert_eq!(rep.evaluate(1023), BigInt::from(2).pow(200));
    }

    #[test]
    fn shape_validation() {
        let m = IntMatrix::identity(2);
        assert!(matches!(
            LinearRep::new(
                3,
                vec![m.clone(), m.clone()],
                vec![1, 0],
                vec![0, 1],
                Provenance::Empirical
            ),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(matches!(
            LinearRep::new(
                2,
                vec![m.clone(), m.clone()],
                vec![1],
                vec![0, 1],
                Provenance::Empirical
            ),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(matches!(
            LinearRep::new(
                2,
                vec![m, IntMatrix::identity(3)],
                vec![1, 0],
                vec![0, 1],
                Provenance::Empirical
            ),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(matches!(
            nu_k(3).evaluate_digits(&[0, 3]),
            Err(Error::InvalidDigit { digit: 3, base: 3 })
        ));
    }

    #[test]
    fn json_round_trip() {
        for rep in [
            nu_k(7),
            build_p2(),
            build_thm14(11).unwrap(),
            build_general(7).unwrap(),
        ] {
            let text = rep.to_json().unwrap();
            let back = LinearRep::from_json(&text).unwrap();
            assert_eq!(back, rep);
            for n in 0..=1000 {
                assert_eq!(back.evaluate(n), rep.evaluate(n));
            }
        }
    }

    #[test]
    fn json_layout() {
        let value: serde_json::Value = serde_json::from_str(&nu_k(3).to_json().unwrap()).unwrap();
        assert_eq!(value["p"], 3);
        assert_eq!(value["rank"], 2);
        assert_eq!(value["provenance"], "NuKPlusOne");
        assert_eq!(value["lambda"], serde_json::json!([1, 0]));
        assert_eq!(value["kappa"], serde_json::json!([0, 1]));
        assert_eq!(
            value["matrices"],
            serde_json::json!([[[0, 0], [-1, 1]], [[0, 0], [-1, 1]], [[0, 1], [-1, 2]]])
        );
    }

    #[test]
    fn json_rejects_malformed() {
        let bad_rank = r#"{"p":2,"rank":3,"matrices":[[[1]],[[1]]],"lambda":[1],"kappa":[1],"provenance":"Empirical"}"#;
        assert!(matches!(
            LinearRep::from_json(bad_rank),
            Err(Error::InvalidRepresentation(_))
        ));
        let ragged = r#"{"p":2,"rank":2,"matrices":[[[1,0],[0]],[[1,0],[0,1]]],"lambda":[1,0],"kappa":[1,0],"provenance":"Empirical"}"#;
        assert!(matches!(
            LinearRep::from_json(ragged),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(matches!(LinearRep::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn leading_zero_digits_do_not_change_the_value() {
        for rep in [
            build_p2(),
            build_p5(),
            build_thm14(11).unwrap(),
            build_thm23(7).unwrap(),
        ] {
            let p = rep.base();
            for n in 0..=10_000u64 {
                let mut digits = crate::to_digits(n, p).unwrap().digits().to_vec();
                let expected = rep.evaluate(n);
                for _ in 0..3 {
                    digits.push(0);
                    assert_eq!(
                        rep.evaluate_digits(&digits).unwrap(),
                        expected,
                        "p = {p}, n = {n}"
                    );
                }
            }
        }
    }

    fn product(rep: &LinearRep, digits: &[u64]) -> IntMatrix {
        digits
            .iter()
            .fold(IntMatrix::identity(rep.rank()), |acc, &d| {
                acc.mul(rep.matrix(d))
            })
    }

    proptest::proptest! {
        #[test]
        fn low_digit_products_depend_on_the_digit_sum_only(
            a in proptest::collection::vec(0u64..10, 1..8),
            b in proptest::collection::vec(0u64..10, 1..8),
        ) {
            let rep = build_thm14(11).unwrap();
            let (sa, sb): (u64, u64) = (a.iter().sum(), b.iter().sum());
            proptest::prop_assert_eq!(sa % 10 == sb % 10, product(&rep, &a) == product(&rep, &b));
        }
    }
}
