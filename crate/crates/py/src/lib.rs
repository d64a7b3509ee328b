//! Python bindings. Build with `cargo build -p fibreg-py --release` and copy
//! `libfibreg.so` to `fibreg.so` somewhere on `sys.path`.

use fibreg_core::rep::{build_for_prime, verify_relations as relations};
use fibreg_core::{KernelConfig, LinearRep, PeriodData};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: fibreg_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn fib(n: u64) -> num_bigint::BigUint {
    fibreg_core::fib(n)
}

/// Largest `e` with `k^e | n`.
#[pyfunction]
fn nu(k: u64, n: u64) -> PyResult<u32> {
    fibreg_core::nu(k, n).map_err(err)
}

/// `nu_p(F_n)` from the closed form.
#[pyfunction]
fn lengyel_valuation(p: u64, n: u64) -> PyResult<u32> {
    fibreg_core::lengyel_valuation(p, n).map_err(err)
}

/// `nu_p(F_n)` from `F_n mod p^K`.
#[pyfunction]
fn direct_valuation(p: u64, n: u64) -> PyResult<u32> {
    fibreg_core::direct_valuation(p, n).map_err(err)
}

#[pyfunction]
fn digit_sum_invariance_check(p: u64, n: u64, m: u64) -> PyResult<u32> {
    fibreg_core::digit_sum_invariance_check(p, n, m).map_err(err)
}

/// `{"modulus", "alpha", "pisano"}` for `m >= 2`.
#[pyfunction]
fn periods(py: Python<'_>, m: u64) -> PyResult<Bound<'_, PyDict>> {
    let d = PeriodData::compute(m).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("modulus", d.modulus)?;
    out.set_item("alpha", d.restricted)?;
    out.set_item("pisano", d.pisano)?;
    Ok(out)
}

/// One of "two", "five", "1,4 mod 5", "13,17 mod 20", "3,7 mod 20".
#[pyfunction]
fn classify_prime(p: u64) -> PyResult<&'static str> {
    fibreg_core::classify_prime(p)
        .map(|c| c.name())
        .map_err(err)
}

#[pyfunction]
fn wall_check(py: Python<'_>, p: u64) -> PyResult<Bound<'_, PyDict>> {
    let r = fibreg_core::wall_check(p).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("p", r.p)?;
    out.set_item("alpha", r.alpha)?;
    out.set_item("val_at_alpha", r.val_at_alpha)?;
    out.set_item("pi_p", r.pi_p)?;
    out.set_item("pi_p2", r.pi_p2)?;
    out.set_item("wall_negative", r.wall_negative)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (p, truncation=None, max_depth=16, doublings=2))]
fn kernel_rank(
    py: Python<'_>,
    p: u64,
    truncation: Option<usize>,
    max_depth: u32,
    doublings: u32,
) -> PyResult<Bound<'_, PyDict>> {
    let config = KernelConfig {
        truncation,
        max_depth,
        doublings,
        cross_check: false,
    };
    let r = py
        .detach(|| fibreg_core::kernel_rank(p, &config))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("p", r.p)?;
    out.set_item("class", r.class.name())?;
    out.set_item("alpha", r.alpha)?;
    out.set_item("pisano", r.pisano)?;
    out.set_item("rank", r.rank)?;
    out.set_item("theorem_bound", r.theorem_bound)?;
    out.set_item("alpha_plus_one", r.alpha_plus_one)?;
    out.set_item("conjecture_holds", r.conjecture_holds)?;
    out.set_item("truncation_length", r.truncation_length)?;
    out.set_item("stabilized", r.stabilized)?;
    out.set_item("ranks_by_truncation", r.ranks_by_truncation)?;
    Ok(out)
}

/// One `{"relation", "cases", "failures"}` entry per relation family.
#[pyfunction]
fn verify_relations(py: Python<'_>, p: u64, n_max: u64) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let reports = py.detach(|| relations(p, n_max)).map_err(err)?;
    reports
        .into_iter()
        .map(|r| {
            let out = PyDict::new(py);
            out.set_item("relation", r.relation)?;
            out.set_item("cases", r.cases)?;
            out.set_item("failures", r.failures.len())?;
            Ok(out)
        })
        .collect()
}

/// `a(n) = lambda M_{n_0} ... M_{n_l} kappa` over the base-p digits of `n`.
#[pyclass(name = "LinearRep", module = "fibreg", frozen)]
struct PyLinearRep(LinearRep);

#[pymethods]
impl PyLinearRep {
    /// The representation of `n -> nu_p(F_{n+1})` for the class of `p`.
    #[staticmethod]
    fn for_prime(p: u64) -> PyResult<Self> {
        build_for_prime(p).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        LinearRep::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    fn evaluate(&self, n: u64) -> BigInt {
        self.0.evaluate(n)
    }

    /// Digits least significant first.
    fn evaluate_digits(&self, digits: Vec<u64>) -> PyResult<BigInt> {
        self.0.evaluate_digits(&digits).map_err(err)
    }

    #[getter]
    fn base(&self) -> u64 {
        self.0.base()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn provenance(&self) -> String {
        format!("{:?}", self.0.provenance())
    }

    #[getter]
    fn matrices(&self) -> Vec<Vec<Vec<i64>>> {
        self.0.matrices().iter().map(|m| m.to_rows()).collect()
    }

    #[getter]
    fn lambda_(&self) -> Vec<i64> {
        self.0.lambda().to_vec()
    }

    #[getter]
    fn kappa(&self) -> Vec<i64> {
        self.0.kappa().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "LinearRep(base={}, rank={}, provenance={:?})",
            self.0.base(),
            self.0.rank(),
            self.0.provenance()
        )
    }
}

#[pymodule]
fn fibreg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(fib, m)?)?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(lengyel_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(direct_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(digit_sum_invariance_check, m)?)?;
    m.add_function(wrap_pyfunction!(periods, m)?)?;
    m.add_function(wrap_pyfunction!(classify_prime, m)?)?;
    m.add_function(wrap_pyfunction!(wall_check, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_rank, m)?)?;
    m.add_function(wrap_pyfunction!(verify_relations, m)?)?;
    m.add_class::<PyLinearRep>()?;
    Ok(())
}
