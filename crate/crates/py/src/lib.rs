//! Python bindings: the structure maps, the certification battery, the
//! polytope diagonals, and the combinatorial helpers, exposed with plain
//! Python types (ints, strings, tuples; elements travel as JSON strings).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use egamma_core::checker::{certify_hopf_ainf, lemma_comb, lemma_random_sweep, LemmaRing};
use egamma_core::hopf::{em_factors_n3, HopfAinfStructure, StructureParams};
use egamma_core::polytope::{
    diagonal_k, diagonal_top, step_matrices, tonks_projection, OrderedPartition,
};
use egamma_core::{Prime, TensorWord};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One structure A = E(v) (x) G(w) over Z_p with |v| = 2m+1, |g_1| = 2mp+2.
#[pyclass]
struct Structure {
    inner: HopfAinfStructure,
}

#[pymethods]
impl Structure {
    #[new]
    fn new(p: u64, m: u64) -> PyResult<Structure> {
        let params =
            StructureParams::new(Prime::new(p).map_err(value_err)?, m).map_err(value_err)?;
        Ok(Structure { inner: HopfAinfStructure::new(params) })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.prime().get()
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.params.m
    }

    /// Degree of the basis element v^v_exp gamma_j.
    fn degree(&self, v_exp: u8, j: u32) -> i64 {
        self.inner.params.basis(v_exp, j).degree
    }

    /// Product of two basis elements, as element JSON.
    fn mul(&self, vx: u8, jx: u32, vy: u8, jy: u32) -> String {
        let x = self.inner.params.basis(vx, jx);
        let y = self.inner.params.basis(vy, jy);
        self.inner.mul(x, y).to_json().to_string()
    }

    /// Coproduct of a basis element, as element JSON.
    fn delta2(&self, v_exp: u8, j: u32) -> String {
        let w = TensorWord(vec![self.inner.params.basis(v_exp, j)]);
        self.inner.delta2.apply(&w).to_json().to_string()
    }

    /// Arity-p higher coproduct of a basis element, as element JSON.
    fn delta_p(&self, v_exp: u8, j: u32) -> String {
        let w = TensorWord(vec![self.inner.params.basis(v_exp, j)]);
        self.inner.delta_p.apply(&w).to_json().to_string()
    }

    /// Runs the whole certification battery; returns (pass, report JSON).
    fn certify(&self, max_j: u32) -> PyResult<(bool, String)> {
        let report = certify_hopf_ainf(&self.inner, max_j).map_err(value_err)?;
        let json = serde_json::to_string(&report).map_err(value_err)?;
        Ok((report.pass, json))
    }

    fn __repr__(&self) -> String {
        format!("Structure(p={}, m={})", self.p(), self.m())
    }
}

/// Diagonal of the permutahedron top cell as a sorted list of
/// ("1|23", "13|2")-style string pairs.
#[pyfunction]
fn diagonal_perm(n: u8) -> PyResult<Vec<(String, String)>> {
    Ok(diagonal_top(n)
        .map_err(value_err)?
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect())
}

/// Diagonal of the associahedron on n+1 leaves as tree-word pairs.
#[pyfunction]
fn diagonal_assoc(n: u8) -> PyResult<Vec<(String, String)>> {
    Ok(diagonal_k(n).map_err(value_err)?.iter().map(|(a, b)| (a.word(), b.word())).collect())
}

/// Number of step matrices on {1..n}; equals n factorial.
#[pyfunction]
fn step_matrix_count(n: u8) -> PyResult<usize> {
    Ok(step_matrices(n).map_err(value_err)?.len())
}

/// Projects a permutahedron face like "2|13" to its tree word, or None
/// when the face collapses.
#[pyfunction]
fn tonks(n: u8, face: &str) -> PyResult<Option<String>> {
    let f = OrderedPartition::parse(n, face).map_err(value_err)?;
    Ok(tonks_projection(&f).map(|t| t.word()))
}

/// Checks the binomial splitting identity for one tuple: over the
/// naturals when p is omitted, mod p otherwise.
#[pyfunction]
#[pyo3(signature = (z, i, p=None))]
fn lemma_check(z: Vec<u64>, i: u64, p: Option<u64>) -> PyResult<bool> {
    let ring = match p {
        None => LemmaRing::Nat,
        Some(p) => LemmaRing::Mod(Prime::new(p).map_err(value_err)?),
    };
    Ok(lemma_comb(&z, i, ring).equal)
}

/// Seeded random sweep of the splitting identity mod p; returns
/// (passes, trials).
#[pyfunction]
fn lemma_sweep(p: u64, trials: u64, seed: u64) -> PyResult<(u64, u64)> {
    let report = lemma_random_sweep(Prime::new(p).map_err(value_err)?, trials, seed);
    Ok((report.passes, report.trials))
}

/// The first `count` factor parameters (m, |v|, |w|) of the standard
/// decomposition for the given odd prime.
#[pyfunction]
fn em_factors(p: u64, count: usize) -> PyResult<Vec<(u64, i64, i64)>> {
    Ok(em_factors_n3(Prime::new(p).map_err(value_err)?, count)
        .map_err(value_err)?
        .into_iter()
        .map(|params| (params.m, params.deg_v(), params.deg_gamma1()))
        .collect())
}

#[pymodule]
fn egamma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Structure>()?;
    m.add_function(wrap_pyfunction!(diagonal_perm, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_assoc, m)?)?;
    m.add_function(wrap_pyfunction!(step_matrix_count, m)?)?;
    m.add_function(wrap_pyfunction!(tonks, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_check, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(em_factors, m)?)?;
    Ok(())
}
