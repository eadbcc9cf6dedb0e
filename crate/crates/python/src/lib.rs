//! Python module `diffspn`: cipher descriptions, S-box tables, exhaustive
//! scans, trail search and verification. Long computations release the GIL.

use diffspn::exhaustive::with_workers;
use diffspn::trail::{max_sbox_prob, trail_sum_probability};
use diffspn::{CipherDescription, KeyAssignment, Prob, SBox4, Trail};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed cipher description.
#[pyclass(name = "Cipher", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCipher {
    inner: CipherDescription,
}

impl PyCipher {
    fn key(&self, key: Option<Vec<u16>>) -> PyResult<KeyAssignment> {
        match key {
            None => Ok(self.inner.zero_key()),
            Some(w) if w.len() == self.inner.key_slots() => Ok(KeyAssignment(w)),
            Some(w) => Err(value_error(format!(
                "key has {} words, description needs {}",
                w.len(),
                self.inner.key_slots()
            ))),
        }
    }
}

#[pymethods]
impl PyCipher {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = diffspn::parse_description(text).map_err(value_error)?;
        Ok(PyCipher { inner })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::parse(&text)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn rounds(&self) -> usize {
        self.inner.rounds()
    }

    #[getter]
    fn key_slots(&self) -> usize {
        self.inner.key_slots()
    }

    fn sbox_ids(&self) -> Vec<String> {
        self.inner.sboxes().map(|s| s.id().to_string()).collect()
    }

    fn with_rounds(&self, rounds: usize) -> Self {
        PyCipher {
            inner: self.inner.with_rounds(rounds),
        }
    }

    fn inverse(&self) -> Self {
        PyCipher {
            inner: self.inner.inverse(),
        }
    }

    #[pyo3(signature = (x, key=None))]
    fn eval(&self, x: u16, key: Option<Vec<u16>>) -> PyResult<u16> {
        self.inner.eval(&self.key(key)?, x).map_err(value_error)
    }

    #[pyo3(signature = (y, key=None))]
    fn eval_inverse(&self, y: u16, key: Option<Vec<u16>>) -> PyResult<u16> {
        self.inner.eval_inverse(&self.key(key)?, y).map_err(value_error)
    }

    fn to_text(&self) -> String {
        diffspn::format_description(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Cipher(name={:?}, rounds={})", self.inner.name(), self.inner.rounds())
    }
}

fn prob_tuple(p: Prob) -> (u128, u32) {
    (p.numerator(), p.shift())
}

fn trail_dict<'py>(py: Python<'py>, t: &Trail) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("diffs", &t.round_diffs)?;
    d.set_item("active", t.active_count)?;
    d.set_item("probability", prob_tuple(t.probability))?;
    d.set_item("probability_str", t.probability.to_string())?;
    Ok(d)
}

/// Difference distribution table of a 4-bit S-box given as 16 hex digits.
#[pyfunction]
fn ddt(table: &str) -> PyResult<Vec<Vec<u32>>> {
    let s = SBox4::from_hex("s", table).ok_or_else(|| value_error("not a permutation of 0..15"))?;
    Ok(diffspn::compute_ddt(&s).counts.iter().map(|r| r.to_vec()).collect())
}

#[pyfunction]
fn parse_difference(text: &str) -> PyResult<u16> {
    diffspn::parse_difference(text).map_err(value_error)
}

#[pyfunction]
fn format_nibbles(d: u16) -> String {
    diffspn::format_nibbles(d)
}

#[pyfunction]
#[pyo3(signature = (cipher, a, b, key=None))]
fn diff_count(py: Python<'_>, cipher: &PyCipher, a: u16, b: u16, key: Option<Vec<u16>>) -> PyResult<u32> {
    let key = cipher.key(key)?;
    py.detach(|| diffspn::diff_count(&cipher.inner, &key, a, b)).map_err(value_error)
}

/// Maximum of D(a, b) over a != 0 with its argmax as (a, b, count) tuples, or
/// with `threshold` every entry at least that large.
#[pyfunction]
#[pyo3(signature = (cipher, rounds=None, key=None, threshold=None, jobs=0))]
fn scan<'py>(
    py: Python<'py>,
    cipher: &PyCipher,
    rounds: Option<usize>,
    key: Option<Vec<u16>>,
    threshold: Option<u32>,
    jobs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let key = cipher.key(key)?;
    let desc = cipher.inner.with_rounds(rounds.unwrap_or(cipher.inner.rounds()));
    let (dist, chars) = py
        .detach(|| {
            with_workers(jobs, || {
                let dist = diffspn::scan_max(&desc, &key, None, None)?;
                let chars = match threshold {
                    Some(_) => diffspn::top_characteristics(&desc, &key, threshold)?,
                    None => dist.argmax.clone(),
                };
                Ok::<_, diffspn::Error>((dist, chars))
            })
        })
        .map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("rounds", desc.rounds())?;
    d.set_item("max_count", dist.max_count)?;
    let rows: Vec<(u16, u16, u32)> = chars.iter().map(|c| (c.input_diff, c.output_diff, c.count)).collect();
    d.set_item("characteristics", rows)?;
    Ok(d)
}

#[pyfunction]
fn min_active_sboxes(py: Python<'_>, cipher: &PyCipher, rounds: usize) -> PyResult<u32> {
    py.detach(|| diffspn::min_active_sboxes(&cipher.inner, rounds)).map_err(value_error)
}

#[pyfunction]
fn best_trail<'py>(py: Python<'py>, cipher: &PyCipher, rounds: usize) -> PyResult<Bound<'py, PyDict>> {
    let t = py.detach(|| diffspn::best_trail(&cipher.inner, rounds)).map_err(value_error)?;
    trail_dict(py, &t)
}

/// Exact sum over all trails as `(numerator, shift)`, value = numerator / 2^shift.
#[pyfunction]
fn trail_sum(py: Python<'_>, cipher: &PyCipher, rounds: usize, a: u16, b: u16) -> PyResult<(u128, u32)> {
    let p = py.detach(|| trail_sum_probability(&cipher.inner, rounds, a, b)).map_err(value_error)?;
    Ok(prob_tuple(p))
}

#[pyfunction]
fn max_sbox_probability(cipher: &PyCipher) -> (u128, u32) {
    prob_tuple(max_sbox_prob(&cipher.inner))
}

/// Direct-encryption count at one key, or the average over `keys`
/// splitmix64 keys drawn from `seed`.
#[pyfunction]
#[pyo3(signature = (cipher, a, b, keys=None, seed=1, key=None))]
fn verify<'py>(
    py: Python<'py>,
    cipher: &PyCipher,
    a: u16,
    b: u16,
    keys: Option<usize>,
    seed: u64,
    key: Option<Vec<u16>>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = match keys {
        Some(n) => py.detach(|| diffspn::verify_keyed(&cipher.inner, a, b, n, seed)),
        None => {
            let key = cipher.key(key)?;
            py.detach(|| diffspn::verify_exhaustive(&cipher.inner, &key, a, b))
        }
    }
    .map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("counts", &r.counts)?;
    d.set_item("mean", r.mean)?;
    d.set_item("stderr", r.stderr)?;
    d.set_item("keys_tested", r.keys_tested)?;
    d.set_item("seed", r.seed)?;
    Ok(d)
}

/// `(decompositions, total)` of the four-round active S-box case `i`.
#[pyfunction]
fn theorem_lower_bound(i: u32) -> PyResult<(Vec<[u32; 4]>, u32)> {
    let c = diffspn::theorem_lower_bound(i).map_err(value_error)?;
    Ok((c.decompositions, c.total))
}

/// `(num/den)^(min_active * units)` as an exact `(numerator, denominator)`.
#[pyfunction]
fn cipher_bound(min_active: u32, units: u32, num: i64, den: i64) -> PyResult<(BigInt, BigInt)> {
    if den == 0 {
        return Err(value_error("zero denominator"));
    }
    let q = BigRational::new(BigInt::from(num), BigInt::from(den));
    let r = diffspn::cipher_bound(min_active, units, &q);
    Ok((r.numer().clone(), r.denom().clone()))
}

/// Full report bundle as a JSON string.
#[pyfunction]
#[pyo3(signature = (cipher, max_rounds=4))]
fn report(py: Python<'_>, cipher: &PyCipher, max_rounds: usize) -> PyResult<String> {
    let b = py.detach(|| diffspn::report::build_report(&cipher.inner, max_rounds)).map_err(value_error)?;
    serde_json::to_string(&b).map_err(value_error)
}

#[pymodule]
#[pyo3(name = "diffspn")]
fn diffspn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCipher>()?;
    m.add_function(wrap_pyfunction!(ddt, m)?)?;
    m.add_function(wrap_pyfunction!(parse_difference, m)?)?;
    m.add_function(wrap_pyfunction!(format_nibbles, m)?)?;
    m.add_function(wrap_pyfunction!(diff_count, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(min_active_sboxes, m)?)?;
    m.add_function(wrap_pyfunction!(best_trail, m)?)?;
    m.add_function(wrap_pyfunction!(trail_sum, m)?)?;
    m.add_function(wrap_pyfunction!(max_sbox_probability, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cipher_bound, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
