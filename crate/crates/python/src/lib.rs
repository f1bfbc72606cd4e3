//! Python bindings for `macfb_core`.
//!
//! Reports and sweep rows come back as plain dicts.

use macfb_core::experiments;
use macfb_core::extremes::{self, OrderStatModel};
use macfb_core::grassmann::{self, CompositePoint, DrfQuery};
use macfb_core::numerics::RngStream;
use macfb_core::rmt;
use macfb_core::strategies::{self, Strategy};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

fn py_err(e: macfb_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_strategies(names: &[String]) -> PyResult<Vec<Strategy>> {
    names.iter().map(|s| s.parse::<Strategy>().map_err(py_err)).collect()
}

/// System parameters; `rho` is the linear total SNR.
#[pyclass(name = "SystemConfig", from_py_object)]
#[derive(Clone)]
struct PySystemConfig {
    inner: strategies::SystemConfig,
}

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (users=32, tx_antennas=2, rx_antennas=4, snr_db=10.0, beams=4, quant_bits=12))]
    fn new(users: usize, tx_antennas: usize, rx_antennas: usize, snr_db: f64, beams: usize, quant_bits: u32) -> PyResult<Self> {
        let inner = strategies::SystemConfig {
            users,
            tx_antennas,
            rx_antennas,
            rho: experiments::db_to_linear(snr_db),
            beams,
            quant_bits,
        };
        inner.validate().map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn users(&self) -> usize {
        self.inner.users
    }
    #[getter]
    fn tx_antennas(&self) -> usize {
        self.inner.tx_antennas
    }
    #[getter]
    fn rx_antennas(&self) -> usize {
        self.inner.rx_antennas
    }
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }
    #[getter]
    fn snr_db(&self) -> f64 {
        experiments::linear_to_db(self.inner.rho)
    }
    #[getter]
    fn beams(&self) -> usize {
        self.inner.beams
    }
    #[getter]
    fn quant_bits(&self) -> u32 {
        self.inner.quant_bits
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SystemConfig(users={}, tx_antennas={}, rx_antennas={}, rho={}, beams={}, quant_bits={})",
            c.users, c.tx_antennas, c.rx_antennas, c.rho, c.beams, c.quant_bits
        )
    }
}

/// Closed-form report for one strategy.
#[pyfunction]
fn theory_report<'py>(py: Python<'py>, config: &PySystemConfig, strategy: &str) -> PyResult<Bound<'py, PyAny>> {
    let s: Strategy = strategy.parse().map_err(py_err)?;
    let r = strategies::theory_report(&config.inner, s).map_err(py_err)?;
    to_py(py, &r)
}

/// Monte Carlo for one configuration; one dict per strategy.
#[pyfunction]
#[pyo3(signature = (config, strategies, trials, codebooks=16, seed=1, workers=0))]
fn simulate<'py>(
    py: Python<'py>,
    config: &PySystemConfig,
    strategies: Vec<String>,
    trials: usize,
    codebooks: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let st = parse_strategies(&strategies)?;
    let cfg = config.inner.clone();
    let rows = py
        .detach(|| experiments::simulate(&cfg, &st, trials, codebooks, seed, workers))
        .map_err(py_err)?;
    to_py(py, &rows)
}

/// `(lower, upper, premise_holds)` for the distortion-rate function.
#[pyfunction]
#[pyo3(signature = (n, bits, p=1, m=1, beta=2))]
fn drf_bounds(n: usize, bits: f64, p: usize, m: usize, beta: u8) -> PyResult<(f64, f64, bool)> {
    let q = DrfQuery::new(n, p, m, beta, bits).map_err(py_err)?;
    let b = grassmann::drf_bounds(&q).map_err(py_err)?;
    Ok((b.lower, b.upper, b.premise_holds))
}

#[pyfunction]
fn expected_top_sum(l: u32, n: u64, s: u64) -> PyResult<f64> {
    extremes::expected_top_sum(OrderStatModel::new(l, n, s).map_err(py_err)?).map_err(py_err)
}

#[pyfunction]
fn mp_support(m_bar: f64) -> PyResult<(f64, f64)> {
    rmt::mp_support(m_bar).map_err(py_err)
}

#[pyfunction]
fn shannon_transform(c: f64, m_bar: f64) -> PyResult<f64> {
    rmt::shannon_transform(c, m_bar).map_err(py_err)
}

/// Random codebook on the composite Grassmann manifold `G(n,1)^m`.
#[pyclass(name = "Codebook")]
struct PyCodebook {
    inner: grassmann::Codebook,
}

#[pymethods]
impl PyCodebook {
    #[staticmethod]
    #[pyo3(signature = (n, m, k, seed=1, stream=0))]
    fn random(n: usize, m: usize, k: usize, seed: u64, stream: u64) -> PyResult<Self> {
        let inner = grassmann::random_codebook(n, m, k, RngStream::new(seed, stream)).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self { inner: grassmann::Codebook::load(path).map_err(py_err)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Codeword as `m` lists of `n` complex numbers.
    fn codeword(&self, index: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if index >= self.inner.len() {
            return Err(PyValueError::new_err(format!("index {index} out of range")));
        }
        Ok(self.inner.codeword(index).components().map(|c| c.to_vec()).collect())
    }

    /// `(index, chordal distortion)` of the nearest codeword; inputs are normalized.
    fn quantize(&self, vectors: Vec<Vec<Complex64>>) -> PyResult<(usize, f64)> {
        let v = CompositePoint::from_unnormalized(&vectors).map_err(py_err)?;
        let q = grassmann::quantize(&v, &self.inner).map_err(py_err)?;
        Ok((q.index, q.distortion))
    }

    /// Monte Carlo mean distortion and its standard error.
    #[pyo3(signature = (samples, seed=1))]
    fn distortion(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
        py.detach(|| grassmann::measure_distortion(&self.inner, samples, RngStream::new(seed, 0)))
            .map_err(py_err)
    }
}

#[pymodule]
pub fn macfb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyCodebook>()?;
    m.add_function(wrap_pyfunction!(theory_report, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(drf_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(expected_top_sum, m)?)?;
    m.add_function(wrap_pyfunction!(mp_support, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_transform, m)?)?;
    m.add("STRATEGIES", Strategy::ALL.iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
    Ok(())
}
