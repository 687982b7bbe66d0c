//! Python bindings for `qdesk`.
//!
//! Simulator errors surface as `ValueError`, except a qubit budget overrun
//! (`MemoryError`) and algorithm give-ups such as exhausted Simon rounds
//! (`RuntimeError`).

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qdesk::gates::{Circuit, GateOp};
use qdesk::grover::{iteration_schedule, run_grover, SearchProblem};
use qdesk::qft::{build_qft_circuit, qft_fidelity, GateCounts, QftSpec};
use qdesk::shor::{self, FactoringInstance};
use qdesk::simon::{make_oracle, run_simon};
use qdesk::statevec::Amplitude;
use qdesk::{Error, StateVector};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::TooManyQubits { .. } => PyMemoryError::new_err(e.to_string()),
        Error::InconsistentSamples(_) | Error::RoundsExhausted { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qdesk::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn gate(name: &str, wires: &[usize], j: Option<u32>, k: Option<u32>) -> qdesk::Result<GateOp> {
    let arity = |n: usize| {
        if wires.len() == n {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                arity: n,
                wires: wires.len(),
            })
        }
    };
    match name.to_ascii_uppercase().as_str() {
        "H" => arity(1).and_then(|_| GateOp::h(wires[0])),
        "X" => arity(1).and_then(|_| GateOp::x(wires[0])),
        "Z" => arity(1).and_then(|_| GateOp::z(wires[0])),
        "CNOT" => arity(2).and_then(|_| GateOp::cnot(wires[0], wires[1])),
        "SWAP" => arity(2).and_then(|_| GateOp::swap(wires[0], wires[1])),
        "TOFFOLI" => arity(3).and_then(|_| GateOp::toffoli(wires[0], wires[1], wires[2])),
        "CPHASE" => {
            arity(2)?;
            match (j, k) {
                (Some(j), Some(k)) => GateOp::cphase(j, k, wires[0], wires[1]),
                _ => Err(qdesk::Error::InvalidArgument {
                    field: "j/k",
                    reason: "CPHASE needs both j and k".into(),
                }),
            }
        }
        other => Err(qdesk::Error::InvalidArgument {
            field: "name",
            reason: format!("unknown gate `{other}`"),
        }),
    }
}

/// A dense state vector; wire 1 is the most significant bit of an index.
#[pyclass(name = "StateVector", module = "qdesk")]
pub struct PyStateVector {
    inner: StateVector,
}

#[pymethods]
impl PyStateVector {
    #[new]
    #[pyo3(signature = (n_qubits, index = 0))]
    fn new(n_qubits: usize, index: usize) -> PyResult<Self> {
        Ok(Self {
            inner: StateVector::basis(n_qubits, index).py_err()?,
        })
    }

    #[staticmethod]
    fn uniform(n_qubits: usize) -> PyResult<Self> {
        Ok(Self {
            inner: StateVector::uniform(n_qubits).py_err()?,
        })
    }

    #[staticmethod]
    fn from_amplitudes(amplitudes: Vec<Amplitude>) -> PyResult<Self> {
        Ok(Self {
            inner: StateVector::from_amplitudes(amplitudes).py_err()?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn amplitudes(&self) -> Vec<Amplitude> {
        self.inner.amplitudes().to_vec()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.distribution().probs().to_vec()
    }

    /// Applies a named gate and returns the new state.
    #[pyo3(signature = (name, wires, j = None, k = None))]
    fn apply(&self, name: &str, wires: Vec<usize>, j: Option<u32>, k: Option<u32>) -> PyResult<Self> {
        let op = gate(name, &wires, j, k).py_err()?;
        Ok(Self {
            inner: self.inner.apply_gate(&op).py_err()?,
        })
    }

    /// Runs a circuit given in the line-oriented text format.
    fn run_circuit(&self, text: &str) -> PyResult<Self> {
        let circuit = Circuit::from_text(text, Some(self.inner.n_qubits())).py_err()?;
        Ok(Self {
            inner: self.inner.run_circuit(&circuit).py_err()?,
        })
    }

    #[pyo3(signature = (seed, shots = 1))]
    fn measure(&self, seed: u64, shots: usize) -> Vec<usize> {
        self.inner.measure_all(seed, shots)
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("StateVector(n_qubits={})", self.inner.n_qubits())
    }
}

/// Output distribution of a text circuit run on |0...0>, keyed by bit string.
#[pyfunction]
#[pyo3(signature = (text, wires = None))]
fn run_circuit<'py>(py: Python<'py>, text: &str, wires: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let circuit = Circuit::from_text(text, wires).py_err()?;
    let out = StateVector::basis(circuit.n_wires(), 0)
        .and_then(|s| s.run_circuit(&circuit))
        .py_err()?;
    let d = PyDict::new(py);
    for (k, p) in out.distribution().bitstring_entries() {
        d.set_item(k, p)?;
    }
    Ok(d)
}

/// Text form of a QFT circuit.
#[pyfunction]
#[pyo3(signature = (qubits, cutoff = None, swaps = true))]
fn qft_circuit(qubits: usize, cutoff: Option<u32>, swaps: bool) -> PyResult<String> {
    qft(qubits, cutoff, swaps).and_then(|c| c.to_text()).py_err()
}

fn qft(qubits: usize, cutoff: Option<u32>, swaps: bool) -> qdesk::Result<Circuit> {
    let mut spec = QftSpec::exact(qubits);
    if let Some(m) = cutoff {
        spec = spec.with_cutoff(m);
    }
    if !swaps {
        spec = spec.without_swaps();
    }
    build_qft_circuit(&spec)
}

/// Gate counts and worst-case fidelity against the exact transform.
#[pyfunction]
#[pyo3(signature = (qubits, cutoff = None, swaps = true))]
fn qft_report<'py>(py: Python<'py>, qubits: usize, cutoff: Option<u32>, swaps: bool) -> PyResult<Bound<'py, PyDict>> {
    let c = qft(qubits, cutoff, swaps).py_err()?;
    let counts = GateCounts::of(&c);
    let d = PyDict::new(py);
    d.set_item("hadamard", counts.hadamard)?;
    d.set_item("controlled_phase", counts.controlled_phase)?;
    d.set_item("swap", counts.swap)?;
    d.set_item("fidelity", qft_fidelity(qubits, &c).py_err()?)?;
    Ok(d)
}

/// Recovers the hidden shift `c` of a random two-to-one oracle.
#[pyfunction]
#[pyo3(signature = (n, c, seed, max_rounds = None))]
fn simon<'py>(py: Python<'py>, n: usize, c: u64, seed: u64, max_rounds: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let oracle = make_oracle(n, c, qdesk::rng::derive_seed(seed, 0)).py_err()?;
    let run = run_simon(&oracle, max_rounds.unwrap_or(4 * n), qdesk::rng::derive_seed(seed, 1)).py_err()?;
    let d = PyDict::new(py);
    d.set_item("recovered_c", run.shift)?;
    d.set_item("rounds", run.rounds)?;
    d.set_item("samples", run.samples)?;
    Ok(d)
}

/// Factors `n` by randomized order finding.
#[pyfunction]
#[pyo3(signature = (n, seed, max_attempts = 8))]
fn factor<'py>(py: Python<'py>, n: u64, seed: u64, max_attempts: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = shor::factor(n, max_attempts, seed).py_err()?;
    let d = PyDict::new(py);
    d.set_item("factors", r.factors.map(|f| (f[0], f[1])))?;
    d.set_item("x", r.x)?;
    d.set_item("measured_c", r.measured_c)?;
    d.set_item("recovered_r", r.recovered_r)?;
    d.set_item("failure", r.failure.map(|f| f.as_str()))?;
    d.set_item("attempts", r.attempts.len())?;
    Ok(d)
}

/// Order recovered from a measured exponent-register value, or `None`.
#[pyfunction]
fn recover_order(n: u64, x: u64, c: u64) -> PyResult<Option<u64>> {
    let inst = FactoringInstance::new(n, x).py_err()?;
    Ok(shor::recover_order(&inst, c).map(|o| o.r))
}

#[pyfunction]
fn multiplicative_order(x: u64, n: u64) -> PyResult<u64> {
    shor::multiplicative_order(x, n).py_err()
}

#[pyfunction]
fn modexp(x: u64, a: u64, n: u64) -> PyResult<u64> {
    shor::modexp(x, a, n).py_err()
}

/// Grover search for the given marked indices among `2^qubits`.
#[pyfunction]
fn grover<'py>(py: Python<'py>, qubits: usize, targets: Vec<usize>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let problem = SearchProblem::with_targets(qubits, &targets).py_err()?;
    let run = run_grover(&problem, seed).py_err()?;
    let d = PyDict::new(py);
    d.set_item("found", run.found)?;
    d.set_item("success", run.success)?;
    d.set_item("iterations", run.iterations)?;
    d.set_item("oracle_calls", run.oracle_calls)?;
    d.set_item("success_probability", run.success_probability)?;
    d.set_item("trace", run.trace)?;
    Ok(d)
}

#[pyfunction]
fn grover_schedule(n: usize, target_count: usize) -> PyResult<usize> {
    iteration_schedule(n, target_count).py_err()
}

#[pymodule]
#[pyo3(name = "qdesk")]
fn qdesk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateVector>()?;
    m.add_function(wrap_pyfunction!(run_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(qft_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(qft_report, m)?)?;
    m.add_function(wrap_pyfunction!(simon, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(recover_order, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicative_order, m)?)?;
    m.add_function(wrap_pyfunction!(modexp, m)?)?;
    m.add_function(wrap_pyfunction!(grover, m)?)?;
    m.add_function(wrap_pyfunction!(grover_schedule, m)?)?;
    m.add("DEFAULT_SEED", qdesk::rng::DEFAULT_SEED)?;
    Ok(())
}
