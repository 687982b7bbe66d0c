//! Quantum Fourier transform circuits.
//!
//! The builder follows the Cooley-Tukey style recursion: the transform on
//! `m` qubits is the transform on the top `m - 1` qubits, followed by one
//! controlled phase `T_{j,m-1}` between the new units-bit wire and every output
//! bit `b_j`, followed by a Hadamard on the new wire. That wire ends up holding
//! the *most* significant output bit, so the raw circuit emits the output in
//! reversed wire order; `bit_reversal_swaps` appends the `⌊k/2⌋` swaps that
//! restore standard order.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind, GateOp};
use crate::matrix::ComplexMatrix;
use crate::statevec::{StateVector, MAX_QUBITS};

/// Largest transform `dft_matrix` will materialize.
pub const MAX_DFT_QUBITS: usize = 10;

/// Largest register `qft_fidelity` will sweep (every basis input is simulated).
pub const MAX_FIDELITY_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QftSpec {
    pub qubits: usize,
    /// Drop every controlled phase whose angle is below `2π / 2^cutoff`.
    pub cutoff: Option<u32>,
    pub bit_reversal_swaps: bool,
}

impl QftSpec {
    pub fn exact(qubits: usize) -> Self {
        Self {
            qubits,
            cutoff: None,
            bit_reversal_swaps: true,
        }
    }

    pub fn with_cutoff(mut self, m: u32) -> Self {
        self.cutoff = Some(m);
        self
    }

    pub fn without_swaps(mut self) -> Self {
        self.bit_reversal_swaps = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 {
            return Err(Error::invalid("qubits", "need at least one qubit"));
        }
        if self.qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                required: self.qubits,
                cap: MAX_QUBITS,
            });
        }
        if let Some(m) = self.cutoff {
            if m == 0 || m as usize > self.qubits {
                return Err(Error::invalid(
                    "cutoff",
                    format!("{m} is outside 1..={}", self.qubits),
                ));
            }
        }
        Ok(())
    }

    /// Whether `T_{j,k}` survives the cutoff.
    pub fn keeps(&self, j: u32, k: u32) -> bool {
        match self.cutoff {
            Some(m) => k + 1 - j <= m,
            None => true,
        }
    }
}

/// `exp(2πi · num / 2^k)` with `num` reduced mod `2^k` before the division.
fn root_of_unity(num: u64, k: usize) -> Complex64 {
    let modulus = 1u64 << k;
    Complex64::from_polar(1.0, 2.0 * PI * (num % modulus) as f64 / modulus as f64)
}

/// Entry `(b, a) = 2^{-k/2} exp(2πi ab / 2^k)`.
pub fn dft_matrix(k: usize) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::invalid("k", "need at least one qubit"));
    }
    if k > MAX_DFT_QUBITS {
        return Err(Error::TooManyQubits {
            required: k,
            cap: MAX_DFT_QUBITS,
        });
    }
    let scale = (-(k as f64) / 2.0).exp2();
    Ok(ComplexMatrix::from_fn(1 << k, |b, a| {
        root_of_unity((a as u64) * (b as u64), k) * scale
    }))
}

pub fn build_qft_circuit(spec: &QftSpec) -> Result<Circuit> {
    spec.validate()?;
    let k = spec.qubits;
    let mut circuit = Circuit::new(k)?;
    for level in 1..=k {
        // Wire `level` carries the units bit of the `level`-qubit prefix; the
        // output bit b_j of the smaller transform sits on wire j + 1.
        let kk = (level - 1) as u32;
        for j in 0..kk {
            if spec.keeps(j, kk) {
                circuit.push(GateOp::cphase(j, kk, level, j as usize + 1)?)?;
            }
        }
        circuit.push(GateOp::h(level)?)?;
    }
    if spec.bit_reversal_swaps {
        for w in 1..=k / 2 {
            circuit.push(GateOp::swap(w, k + 1 - w)?)?;
        }
    }
    Ok(circuit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub hadamard: usize,
    pub controlled_phase: usize,
    pub swap: usize,
}

impl GateCounts {
    pub fn of(circuit: &Circuit) -> Self {
        Self {
            hadamard: circuit.count(|g| g == GateKind::H),
            controlled_phase: circuit.count(|g| matches!(g, GateKind::CPhase { .. })),
            swap: circuit.count(|g| g == GateKind::Swap),
        }
    }

    pub fn hadamard_and_phase(&self) -> usize {
        self.hadamard + self.controlled_phase
    }
}

/// Worst-case squared overlap between the circuit's output and the exact
/// transform, minimized over all `2^k` basis inputs.
pub fn qft_fidelity(k: usize, circuit: &Circuit) -> Result<f64> {
    if circuit.n_wires() != k {
        return Err(Error::invalid(
            "circuit",
            format!("{}-wire circuit for a {k}-qubit transform", circuit.n_wires()),
        ));
    }
    if k > MAX_FIDELITY_QUBITS {
        return Err(Error::TooManyQubits {
            required: k,
            cap: MAX_FIDELITY_QUBITS,
        });
    }
    let dim = 1usize << k;
    let scale = (-(k as f64) / 2.0).exp2();
    let overlaps: Result<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|a| {
            let out = StateVector::basis(k, a)?.run_circuit(circuit)?;
            let ip: Complex64 = out
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(b, amp)| (root_of_unity((a * b) as u64, k) * scale).conj() * amp)
                .sum();
            Ok(ip.norm_sqr())
        })
        .collect();
    Ok(overlaps?.into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{expand_to_matrix, hadamard};

    #[test]
    fn dft_small_cases() {
        let d1 = dft_matrix(1).unwrap();
        assert!(d1.max_abs_diff(hadamard().matrix()) < 1e-15);

        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let rows = [
            [one, one, one, one],
            [one, i, -one, -i],
            [one, -one, one, -one],
            [one, -i, -one, i],
        ];
        let expect = ComplexMatrix::from_fn(4, |r, c| rows[r][c] * 0.5);
        assert!(dft_matrix(2).unwrap().max_abs_diff(&expect) < 1e-15);

        let d5 = dft_matrix(5).unwrap();
        for a in 0..32 {
            assert!((d5.get(0, a) - Complex64::new(32f64.sqrt().recip(), 0.0)).norm() < 1e-15);
        }
        assert!(d5.is_unitary(1e-10));
        assert!(dft_matrix(11).is_err());
    }

    #[test]
    fn base_case_is_one_hadamard() {
        let c = build_qft_circuit(&QftSpec::exact(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.ops()[0].kind(), GateKind::H);
    }

    #[test]
    fn three_qubit_circuit_matches_dft() {
        let c = build_qft_circuit(&QftSpec::exact(3)).unwrap();
        let d = expand_to_matrix(&c).unwrap().max_abs_diff(&dft_matrix(3).unwrap());
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn unswapped_circuit_is_bit_reversed() {
        let k = 4;
        let raw = expand_to_matrix(&build_qft_circuit(&QftSpec::exact(k).without_swaps()).unwrap()).unwrap();
        let dft = dft_matrix(k).unwrap();
        let rev = |x: usize| x.reverse_bits() >> (usize::BITS as usize - k);
        let reindexed = ComplexMatrix::from_fn(1 << k, |b, a| raw.get(rev(b), a));
        assert!(reindexed.max_abs_diff(&dft) < 1e-9);
    }

    #[test]
    fn gate_count_recursion() {
        let mut prev = 0;
        for k in 1..=12 {
            let counts = GateCounts::of(&build_qft_circuit(&QftSpec::exact(k)).unwrap());
            assert_eq!(counts.hadamard_and_phase(), k * (k + 1) / 2);
            assert_eq!(counts.hadamard_and_phase(), prev + k);
            assert_eq!(counts.hadamard, k);
            assert_eq!(counts.swap, k / 2);
            prev = counts.hadamard_and_phase();
        }
    }

    #[test]
    fn cutoff_drops_small_phases() {
        let k = 8;
        let m = (k as f64).log2().ceil() as u32 + 2;
        let c = build_qft_circuit(&QftSpec::exact(k).with_cutoff(m)).unwrap();
        let phases = GateCounts::of(&c).controlled_phase;
        // Independent count: T_{j,kk} survives iff kk + 1 - j <= m.
        let mut expect = 0;
        for kk in 1..k as u32 {
            for j in 0..kk {
                if kk + 1 - j <= m {
                    expect += 1;
                }
            }
        }
        assert_eq!(phases, expect);
        assert!(phases <= k * (m as usize - 1));
        assert!(phases < k * (k - 1) / 2);
    }

    #[test]
    fn cutoff_equal_to_k_keeps_everything() {
        let k = 5;
        let c = build_qft_circuit(&QftSpec::exact(k).with_cutoff(k as u32)).unwrap();
        assert_eq!(c, build_qft_circuit(&QftSpec::exact(k)).unwrap());
        assert!((qft_fidelity(k, &c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fidelity_examples() {
        let exact = build_qft_circuit(&QftSpec::exact(4)).unwrap();
        assert!((qft_fidelity(4, &exact).unwrap() - 1.0).abs() < 1e-9);
        let identity = Circuit::new(2).unwrap();
        assert!((qft_fidelity(2, &identity).unwrap() - 0.25).abs() < 1e-12);
        assert!(qft_fidelity(3, &identity).is_err());
    }

    #[test]
    fn fidelity_is_monotone_in_cutoff() {
        let k = 7;
        let mut last = 0.0;
        for m in 1..=k as u32 {
            let c = build_qft_circuit(&QftSpec::exact(k).with_cutoff(m)).unwrap();
            let f = qft_fidelity(k, &c).unwrap();
            assert!(f + 1e-12 >= last, "m={m}: {f} < {last}");
            last = f;
        }
        assert!((last - 1.0).abs() < 1e-9);
    }

    #[test]
    fn transform_of_uniform_state_is_ground_state() {
        let k = 6;
        let c = build_qft_circuit(&QftSpec::exact(k)).unwrap();
        let out = StateVector::uniform(k).unwrap().run_circuit(&c).unwrap();
        assert!((out.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn spec_validation() {
        assert!(build_qft_circuit(&QftSpec::exact(0)).is_err());
        assert!(build_qft_circuit(&QftSpec::exact(4).with_cutoff(0)).is_err());
        assert!(build_qft_circuit(&QftSpec::exact(4).with_cutoff(5)).is_err());
    }
}
