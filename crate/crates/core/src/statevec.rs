//! Dense state vectors over `2^n` computational basis states.
//!
//! Basis index convention: wire 1 is the most significant bit, so the index
//! of `|b1 b2 ... bn>` reads the bit string left to right.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::{bit_position, Circuit, GateOp};
use crate::rng::rng_from_seed;

pub type Amplitude = Complex64;

/// Hard cap on register size: `2^24` amplitudes is 256 MiB.
pub const MAX_QUBITS: usize = 24;

/// Tolerance on `Σ|α|² = 1`.
pub const NORM_TOL: f64 = 1e-10;

// States at least this large are split across threads. Each thread works on
// a disjoint block with the same arithmetic, so results do not depend on the
// thread count.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n_qubits", "need at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            required: n,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// The basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Equal superposition of every basis state.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    /// Validates length, finiteness and normalization. Never renormalizes.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid("amps", format!("length {dim} is not 2^n with n >= 1")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        if let Some(i) = amps.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let s = Self { n_qubits, amps };
        s.check_normalized()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&self, op: &GateOp) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_in_place(op)?;
        Ok(out)
    }

    pub fn run_circuit(&self, circuit: &Circuit) -> Result<Self> {
        if circuit.n_wires() != self.n_qubits {
            return Err(Error::invalid(
                "circuit",
                format!(
                    "{}-wire circuit applied to {}-qubit state",
                    circuit.n_wires(),
                    self.n_qubits
                ),
            ));
        }
        let mut out = self.clone();
        for op in circuit.ops() {
            out.apply_gate_in_place(op)?;
        }
        Ok(out)
    }

    /// Applies `op` on its wires, leaving every other wire untouched.
    ///
    /// The `2^(n-a)` groups of basis states that differ only on the gate's
    /// `a` wires are visited by inserting zero bits at the gate positions; each
    /// group is a length-`2^a` vector multiplied by the gate matrix.
    pub(crate) fn apply_gate_in_place(&mut self, op: &GateOp) -> Result<()> {
        let n = self.n_qubits;
        if let Some(&w) = op.wires().iter().find(|&&w| w == 0 || w > n) {
            return Err(Error::WireOutOfRange { wire: w, n_wires: n });
        }
        let arity = op.arity();
        let positions: Vec<usize> = op.wires().iter().map(|&w| bit_position(n, w)).collect();
        let mut sorted = positions.clone();
        sorted.sort_unstable();

        // offsets[t]: where local index t lands relative to a group base.
        let offsets: Vec<usize> = (0..1usize << arity)
            .map(|t| {
                positions
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| ((t >> (arity - 1 - i)) & 1) << p)
                    .sum()
            })
            .collect();

        let gate = op.matrix();
        let kernel = GroupKernel {
            sorted: &sorted,
            offsets: &offsets,
            gate,
        };

        let block = 1usize << (sorted[arity - 1] + 1);
        if self.amps.len() >= PAR_THRESHOLD && self.amps.len() / block >= 2 {
            self.amps
                .par_chunks_mut(block)
                .for_each(|chunk| kernel.run(chunk));
        } else {
            kernel.run(&mut self.amps);
        }
        Ok(())
    }

    /// Applies a basis permutation `|i> -> |perm(i)>`. Fails if `perm` is not
    /// a bijection of `[0, 2^n)`.
    pub fn apply_permutation(&self, perm: impl Fn(usize) -> usize) -> Result<Self> {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        let mut hit = vec![false; dim];
        for (i, &a) in self.amps.iter().enumerate() {
            let j = perm(i);
            if j >= dim || std::mem::replace(&mut hit[j], true) {
                return Err(Error::invalid("perm", format!("not a permutation: {i} -> {j}")));
            }
            out[j] = a;
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    pub fn distribution(&self) -> Distribution {
        Distribution {
            n_qubits: self.n_qubits,
            probs: self.amps.iter().map(Complex64::norm_sqr).collect(),
        }
    }

    /// `shots` independent computational-basis measurements of the whole register.
    pub fn measure_all(&self, rng_seed: u64, shots: usize) -> Vec<usize> {
        self.distribution().sample(rng_seed, shots)
    }
}

struct GroupKernel<'a> {
    sorted: &'a [usize],
    offsets: &'a [usize],
    gate: &'a crate::gates::GateMatrix,
}

impl GroupKernel<'_> {
    fn run(&self, amps: &mut [Complex64]) {
        let arity = self.sorted.len();
        let groups = amps.len() >> arity;
        let dim = 1usize << arity;
        let mut buf = [Complex64::new(0.0, 0.0); 8];
        for g in 0..groups {
            let mut base = g;
            for &p in self.sorted {
                base = ((base >> p) << (p + 1)) | (base & ((1 << p) - 1));
            }
            if self.gate.is_diagonal() {
                for t in 0..dim {
                    let d = self.gate.entry(t, t);
                    if d.re != 1.0 || d.im != 0.0 {
                        amps[base + self.offsets[t]] *= d;
                    }
                }
                continue;
            }
            for (slot, &off) in buf.iter_mut().zip(self.offsets.iter()) {
                *slot = amps[base + off];
            }
            for r in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, &b) in buf[..dim].iter().enumerate() {
                    acc += self.gate.entry(r, t) * b;
                }
                amps[base + self.offsets[r]] = acc;
            }
        }
    }
}

/// Born-rule probabilities of a measured register.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Distribution of the register held on wires `first..=last`.
    pub fn marginal(&self, first: usize, last: usize) -> Result<Vec<f64>> {
        let width = register_width(self.n_qubits, first, last)?;
        let mut out = vec![0.0; 1 << width];
        for (i, &p) in self.probs.iter().enumerate() {
            out[extract_bits(i, self.n_qubits, first, last)] += p;
        }
        Ok(out)
    }

    /// Inverse-CDF sampling from a `ChaCha8` stream seeded with `rng_seed`.
    pub fn sample(&self, rng_seed: u64, shots: usize) -> Vec<usize> {
        let mut rng = rng_from_seed(rng_seed);
        let mut cum = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cum.push(acc);
        }
        let last_nonzero = self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        (0..shots)
            .map(|_| {
                let u: f64 = rng.gen::<f64>() * acc;
                cum.partition_point(|&c| c <= u).min(last_nonzero)
            })
            .collect()
    }

    /// Zero-padded bit string (wire 1 first) for each index with nonzero probability.
    pub fn bitstring_entries(&self) -> Vec<(String, f64)> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-15)
            .map(|(i, &p)| (format!("{i:0width$b}", width = self.n_qubits), p))
            .collect()
    }
}

fn register_width(n_qubits: usize, first: usize, last: usize) -> Result<usize> {
    if first == 0 || last < first {
        return Err(Error::invalid("wire_range", format!("empty span {first}..={last}")));
    }
    if last > n_qubits {
        return Err(Error::WireOutOfRange {
            wire: last,
            n_wires: n_qubits,
        });
    }
    Ok(last - first + 1)
}

#[inline]
fn extract_bits(index: usize, n_qubits: usize, first: usize, last: usize) -> usize {
    (index >> (n_qubits - last)) & ((1 << (last - first + 1)) - 1)
}

pub fn init_basis(n_qubits: usize, index: usize) -> Result<StateVector> {
    StateVector::basis(n_qubits, index)
}

pub fn apply_gate(state: &StateVector, op: &GateOp) -> Result<StateVector> {
    state.apply_gate(op)
}

pub fn distribution(state: &StateVector) -> Distribution {
    state.distribution()
}

pub fn measure_all(state: &StateVector, rng_seed: u64, shots: usize) -> Vec<usize> {
    state.measure_all(rng_seed, shots)
}

/// Integer held on wires `first..=last` of a measured `n_qubits` string,
/// read most significant wire first.
pub fn extract_register(index: usize, n_qubits: usize, first: usize, last: usize) -> Result<usize> {
    register_width(n_qubits, first, last)?;
    Ok(extract_bits(index, n_qubits, first, last))
}
