//! Simon's hidden-shift problem over F₂ⁿ.
//!
//! Register layout for the sampling circuit: wires `1..=n` hold the input
//! register `x`, wires `n+1..=2n` the output register `w`. The oracle acts as
//! the reversible basis permutation `(x, w) -> (x, w xor f(x))`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::rng::{derive_seed, rng_from_seed};
use crate::statevec::{extract_register, Distribution, StateVector, MAX_QUBITS};

/// Largest input width for which an oracle table is built.
pub const MAX_ORACLE_BITS: usize = 12;

/// Largest input width for the classical collision search.
pub const MAX_CLASSICAL_BITS: usize = 8;

/// Binary inner product `a · b mod 2`.
pub fn dot(a: u64, b: u64) -> u64 {
    u64::from((a & b).count_ones() % 2 == 1)
}

/// Rows of n-bit vectors over F₂, bit `n - i` of a row being coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gf2Matrix {
    n: usize,
    rows: Vec<u64>,
}

impl Gf2Matrix {
    pub fn new(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    pub fn from_rows(n: usize, rows: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut m = Self::new(n);
        for r in rows {
            m.push(r)?;
        }
        Ok(m)
    }

    /// Adds a row unless an identical one is already present. Returns whether
    /// the row was new.
    pub fn push(&mut self, row: u64) -> Result<bool> {
        if self.n < 64 && row >> self.n != 0 {
            return Err(Error::invalid("row", format!("{row:#b} is wider than {} bits", self.n)));
        }
        if self.rows.contains(&row) {
            return Ok(false);
        }
        self.rows.push(row);
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Reduced row echelon form: returns (pivot bit, row) pairs where each
    /// pivot bit is set in its own row and clear in every other.
    fn rref(&self) -> Vec<(u32, u64)> {
        let mut basis: Vec<(u32, u64)> = Vec::new();
        for &row in &self.rows {
            let mut v = row;
            for &(p, b) in &basis {
                if v >> p & 1 == 1 {
                    v ^= b;
                }
            }
            if v == 0 {
                continue;
            }
            let p = 63 - v.leading_zeros();
            for entry in basis.iter_mut() {
                if entry.1 >> p & 1 == 1 {
                    entry.1 ^= v;
                }
            }
            basis.push((p, v));
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rref().len()
    }

    /// A basis of `{ v : row · v = 0 for every row }`.
    pub fn nullspace(&self) -> Vec<u64> {
        let basis = self.rref();
        let pivots: u64 = basis.iter().map(|&(p, _)| 1u64 << p).sum();
        (0..self.n as u32)
            .filter(|&f| pivots >> f & 1 == 0)
            .map(|f| {
                let mut v = 1u64 << f;
                for &(p, row) in &basis {
                    if row >> f & 1 == 1 {
                        v |= 1 << p;
                    }
                }
                v
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShiftRecovery {
    Shift(u64),
    InsufficientRank { rank: usize },
}

/// The unique nonzero `c` orthogonal to every sample, once the samples span
/// an `(n-1)`-dimensional space.
pub fn recover_shift(samples: &Gf2Matrix, n: usize) -> Result<ShiftRecovery> {
    if samples.n() != n {
        return Err(Error::invalid("samples", format!("rows are {} bits, expected {n}", samples.n())));
    }
    let rank = samples.rank();
    if rank == n {
        return Err(Error::InconsistentSamples(n));
    }
    if rank + 1 < n {
        return Ok(ShiftRecovery::InsufficientRank { rank });
    }
    let null = samples.nullspace();
    debug_assert_eq!(null.len(), 1);
    Ok(ShiftRecovery::Shift(null[0]))
}

/// A two-to-one function with `f(x) = f(y)` exactly when `y = x xor c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimonOracle {
    n: usize,
    shift: u64,
    table: Vec<u64>,
}

impl SimonOracle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }
}

/// Pairs the inputs into cosets `{x, x xor c}` and gives each coset a
/// distinct random output.
pub fn make_oracle(n: usize, c: u64, rng_seed: u64) -> Result<SimonOracle> {
    if n == 0 || n > MAX_ORACLE_BITS {
        return Err(Error::invalid("n", format!("{n} is outside 1..={MAX_ORACLE_BITS}")));
    }
    if c == 0 {
        return Err(Error::invalid("c", "the hidden shift must be nonzero"));
    }
    if c >> n != 0 {
        return Err(Error::invalid("c", format!("{c:#b} is wider than {n} bits")));
    }
    let size = 1usize << n;
    let mut values: Vec<u64> = (0..size as u64).collect();
    values.shuffle(&mut rng_from_seed(rng_seed));
    let mut next = values.into_iter();
    let mut table = vec![u64::MAX; size];
    for x in 0..size {
        if table[x] == u64::MAX {
            let v = next.next().expect("2^(n-1) cosets need 2^(n-1) values");
            table[x] = v;
            table[x ^ c as usize] = v;
        }
    }
    Ok(SimonOracle { n, shift: c, table })
}

/// The pre-measurement state: `H^n` on the input register, the oracle, then
/// `H^n` again.
pub fn simon_state(oracle: &SimonOracle) -> Result<StateVector> {
    let n = oracle.n();
    let total = 2 * n;
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            required: total,
            cap: MAX_QUBITS,
        });
    }
    let mut state = StateVector::basis(total, 0)?;
    for w in 1..=n {
        state.apply_gate_in_place(&GateOp::h(w)?)?;
    }
    let low = (1usize << n) - 1;
    state = state.apply_permutation(|idx| {
        let x = idx >> n;
        idx ^ (oracle.table[x] as usize & low)
    })?;
    for w in 1..=n {
        state.apply_gate_in_place(&GateOp::h(w)?)?;
    }
    Ok(state)
}

/// Distribution of the measured input register.
pub fn first_register_distribution(oracle: &SimonOracle) -> Result<Vec<f64>> {
    simon_state(oracle)?.distribution().marginal(1, oracle.n())
}

fn sample_input_register(dist: &Distribution, n: usize, seed: u64) -> Result<u64> {
    let idx = dist.sample(seed, 1)[0];
    Ok(extract_register(idx, 2 * n, 1, n)? as u64)
}

/// One run of the sampling circuit; the result is always orthogonal to `c`.
pub fn simon_sample(oracle: &SimonOracle, rng_seed: u64) -> Result<u64> {
    let dist = simon_state(oracle)?.distribution();
    sample_input_register(&dist, oracle.n(), rng_seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimonRun {
    pub shift: u64,
    pub rounds: usize,
    pub samples: Vec<u64>,
    pub hadamards: usize,
    pub oracle_calls: usize,
}

/// Samples until the collected rows reach rank `n - 1`, then solves for `c`.
///
/// Round `i` measures with seed `derive_seed(rng_seed, i)`, so each round is
/// exactly `simon_sample(oracle, derive_seed(rng_seed, i))`; the state is
/// prepared once and re-measured since it does not change between rounds.
pub fn run_simon(oracle: &SimonOracle, max_rounds: usize, rng_seed: u64) -> Result<SimonRun> {
    let n = oracle.n();
    if max_rounds < n {
        return Err(Error::invalid("max_rounds", format!("{max_rounds} < n = {n}")));
    }
    let mut rows = Gf2Matrix::new(n);
    let mut samples = Vec::new();
    let mut dist = None;
    while rows.rank() + 1 < n {
        if samples.len() == max_rounds {
            return Err(Error::RoundsExhausted {
                rounds: samples.len(),
                rank: rows.rank(),
                needed: n - 1,
            });
        }
        if dist.is_none() {
            dist = Some(simon_state(oracle)?.distribution());
        }
        let y = sample_input_register(dist.as_ref().unwrap(), n, derive_seed(rng_seed, samples.len() as u64))?;
        samples.push(y);
        if y != 0 {
            rows.push(y)?;
        }
    }
    let shift = match recover_shift(&rows, n)? {
        ShiftRecovery::Shift(c) => c,
        ShiftRecovery::InsufficientRank { rank } => unreachable!("loop exits at rank n-1, got {rank}"),
    };
    if oracle.eval(0) != oracle.eval(shift) {
        return Err(Error::InconsistentSamples(n));
    }
    let rounds = samples.len();
    Ok(SimonRun {
        shift,
        rounds,
        samples,
        hadamards: 2 * n * rounds,
        oracle_calls: rounds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalRun {
    pub queries: usize,
    pub shift: u64,
}

/// Queries distinct random inputs until two share an output; `c` is their xor.
pub fn classical_query_baseline(oracle: &SimonOracle, rng_seed: u64) -> Result<ClassicalRun> {
    let n = oracle.n();
    if n > MAX_CLASSICAL_BITS {
        return Err(Error::invalid("n", format!("{n} > {MAX_CLASSICAL_BITS}")));
    }
    let mut inputs: Vec<u64> = (0..1u64 << n).collect();
    inputs.shuffle(&mut rng_from_seed(rng_seed));
    let mut seen: HashMap<u64, u64> = HashMap::new();
    for (i, &x) in inputs.iter().enumerate() {
        let fx = oracle.eval(x);
        if let Some(&prev) = seen.get(&fx) {
            return Ok(ClassicalRun {
                queries: i + 1,
                shift: prev ^ x,
            });
        }
        seen.insert(fx, x);
    }
    unreachable!("a two-to-one function must collide within 2^(n-1) + 1 queries")
}
