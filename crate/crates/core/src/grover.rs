//! Grover search over `N = 2^k` items.
//!
//! One iteration is `D ∘ Z_t`: negate the marked amplitudes, then replace
//! every amplitude `α_i` by `2m - α_i` where `m` is the mean. `D` equals
//! `-W Z₀ W` with `W = H^{⊗k}`.
//!
//! With a single marked item, unmarked amplitude `α` and marked amplitude `β`,
//! the oracle turns `β` into `-β` before the mean is taken, so
//!
//! ```text
//! m  = ((N - 1) α - β) / N
//! α' = 2m - α
//! β' = 2m + β
//! ```

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{phase_flip_target, phase_flip_zero, GateOp, PhaseFlip};
use crate::statevec::StateVector;

/// A marked subset of `[0, 2^k)` together with its phase oracle `Z_t`.
///
/// Every application of the oracle is counted.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    k: usize,
    oracle: PhaseFlip,
    calls: Cell<usize>,
}

impl SearchProblem {
    pub fn from_predicate(k: usize, predicate: impl Fn(usize) -> bool) -> Result<Self> {
        Ok(Self {
            k,
            oracle: phase_flip_target(k, predicate)?,
            calls: Cell::new(0),
        })
    }

    pub fn single(k: usize, target: usize) -> Result<Self> {
        Self::with_targets(k, &[target])
    }

    pub fn with_targets(k: usize, targets: &[usize]) -> Result<Self> {
        if k < usize::BITS as usize {
            if let Some(&t) = targets.iter().find(|&&t| t >> k != 0) {
                return Err(Error::IndexOutOfRange { index: t, n_qubits: k });
            }
        }
        Self::from_predicate(k, |i| targets.contains(&i))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        1 << self.k
    }

    pub fn targets(&self) -> &[usize] {
        self.oracle.marked()
    }

    pub fn target_count(&self) -> usize {
        self.oracle.marked().len()
    }

    /// Classical check of a measured index; not counted as an oracle call.
    pub fn is_target(&self, index: usize) -> bool {
        self.oracle.marked().binary_search(&index).is_ok()
    }

    pub fn oracle_calls(&self) -> usize {
        self.calls.get()
    }

    /// `Z_t`, counted.
    pub fn apply_oracle(&self, state: &mut StateVector) -> Result<()> {
        self.oracle.apply_in_place(state)?;
        self.calls.set(self.calls.get() + 1);
        Ok(())
    }

    /// Total probability on the marked items.
    pub fn marked_probability(&self, state: &StateVector) -> f64 {
        let amps = state.amplitudes();
        self.targets().iter().map(|&t| amps[t].norm_sqr()).sum()
    }
}

/// `W = H^{⊗k}` in place.
pub fn apply_walsh_hadamard(state: &mut StateVector) -> Result<()> {
    for w in 1..=state.n_qubits() {
        state.apply_gate_in_place(&GateOp::h(w)?)?;
    }
    Ok(())
}

/// `α_i -> 2m - α_i` computed from the mean directly.
pub fn inversion_about_mean(state: &StateVector) -> StateVector {
    let mut out = state.clone();
    let amps = out.amps_mut();
    let mean = amps.iter().sum::<Complex64>() / amps.len() as f64;
    for a in amps.iter_mut() {
        *a = 2.0 * mean - *a;
    }
    out
}

/// `-W Z₀ W` as three gate layers and a global sign.
pub fn inversion_about_mean_gates(state: &StateVector) -> Result<StateVector> {
    let mut out = state.clone();
    apply_inversion_gates(&mut out)?;
    Ok(out)
}

fn apply_inversion_gates(state: &mut StateVector) -> Result<()> {
    apply_walsh_hadamard(state)?;
    phase_flip_zero(state.n_qubits())?.apply_in_place(state)?;
    apply_walsh_hadamard(state)?;
    for a in state.amps_mut() {
        *a = -*a;
    }
    Ok(())
}

/// One iteration: `Z_t`, then inversion about the mean.
pub fn grover_iterate(state: &StateVector, problem: &SearchProblem) -> Result<StateVector> {
    let mut out = state.clone();
    problem.apply_oracle(&mut out)?;
    apply_inversion_gates(&mut out)?;
    Ok(out)
}

/// `round(π/4 · √(N/t) - 1/2)`.
pub fn iteration_schedule(n: usize, target_count: usize) -> Result<usize> {
    if target_count == 0 {
        return Err(Error::invalid("target_count", "need at least one target"));
    }
    if target_count >= n {
        return Err(Error::invalid(
            "target_count",
            format!("{target_count} targets among {n} items"),
        ));
    }
    let x = PI / 4.0 * (n as f64 / target_count as f64).sqrt() - 0.5;
    Ok(x.round().max(0.0) as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroverRun {
    pub found: usize,
    pub success: bool,
    pub iterations: usize,
    pub oracle_calls: usize,
    /// Marked probability of the final state, read from the distribution.
    pub success_probability: f64,
    /// Marked probability after each iteration, starting at iteration 0.
    pub trace: Vec<f64>,
}

/// Runs the scheduled number of iterations from the uniform state, then
/// measures once.
pub fn run_grover(problem: &SearchProblem, rng_seed: u64) -> Result<GroverRun> {
    let iterations = iteration_schedule(problem.size(), problem.target_count())?;
    let calls_before = problem.oracle_calls();
    let mut state = StateVector::uniform(problem.k())?;
    let mut trace = Vec::with_capacity(iterations + 1);
    trace.push(problem.marked_probability(&state));
    for _ in 0..iterations {
        problem.apply_oracle(&mut state)?;
        apply_inversion_gates(&mut state)?;
        trace.push(problem.marked_probability(&state));
    }
    let found = state.measure_all(rng_seed, 1)[0];
    Ok(GroverRun {
        found,
        success: problem.is_target(found),
        iterations,
        oracle_calls: problem.oracle_calls() - calls_before,
        success_probability: problem.marked_probability(&state),
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudePair {
    pub alpha: f64,
    pub beta: f64,
}

/// Single-target amplitudes for iterations `0..=iterations`.
pub fn analytic_recurrence(n: usize, iterations: usize) -> Result<Vec<AmplitudePair>> {
    if n < 2 {
        return Err(Error::invalid("n", format!("{n} < 2")));
    }
    let nf = n as f64;
    let start = nf.sqrt().recip();
    let mut pair = AmplitudePair {
        alpha: start,
        beta: start,
    };
    let mut out = Vec::with_capacity(iterations + 1);
    out.push(pair);
    for _ in 0..iterations {
        let m = ((nf - 1.0) * pair.alpha - pair.beta) / nf;
        pair = AmplitudePair {
            alpha: 2.0 * m - pair.alpha,
            beta: 2.0 * m + pair.beta,
        };
        out.push(pair);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = rng_from_seed(seed);
        let raw: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn inversion_of_first_basis_state() {
        let s = StateVector::basis(2, 0).unwrap();
        let out = inversion_about_mean(&s);
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, e) in out.amplitudes().iter().zip(expect) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        let u = StateVector::uniform(3).unwrap();
        assert!(max_diff(&inversion_about_mean(&u), &u) < 1e-15);
        let twice = inversion_about_mean(&inversion_about_mean(&s));
        assert!(max_diff(&twice, &s) < 1e-15);
    }

    #[test]
    fn gate_and_direct_inversion_agree() {
        for n in 1..=8 {
            for seed in 0..4 {
                let s = random_state(n, seed * 31 + n as u64);
                let d = max_diff(&inversion_about_mean(&s), &inversion_about_mean_gates(&s).unwrap());
                assert!(d < 1e-12, "n={n}: {d}");
            }
        }
    }

    #[test]
    fn walsh_hadamard_squares_to_identity() {
        for n in [1, 4, 8] {
            let s = random_state(n, 99);
            let mut t = s.clone();
            apply_walsh_hadamard(&mut t).unwrap();
            apply_walsh_hadamard(&mut t).unwrap();
            assert!(max_diff(&s, &t) < 1e-12);
        }
    }

    #[test]
    fn four_items_one_iteration() {
        let p = SearchProblem::single(2, 3).unwrap();
        let out = grover_iterate(&StateVector::uniform(2).unwrap(), &p).unwrap();
        assert!((out.amplitudes()[3] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(p.oracle_calls(), 1);
        for seed in 0..10 {
            let run = run_grover(&SearchProblem::single(2, 3).unwrap(), seed).unwrap();
            assert_eq!((run.found, run.iterations, run.oracle_calls), (3, 1, 1));
        }
    }

    #[test]
    fn first_step_matches_hand_update() {
        let n = 16usize;
        let p = SearchProblem::single(4, 5).unwrap();
        let out = grover_iterate(&StateVector::uniform(4).unwrap(), &p).unwrap();
        let a = 0.25;
        let m = ((n as f64 - 1.0) * a - a) / n as f64;
        assert!((out.amplitudes()[5].re - (2.0 * m + a)).abs() < 1e-12);
        assert!((out.amplitudes()[0].re - (2.0 * m - a)).abs() < 1e-12);
    }

    #[test]
    fn empty_target_set_is_an_involution() {
        let p = SearchProblem::from_predicate(3, |_| false).unwrap();
        let s = random_state(3, 5);
        let twice = grover_iterate(&grover_iterate(&s, &p).unwrap(), &p).unwrap();
        assert!(max_diff(&twice, &s) < 1e-12);
        assert!(iteration_schedule(8, 0).is_err());
    }

    #[test]
    fn schedule_values() {
        assert_eq!(iteration_schedule(4, 1).unwrap(), 1);
        assert_eq!(iteration_schedule(1024, 1).unwrap(), 25);
        assert_eq!(iteration_schedule(4, 2).unwrap(), 1);
        assert!(iteration_schedule(4, 4).is_err());
    }

    #[test]
    fn schedule_maximizes_success_for_1024() {
        let p = SearchProblem::single(10, 777).unwrap();
        let mut s = StateVector::uniform(10).unwrap();
        let mut best = (0, 0.0);
        for j in 1..=40 {
            s = grover_iterate(&s, &p).unwrap();
            let q = p.marked_probability(&s);
            if q > best.1 {
                best = (j, q);
            }
        }
        assert_eq!(best.0, 25);
        assert!(best.1 >= 0.99);
    }

    #[test]
    fn two_of_four_marked_stays_at_one_half() {
        // sin²θ = 1/2 puts every iterate at sin²((2j+1)π/4) = 1/2.
        let p = SearchProblem::with_targets(2, &[1, 2]).unwrap();
        let mut s = StateVector::uniform(2).unwrap();
        for _ in 0..6 {
            s = grover_iterate(&s, &p).unwrap();
            assert!((p.marked_probability(&s) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_matches_simulation() {
        for k in [2, 4, 6, 10] {
            let n = 1usize << k;
            let t = n / 3;
            let steps = iteration_schedule(n, 1).unwrap() + 3;
            let pairs = analytic_recurrence(n, steps).unwrap();
            let p = SearchProblem::single(k, t).unwrap();
            let mut s = StateVector::uniform(k).unwrap();
            for (j, pair) in pairs.iter().enumerate() {
                if j > 0 {
                    s = grover_iterate(&s, &p).unwrap();
                }
                let other = if t == 0 { 1 } else { 0 };
                assert!((s.amplitudes()[t].re - pair.beta).abs() < 1e-12, "k={k} j={j}");
                assert!((s.amplitudes()[other].re - pair.alpha).abs() < 1e-12);
                let inv = (n as f64 - 1.0) * pair.alpha.powi(2) + pair.beta.powi(2);
                assert!((inv - 1.0).abs() < 1e-12);
            }
        }
        let four = analytic_recurrence(4, 1).unwrap();
        assert!((four[1].beta - 1.0).abs() < 1e-15 && four[1].alpha.abs() < 1e-15);
    }

    #[test]
    fn scheduled_success_for_all_small_sizes() {
        for k in 2..=12 {
            let p = SearchProblem::single(k, (1 << k) - 1).unwrap();
            let run = run_grover(&p, 0).unwrap();
            assert!(run.success_probability >= 0.9, "k={k}");
            assert_eq!(run.oracle_calls, run.iterations);
        }
    }

    #[test]
    fn trace_rises_to_the_schedule_point() {
        let run = run_grover(&SearchProblem::single(10, 777).unwrap(), 3).unwrap();
        assert_eq!(run.trace.len(), 26);
        assert!(run.trace.windows(2).all(|w| w[1] > w[0]));
        assert!(run.success);
    }

    #[test]
    fn target_outside_register_is_rejected() {
        assert!(SearchProblem::single(3, 8).is_err());
    }
}
