//! Factoring by order finding.
//!
//! For an `L`-bit modulus the circuit uses a `2L`-qubit exponent register on
//! wires `1..=2L` and an `L`-qubit value register on wires `2L+1..=3L`. Modular
//! exponentiation is applied as the basis permutation
//! `(a, w) -> (a, w xor x^a mod N)`; no arithmetic workspace is simulated.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::qft::{build_qft_circuit, QftSpec};
use crate::rng::{derive_seed, rng_from_seed};
use crate::statevec::{extract_register, StateVector, MAX_QUBITS};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `x^a mod n` by square-and-multiply.
pub fn modexp(x: u64, mut a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid("n", format!("modulus {n} < 2")));
    }
    let n128 = u128::from(n);
    let mut base = u128::from(x) % n128;
    let mut acc = 1u128 % n128;
    while a > 0 {
        if a & 1 == 1 {
            acc = acc * base % n128;
        }
        base = base * base % n128;
        a >>= 1;
    }
    Ok(acc as u64)
}

fn bit_length(n: u64) -> usize {
    (u64::BITS - n.leading_zeros()) as usize
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Integer `k`-th root, rounded down.
fn iroot(n: u64, k: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / f64::from(k)).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    Even,
    Prime,
    PrimePower { base: u64, exponent: u32 },
    CompositeOk,
}

/// Screens out moduli the order-finding method cannot split.
pub fn is_trivial_case(n: u64) -> Result<Classification> {
    if n < 2 {
        return Err(Error::invalid("n", format!("{n} < 2")));
    }
    if is_prime(n) {
        return Ok(Classification::Prime);
    }
    if n.is_multiple_of(2) {
        return Ok(Classification::Even);
    }
    for k in (2..=bit_length(n) as u32).rev() {
        let m = iroot(n, k);
        if m > 1 && m.pow(k) == n && is_prime(m) {
            return Ok(Classification::PrimePower { base: m, exponent: k });
        }
    }
    Ok(Classification::CompositeOk)
}

/// Least `r > 0` with `x^r ≡ 1 (mod n)`, by exhaustive search.
pub fn multiplicative_order(x: u64, n: u64) -> Result<u64> {
    if n < 2 || gcd(x, n) != 1 {
        return Err(Error::invalid("x", format!("{x} is not a unit mod {n}")));
    }
    let mut r = 1;
    let mut v = x % n;
    while v != 1 {
        v = (u128::from(v) * u128::from(x) % u128::from(n)) as u64;
        r += 1;
    }
    Ok(r)
}

/// `x^m ≡ 1` and no proper divisor `m/p` of `m` also works.
pub fn is_exact_order(x: u64, m: u64, n: u64) -> bool {
    m > 0
        && modexp(x, m, n).is_ok_and(|v| v == 1)
        && prime_divisors(m)
            .into_iter()
            .all(|p| modexp(x, m / p, n).is_ok_and(|v| v != 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactoringInstance {
    pub modulus: u64,
    pub bits: usize,
    pub base: u64,
}

impl FactoringInstance {
    pub fn new(modulus: u64, base: u64) -> Result<Self> {
        if modulus < 15 {
            return Err(Error::invalid("n", format!("{modulus} < 15")));
        }
        match is_trivial_case(modulus)? {
            Classification::CompositeOk => {}
            other => return Err(Error::invalid("n", format!("{modulus} is {}", other.label()))),
        }
        if base < 2 || base >= modulus || gcd(base, modulus) != 1 {
            return Err(Error::invalid("x", format!("{base} is not a unit in (1, {modulus})")));
        }
        Ok(Self {
            modulus,
            bits: bit_length(modulus),
            base,
        })
    }

    /// Size of the exponent register's state space, `2^(2L)`.
    pub fn q(&self) -> u64 {
        1 << (2 * self.bits)
    }

    pub fn qubits(&self) -> usize {
        3 * self.bits
    }
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Even => "even",
            Classification::Prime => "prime",
            Classification::PrimePower { .. } => "a prime power",
            Classification::CompositeOk => "composite",
        }
    }
}

/// State just before measurement: uniform exponent register, the
/// exponentiation permutation, then the QFT on the exponent register.
pub fn order_finding_state(inst: &FactoringInstance) -> Result<StateVector> {
    let total = inst.qubits();
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            required: total,
            cap: MAX_QUBITS,
        });
    }
    let l = inst.bits;
    let first = 2 * l;
    let mut state = StateVector::basis(total, 0)?;
    for w in 1..=first {
        state.apply_gate_in_place(&GateOp::h(w)?)?;
    }
    let powers: Vec<usize> = (0..inst.q())
        .map(|a| modexp(inst.base, a, inst.modulus).map(|v| v as usize))
        .collect::<Result<_>>()?;
    state = state.apply_permutation(|idx| idx ^ powers[idx >> l])?;
    let qft = build_qft_circuit(&QftSpec::exact(first))?.embedded(total, 0)?;
    state.run_circuit(&qft)
}

/// Measured value of the exponent register, `c ∈ [0, 2^(2L))`.
pub fn run_order_finding_circuit(inst: &FactoringInstance, rng_seed: u64) -> Result<u64> {
    let idx = order_finding_state(inst)?.measure_all(rng_seed, 1)[0];
    Ok(extract_register(idx, inst.qubits(), 1, 2 * inst.bits)? as u64)
}

/// Closed-form probability of observing `(c, x^{a0} mod N)`.
///
/// The exponents mapping to `x^{a0}` are `a0 + b r` for
/// `b < ⌊Q/r⌋ + η`, where `η = 1` iff `a0 + ⌊Q/r⌋ r < Q`, so the probability is
/// `|Σ_b exp(2πi b r c / Q)|² / Q²`.
pub fn analytic_outcome_probability(inst: &FactoringInstance, c: u64, a0: u64) -> Result<f64> {
    let q = inst.q();
    if c >= q {
        return Err(Error::invalid("c", format!("{c} >= {q}")));
    }
    let r = multiplicative_order(inst.base, inst.modulus)?;
    if a0 >= r {
        return Err(Error::invalid("a0", format!("{a0} is not below the order {r}")));
    }
    let eta = u64::from(a0 + (q / r) * r < q);
    let terms = q / r + eta;
    let step = (u128::from(r) * u128::from(c)) % u128::from(q);
    let mut sum = Complex64::new(0.0, 0.0);
    for b in 0..terms {
        let num = (u128::from(b) * step) % u128::from(q);
        sum += Complex64::from_polar(1.0, 2.0 * PI * num as f64 / q as f64);
    }
    Ok(sum.norm_sqr() / (q as f64 * q as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub p: u64,
    pub q: u64,
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Convergents of `c / denom` with denominator below `n`, in expansion order.
pub fn continued_fraction_candidates(c: u64, denom: u64, n: u64) -> Vec<Convergent> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let (mut num, mut den) = (c, denom);
    while den != 0 {
        let t = num / den;
        (h_prev, h) = (h, t * h + h_prev);
        (k_prev, k) = (k, t * k + k_prev);
        if k >= n {
            break;
        }
        out.push(Convergent { p: h, q: k });
        (num, den) = (den, num - t * den);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderSource {
    /// From a measured `c` via continued fractions.
    #[serde(rename = "measured+cf")]
    MeasuredContinuedFraction,
    /// From classical exhaustive search.
    ExhaustiveOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderResult {
    pub r: u64,
    pub source: OrderSource,
}

/// Largest widening factor applied to convergent denominators.
pub const MAX_DENOMINATOR_MULTIPLE: u64 = 4;

/// Reads the order off a measurement.
///
/// Only convergents `p/q` with `p > 0` lying within `1/2^(L+1)` of `c/Q` are
/// considered. For each, the multiples `λq` with `λ ≤ 4` are tried and a
/// candidate is accepted only if it is exactly the multiplicative order of
/// `x`. Returns the least accepted candidate, or `None` on a miss.
pub fn recover_order(inst: &FactoringInstance, c: u64) -> Option<OrderResult> {
    let q_total = inst.q();
    let window = 1u128 << (inst.bits + 1);
    continued_fraction_candidates(c, q_total, inst.modulus)
        .into_iter()
        .filter(|cv| cv.p > 0)
        .filter(|cv| {
            // |c/Q - p/q| <= 1/2^(L+1)  <=>  |c q - p Q| 2^(L+1) <= Q q
            let lhs = (i128::from(c) * i128::from(cv.q) - i128::from(cv.p) * i128::from(q_total)).unsigned_abs();
            lhs * window <= u128::from(q_total) * u128::from(cv.q)
        })
        .flat_map(|cv| (1..=MAX_DENOMINATOR_MULTIPLE).map(move |l| l * cv.q))
        .filter(|&m| is_exact_order(inst.base, m, inst.modulus))
        .min()
        .map(|r| OrderResult {
            r,
            source: OrderSource::MeasuredContinuedFraction,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    OddOrder,
    SquareRootOfMinusOne,
    ContinuedFractionMiss,
}

impl FailureReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailureReason::OddOrder => "odd r",
            FailureReason::SquareRootOfMinusOne => "x^{r/2} ≡ −1",
            FailureReason::ContinuedFractionMiss => "cf miss",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FailureReason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extraction {
    Factors(u64, u64),
    Failed(FailureReason),
}

/// Congruence of squares: with `y = x^{r/2}`, `y² ≡ 1` and `y ≢ ±1` give the
/// factors `gcd(y + 1, N)` and `gcd(y - 1, N)`.
pub fn extract_factors(n: u64, x: u64, r: u64) -> Result<Extraction> {
    if !is_exact_order(x, r, n) {
        return Err(Error::invalid("r", format!("{r} is not the order of {x} mod {n}")));
    }
    if r % 2 == 1 {
        return Ok(Extraction::Failed(FailureReason::OddOrder));
    }
    let y = modexp(x, r / 2, n)?;
    if y == n - 1 {
        return Ok(Extraction::Failed(FailureReason::SquareRootOfMinusOne));
    }
    let f1 = gcd(y + 1, n);
    let f2 = gcd(y + n - 1, n);
    debug_assert!(f1 > 1 && f1 < n && f2 > 1 && f2 < n);
    Ok(Extraction::Factors(f1, f2))
}

/// Fraction of units `x` mod `n` whose order is even with `x^{r/2} ≢ −1`.
pub fn good_residue_fraction(n: u64) -> Result<f64> {
    let mut units = 0u32;
    let mut good = 0u32;
    for x in 1..n {
        if gcd(x, n) != 1 {
            continue;
        }
        units += 1;
        let r = multiplicative_order(x, n)?;
        if let Extraction::Factors(..) = extract_factors(n, x, r)? {
            good += 1;
        }
    }
    Ok(f64::from(good) / f64::from(units))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttemptOutcome {
    #[serde(rename = "lucky gcd")]
    LuckyGcd,
    Factored,
    #[serde(rename = "odd r")]
    OddOrder,
    #[serde(rename = "x^{r/2} ≡ −1")]
    SquareRootOfMinusOne,
    #[serde(rename = "cf miss")]
    ContinuedFractionMiss,
}

impl From<FailureReason> for AttemptOutcome {
    fn from(f: FailureReason) -> Self {
        match f {
            FailureReason::OddOrder => AttemptOutcome::OddOrder,
            FailureReason::SquareRootOfMinusOne => AttemptOutcome::SquareRootOfMinusOne,
            FailureReason::ContinuedFractionMiss => AttemptOutcome::ContinuedFractionMiss,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub index: usize,
    pub x: u64,
    pub outcome: AttemptOutcome,
    pub measured_c: Option<u64>,
    pub recovered_r: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub x: Option<u64>,
    pub measured_c: Option<u64>,
    pub recovered_r: Option<u64>,
    pub factors: Option<[u64; 2]>,
    pub failure: Option<FailureReason>,
    pub attempts: Vec<Attempt>,
}

impl FactorReport {
    pub fn succeeded(&self) -> bool {
        self.factors.is_some()
    }
}

/// Seed of the order-finding measurement in attempt `index`.
pub fn attempt_circuit_seed(rng_seed: u64, index: usize) -> u64 {
    derive_seed(derive_seed(rng_seed, index as u64), 1)
}

/// Repeats random-base order finding until a factor pair is found.
///
/// Attempt `i` draws `x` uniformly from `[2, N-2]` using seed
/// `derive_seed(rng_seed, i)`; a shared factor with `N` is reported as a
/// lucky gcd.
pub fn factor(n: u64, max_attempts: usize, rng_seed: u64) -> Result<FactorReport> {
    match is_trivial_case(n)? {
        Classification::CompositeOk => {}
        other => return Err(Error::invalid("n", format!("{n} is {}", other.label()))),
    }
    if n < 15 {
        return Err(Error::invalid("n", format!("{n} < 15")));
    }
    if max_attempts == 0 {
        return Err(Error::invalid("max_attempts", "must be positive"));
    }
    let needed = 3 * bit_length(n);
    if needed > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            required: needed,
            cap: MAX_QUBITS,
        });
    }
    let mut report = FactorReport {
        n,
        x: None,
        measured_c: None,
        recovered_r: None,
        factors: None,
        failure: None,
        attempts: Vec::new(),
    };
    for index in 0..max_attempts {
        let mut rng = rng_from_seed(derive_seed(rng_seed, index as u64));
        let x = rng.gen_range(2..=n - 2);
        report.x = Some(x);
        report.measured_c = None;
        report.recovered_r = None;
        let g = gcd(x, n);
        if g > 1 {
            report.attempts.push(Attempt {
                index,
                x,
                outcome: AttemptOutcome::LuckyGcd,
                measured_c: None,
                recovered_r: None,
            });
            report.factors = Some(sorted(g, n / g));
            report.failure = None;
            return Ok(report);
        }
        let inst = FactoringInstance::new(n, x)?;
        let c = run_order_finding_circuit(&inst, attempt_circuit_seed(rng_seed, index))?;
        report.measured_c = Some(c);
        let extraction = match recover_order(&inst, c) {
            None => Extraction::Failed(FailureReason::ContinuedFractionMiss),
            Some(order) => {
                report.recovered_r = Some(order.r);
                extract_factors(n, x, order.r)?
            }
        };
        let outcome = match extraction {
            Extraction::Factors(a, b) => {
                report.factors = Some(sorted(a, b));
                report.failure = None;
                AttemptOutcome::Factored
            }
            Extraction::Failed(reason) => {
                report.failure = Some(reason);
                reason.into()
            }
        };
        report.attempts.push(Attempt {
            index,
            x,
            outcome,
            measured_c: Some(c),
            recovered_r: report.recovered_r,
        });
        if report.factors.is_some() {
            return Ok(report);
        }
    }
    Ok(report)
}

fn sorted(a: u64, b: u64) -> [u64; 2] {
    [a.min(b), a.max(b)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modexp_examples() {
        assert_eq!(modexp(7, 4, 15).unwrap(), 1);
        assert_eq!(modexp(9, 0, 20).unwrap(), 1);
        assert_eq!(modexp(2, 10, 1024).unwrap(), 0);
        assert!(modexp(2, 3, 1).is_err());
        for x in 0..30u64 {
            for a in 0..20u32 {
                assert_eq!(modexp(x, u64::from(a), 37).unwrap(), naive(x, a, 37));
            }
        }
    }

    fn naive(x: u64, a: u32, n: u64) -> u64 {
        (0..a).fold(1 % n, |acc, _| acc * x % n)
    }

    #[test]
    fn classification() {
        assert_eq!(is_trivial_case(15).unwrap(), Classification::CompositeOk);
        assert_eq!(
            is_trivial_case(27).unwrap(),
            Classification::PrimePower { base: 3, exponent: 3 }
        );
        assert_eq!(is_trivial_case(16).unwrap(), Classification::Even);
        assert_eq!(is_trivial_case(13).unwrap(), Classification::Prime);
        assert_eq!(is_trivial_case(2).unwrap(), Classification::Prime);
        assert_eq!(is_trivial_case(225).unwrap(), Classification::CompositeOk);
        assert_eq!(
            is_trivial_case(49).unwrap(),
            Classification::PrimePower { base: 7, exponent: 2 }
        );
        assert!(is_trivial_case(1).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(7, 15).unwrap(), 4);
        assert_eq!(multiplicative_order(2, 21).unwrap(), 6);
        assert_eq!(multiplicative_order(14, 15).unwrap(), 2);
        assert!(multiplicative_order(3, 15).is_err());
        assert!(is_exact_order(7, 4, 15));
        assert!(!is_exact_order(7, 8, 15));
        assert!(!is_exact_order(7, 3, 15));
    }

    #[test]
    fn instance_validation() {
        assert!(FactoringInstance::new(15, 7).is_ok());
        assert!(FactoringInstance::new(15, 5).is_err());
        assert!(FactoringInstance::new(16, 3).is_err());
        assert!(FactoringInstance::new(13, 2).is_err());
        let inst = FactoringInstance::new(21, 2).unwrap();
        assert_eq!((inst.bits, inst.q(), inst.qubits()), (5, 1024, 15));
    }

    #[test]
    fn convergent_examples() {
        let cs = continued_fraction_candidates(192, 256, 15);
        assert!(cs.contains(&Convergent { p: 3, q: 4 }));
        assert_eq!(continued_fraction_candidates(0, 256, 15), vec![Convergent { p: 0, q: 1 }]);
        let cs = continued_fraction_candidates(85, 256, 21);
        assert_eq!(cs, vec![Convergent { p: 0, q: 1 }, Convergent { p: 1, q: 3 }]);
        for c in 0..256 {
            for cv in continued_fraction_candidates(c, 256, 200) {
                assert_eq!(gcd(cv.p, cv.q), 1);
                assert!(cv.q < 200);
            }
        }
    }

    #[test]
    fn recover_order_examples() {
        let inst = FactoringInstance::new(15, 7).unwrap();
        assert_eq!(recover_order(&inst, 192).unwrap().r, 4);
        assert_eq!(recover_order(&inst, 64).unwrap().r, 4);
        assert_eq!(recover_order(&inst, 128).unwrap().r, 4);
        assert!(recover_order(&inst, 0).is_none());

        // Q = 1024, r = 6: peaks at d·1024/6.
        let inst = FactoringInstance::new(21, 2).unwrap();
        for d in [1u64, 5] {
            let c = (d * 1024 + 3) / 6;
            assert_eq!(recover_order(&inst, c).unwrap().r, 6, "c = {c}");
        }
    }

    #[test]
    fn extraction_examples() {
        assert_eq!(extract_factors(15, 7, 4).unwrap(), Extraction::Factors(5, 3));
        assert_eq!(
            extract_factors(15, 14, 2).unwrap(),
            Extraction::Failed(FailureReason::SquareRootOfMinusOne)
        );
        assert_eq!(extract_factors(21, 2, 6).unwrap(), Extraction::Factors(3, 7));
        assert_eq!(
            extract_factors(21, 4, 3).unwrap(),
            Extraction::Failed(FailureReason::OddOrder)
        );
        assert!(extract_factors(15, 7, 8).is_err());
    }

    #[test]
    fn analytic_probability_examples() {
        let inst = FactoringInstance::new(15, 7).unwrap();
        assert!((analytic_outcome_probability(&inst, 64, 0).unwrap() - 1.0 / 16.0).abs() < 1e-12);
        assert!(analytic_outcome_probability(&inst, 65, 0).unwrap() < 1e-12);
        assert!(analytic_outcome_probability(&inst, 256, 0).is_err());
        assert!(analytic_outcome_probability(&inst, 0, 4).is_err());

        // Completeness over every (c, a0) class, including a case where r does not divide Q.
        for (n, x) in [(15, 7), (21, 2)] {
            let inst = FactoringInstance::new(n, x).unwrap();
            let r = multiplicative_order(x, n).unwrap();
            let total: f64 = (0..inst.q())
                .flat_map(|c| (0..r).map(move |a0| (c, a0)))
                .map(|(c, a0)| analytic_outcome_probability(&inst, c, a0).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "{n}: {total}");
        }
    }

    #[test]
    fn fifteen_with_seven_peaks_at_multiples_of_64() {
        let inst = FactoringInstance::new(15, 7).unwrap();
        let marginal = order_finding_state(&inst).unwrap().distribution().marginal(1, 8).unwrap();
        for (c, p) in marginal.iter().enumerate() {
            let expect = if c % 64 == 0 { 0.25 } else { 0.0 };
            assert!((p - expect).abs() < 1e-10, "c={c}: {p}");
        }
        for seed in 0..20 {
            assert_eq!(run_order_finding_circuit(&inst, seed).unwrap() % 64, 0);
        }
    }

    #[test]
    fn fifteen_with_fourteen_peaks_at_0_and_128() {
        let inst = FactoringInstance::new(15, 14).unwrap();
        let marginal = order_finding_state(&inst).unwrap().distribution().marginal(1, 8).unwrap();
        for (c, p) in marginal.iter().enumerate() {
            let expect = if c % 128 == 0 { 0.5 } else { 0.0 };
            assert!((p - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn value_register_holds_the_orbit() {
        let inst = FactoringInstance::new(21, 5).unwrap();
        let d = order_finding_state(&inst).unwrap().distribution();
        let mut values: Vec<u64> = (0..d.probs().len())
            .filter(|&i| d.prob(i) > 1e-12)
            .map(|i| extract_register(i, 15, 11, 15).unwrap() as u64)
            .collect();
        values.sort_unstable();
        values.dedup();
        let mut orbit: Vec<u64> = (0..6).map(|a| modexp(5, a, 21).unwrap()).collect();
        orbit.sort_unstable();
        assert_eq!(values, orbit);
    }

    #[test]
    fn qubit_budget_is_enforced() {
        // 771 = 3 · 257 has 10 bits.
        let e = factor(257 * 3, 1, 0).unwrap_err();
        assert_eq!(e, Error::TooManyQubits { required: 30, cap: 24 });
    }

    #[test]
    fn factor_fifteen() {
        let report = factor(15, 5, 42).unwrap();
        assert_eq!(report.factors, Some([3, 5]));
        assert!(report.attempts.len() <= 5);
    }

    #[test]
    fn good_fraction_for_fifteen() {
        assert!(good_residue_fraction(15).unwrap() >= 0.5);
    }
}
