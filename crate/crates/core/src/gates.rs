//! Gate library, circuit IR and nearest-neighbour routing.
//!
//! Wires are numbered from 1. Inside a gate matrix the first listed wire is
//! the most significant bit of the local row/column index, so a CNOT bound to
//! wires `[control, target]` has the familiar
//! `|00> |01> |10> |11>` row order with the control on the left.

use std::collections::HashSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::statevec::{StateVector, MAX_QUBITS};

/// Entrywise tolerance for `M M† = I`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Largest circuit `expand_to_matrix` will build (2^10 x 2^10 entries).
pub const MAX_EXPAND_WIRES: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A validated unitary acting on 1, 2 or 3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    arity: usize,
    matrix: ComplexMatrix,
    diagonal: bool,
}

impl GateMatrix {
    pub fn new(arity: usize, matrix: ComplexMatrix) -> Result<Self> {
        if !(1..=3).contains(&arity) {
            return Err(Error::invalid("arity", format!("{arity} is not in 1..=3")));
        }
        if matrix.dim() != 1 << arity {
            return Err(Error::ArityMismatch {
                arity,
                wires: matrix.dim().trailing_zeros() as usize,
            });
        }
        if let Some(i) = matrix.entries().iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let defect = matrix.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        let dim = matrix.dim();
        let diagonal = (0..dim).all(|r| (0..dim).all(|c| r == c || matrix.get(r, c) == ZERO));
        Ok(Self {
            arity,
            matrix,
            diagonal,
        })
    }

    fn from_real(arity: usize, rows: &[f64]) -> Self {
        let dim = 1 << arity;
        let m = ComplexMatrix::from_rows(dim, rows.iter().map(|&x| Complex64::new(x, 0.0)).collect());
        Self::new(arity, m).expect("constant gate tables are unitary")
    }

    fn permutation(arity: usize, image: impl Fn(usize) -> usize) -> Self {
        let dim = 1 << arity;
        let m = ComplexMatrix::from_fn(dim, |r, c| if image(c) == r { ONE } else { ZERO });
        Self::new(arity, m).expect("permutation matrices are unitary")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }
}

pub fn hadamard() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_real(1, &[h, h, h, -h])
}

pub fn pauli_x() -> GateMatrix {
    GateMatrix::from_real(1, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_z() -> GateMatrix {
    GateMatrix::from_real(1, &[1.0, 0.0, 0.0, -1.0])
}

/// Flips the second qubit when the first is 1: `|XY> -> |X, X xor Y>`.
pub fn cnot() -> GateMatrix {
    GateMatrix::permutation(2, |c| if c & 0b10 != 0 { c ^ 0b01 } else { c })
}

pub fn swap() -> GateMatrix {
    GateMatrix::permutation(2, |c| ((c & 1) << 1) | (c >> 1))
}

/// Doubly controlled NOT: identity except basis states 6 and 7 exchanged.
pub fn toffoli() -> GateMatrix {
    GateMatrix::permutation(3, |c| if c & 0b110 == 0b110 { c ^ 1 } else { c })
}

/// Phase of `T_{j,k}`: `2π / 2^(k+1-j)`.
pub fn controlled_phase_angle(j: u32, k: u32) -> f64 {
    2.0 * PI / 2f64.powi((k + 1 - j) as i32)
}

/// `diag(1, 1, 1, exp(2πi / 2^(k+1-j)))`, the Fourier twiddle gate.
pub fn controlled_phase(j: u32, k: u32) -> Result<GateMatrix> {
    if j >= k {
        return Err(Error::invalid("j", format!("need j < k, got j={j}, k={k}")));
    }
    let mut m = ComplexMatrix::identity(4);
    m.set(3, 3, Complex64::from_polar(1.0, controlled_phase_angle(j, k)));
    GateMatrix::new(2, m)
}

/// Which named gate an op is, for text emission and gate counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    H,
    X,
    Z,
    Cnot,
    Swap,
    Toffoli,
    CPhase { j: u32, k: u32 },
    Custom,
}

impl GateKind {
    pub const NAMES: [&'static str; 7] = ["H", "X", "Z", "CNOT", "SWAP", "TOFFOLI", "CPHASE"];

    fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::CPhase { .. } => "CPHASE",
            GateKind::Custom => "CUSTOM",
        }
    }
}

/// A gate matrix bound to an ordered list of distinct wires.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    matrix: GateMatrix,
    wires: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, matrix: GateMatrix, wires: Vec<usize>) -> Result<Self> {
        if wires.len() != matrix.arity() {
            return Err(Error::ArityMismatch {
                arity: matrix.arity(),
                wires: wires.len(),
            });
        }
        let mut seen = HashSet::new();
        for &w in &wires {
            if w == 0 {
                return Err(Error::WireOutOfRange {
                    wire: 0,
                    n_wires: MAX_QUBITS,
                });
            }
            if !seen.insert(w) {
                return Err(Error::RepeatedWire(w));
            }
        }
        Ok(Self { kind, matrix, wires })
    }

    pub fn custom(matrix: GateMatrix, wires: Vec<usize>) -> Result<Self> {
        Self::new(GateKind::Custom, matrix, wires)
    }

    pub fn h(wire: usize) -> Result<Self> {
        Self::new(GateKind::H, hadamard(), vec![wire])
    }

    pub fn x(wire: usize) -> Result<Self> {
        Self::new(GateKind::X, pauli_x(), vec![wire])
    }

    pub fn z(wire: usize) -> Result<Self> {
        Self::new(GateKind::Z, pauli_z(), vec![wire])
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, cnot(), vec![control, target])
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::Swap, swap(), vec![a, b])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Toffoli, toffoli(), vec![c1, c2, target])
    }

    pub fn cphase(j: u32, k: u32, a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::CPhase { j, k }, controlled_phase(j, k)?, vec![a, b])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn matrix(&self) -> &GateMatrix {
        &self.matrix
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn arity(&self) -> usize {
        self.wires.len()
    }

    pub fn max_wire(&self) -> usize {
        self.wires.iter().copied().max().unwrap_or(0)
    }

    /// Same gate on different wires.
    pub fn rewired(&self, wires: Vec<usize>) -> Result<Self> {
        Self::new(self.kind, self.matrix.clone(), wires)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.kind.name())?;
        let wires: Vec<String> = self.wires.iter().map(usize::to_string).collect();
        write!(f, "{}", wires.join(","))?;
        if let GateKind::CPhase { j, k } = self.kind {
            write!(f, " j={j} k={k}")?;
        }
        Ok(())
    }
}

/// Ordered gate list over `n_wires` wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_wires: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_wires: usize) -> Result<Self> {
        if n_wires == 0 {
            return Err(Error::invalid("n_wires", "a circuit needs at least one wire"));
        }
        Ok(Self {
            n_wires,
            ops: Vec::new(),
        })
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        if let Some(&w) = op.wires().iter().find(|&&w| w > self.n_wires) {
            return Err(Error::WireOutOfRange {
                wire: w,
                n_wires: self.n_wires,
            });
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn with(mut self, op: Result<GateOp>) -> Result<Self> {
        self.push(op?)?;
        Ok(self)
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn count(&self, pred: impl Fn(GateKind) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(op.kind())).count()
    }

    /// Copy of this circuit placed on wires `offset+1 ..= offset+n` of a
    /// wider `n_wires` register.
    pub fn embedded(&self, n_wires: usize, offset: usize) -> Result<Circuit> {
        let mut out = Circuit::new(n_wires)?;
        for op in &self.ops {
            out.push(op.rewired(op.wires().iter().map(|w| w + offset).collect())?)?;
        }
        Ok(out)
    }

    /// Line-oriented text form, one `GATE wire[,wire...] [param...]` per line.
    pub fn to_text(&self) -> Result<String> {
        let mut s = String::new();
        for op in &self.ops {
            if op.kind() == GateKind::Custom {
                return Err(Error::invalid("circuit", "custom matrices have no text form"));
            }
            s.push_str(&op.to_string());
            s.push('\n');
        }
        Ok(s)
    }

    /// Parses the text form. `#` starts a comment; blank lines are skipped.
    /// When `n_wires` is `None` the register is sized to the largest wire used
    /// (one wire for an empty file).
    pub fn from_text(src: &str, n_wires: Option<usize>) -> Result<Circuit> {
        let mut ops = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            ops.push(parse_line(line, lineno + 1)?);
        }
        let needed = ops.iter().map(GateOp::max_wire).max().unwrap_or(1);
        let n = n_wires.unwrap_or(needed);
        let mut c = Circuit::new(n)?;
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into (1-based column, token) pairs.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_line(line: &str, lineno: usize) -> Result<GateOp> {
    let toks = tokens(line);
    let (name_col, name) = toks[0];
    let name = name.to_ascii_uppercase();
    let Some(&(wire_col, wire_tok)) = toks.get(1) else {
        return Err(parse_err(lineno, name_col + name.len(), format!("{name}: missing wire list")));
    };

    let mut wires = Vec::new();
    let mut col = wire_col;
    for part in wire_tok.split(',') {
        let w: usize = part
            .parse()
            .map_err(|_| parse_err(lineno, col, format!("`{part}` is not a wire number")))?;
        if w == 0 {
            return Err(parse_err(lineno, col, "wires are numbered from 1"));
        }
        wires.push(w);
        col += part.len() + 1;
    }

    let mut j = None;
    let mut k = None;
    for &(pcol, p) in &toks[2..] {
        let (key, val) = p
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, pcol, format!("expected key=value, found `{p}`")))?;
        let v: u32 = val
            .parse()
            .map_err(|_| parse_err(lineno, pcol + key.len() + 1, format!("`{val}` is not an integer")))?;
        match key {
            "j" => j = Some(v),
            "k" => k = Some(v),
            _ => return Err(parse_err(lineno, pcol, format!("unknown parameter `{key}`"))),
        }
    }
    if name != "CPHASE" && (j.is_some() || k.is_some()) {
        return Err(parse_err(lineno, toks[2].0, format!("{name} takes no parameters")));
    }

    let expect = |n: usize| -> Result<()> {
        if wires.len() == n {
            Ok(())
        } else {
            Err(parse_err(
                lineno,
                wire_col,
                format!("{name} acts on {n} wire(s), got {}", wires.len()),
            ))
        }
    };
    let at = |e: Error| match e {
        Error::RepeatedWire(w) => parse_err(lineno, wire_col, format!("repeated wire {w}")),
        other => parse_err(lineno, name_col, other.to_string()),
    };
    let op = match name.as_str() {
        "H" => expect(1).and_then(|_| GateOp::h(wires[0])),
        "X" => expect(1).and_then(|_| GateOp::x(wires[0])),
        "Z" => expect(1).and_then(|_| GateOp::z(wires[0])),
        "CNOT" => expect(2).and_then(|_| GateOp::cnot(wires[0], wires[1]).map_err(at)),
        "SWAP" => expect(2).and_then(|_| GateOp::swap(wires[0], wires[1]).map_err(at)),
        "TOFFOLI" => expect(3).and_then(|_| GateOp::toffoli(wires[0], wires[1], wires[2]).map_err(at)),
        "CPHASE" => {
            expect(2)?;
            let (Some(j), Some(k)) = (j, k) else {
                return Err(parse_err(lineno, name_col, "CPHASE needs j=<int> k=<int>"));
            };
            GateOp::cphase(j, k, wires[0], wires[1]).map_err(at)
        }
        _ => {
            return Err(parse_err(
                lineno,
                name_col,
                format!("unknown gate `{name}`; valid gates: {}", GateKind::NAMES.join(", ")),
            ))
        }
    };
    op
}

/// Position of `wire` (1-based, wire 1 most significant) in a basis index.
#[inline]
pub(crate) fn bit_position(n_wires: usize, wire: usize) -> usize {
    n_wires - wire
}

/// The full `2^n x 2^n` unitary of a circuit, built entry by entry from the
/// tensor-extension rule: an op contributes `A[local(r), local(s)]` to entry
/// `(r, s)` when `r` and `s` agree on every wire the op does not touch.
pub fn expand_to_matrix(circuit: &Circuit) -> Result<ComplexMatrix> {
    let n = circuit.n_wires();
    if n > MAX_EXPAND_WIRES {
        return Err(Error::TooManyQubits {
            required: n,
            cap: MAX_EXPAND_WIRES,
        });
    }
    let dim = 1usize << n;
    let mut acc = ComplexMatrix::identity(dim);
    for op in circuit.ops() {
        let pos: Vec<usize> = op.wires().iter().map(|&w| bit_position(n, w)).collect();
        let a = pos.len();
        let gate_mask: usize = pos.iter().map(|p| 1 << p).sum();
        let local = |idx: usize| -> usize {
            pos.iter()
                .enumerate()
                .map(|(i, &p)| ((idx >> p) & 1) << (a - 1 - i))
                .sum()
        };
        let spread = |t: usize| -> usize {
            pos.iter()
                .enumerate()
                .map(|(i, &p)| ((t >> (a - 1 - i)) & 1) << p)
                .sum()
        };
        let mut next = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            let lr = local(r);
            let rest = r & !gate_mask;
            for t in 0..(1 << a) {
                let coeff = op.matrix().entry(lr, t);
                if coeff == ZERO {
                    continue;
                }
                let s = rest | spread(t);
                for c in 0..dim {
                    let v = next.get(r, c) + coeff * acc.get(s, c);
                    next.set(r, c, v);
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Rewrites a circuit so every two-qubit gate acts on neighbouring wires.
///
/// For a gate on wires `(a, b)` with `|a - b| > 1`, wire `a` is carried next
/// to `b` by adjacent swaps, the gate runs there, and the swaps are undone in
/// reverse order. Each such gate costs `2 (|a - b| - 1)` swaps.
pub fn route_linear(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.n_wires())?;
    for op in circuit.ops() {
        match op.wires() {
            [_] => out.push(op.clone())?,
            &[a, b] if a.abs_diff(b) == 1 => out.push(op.clone())?,
            &[a, b] => {
                let path: Vec<(usize, usize)> = if a < b {
                    (a..b - 1).map(|w| (w, w + 1)).collect()
                } else {
                    ((b + 2)..=a).rev().map(|w| (w, w - 1)).collect()
                };
                let landed = if a < b { b - 1 } else { b + 1 };
                for &(x, y) in &path {
                    out.push(GateOp::swap(x, y)?)?;
                }
                out.push(op.rewired(vec![landed, b])?)?;
                for &(x, y) in path.iter().rev() {
                    out.push(GateOp::swap(x, y)?)?;
                }
            }
            _ => {
                return Err(Error::invalid(
                    "circuit",
                    format!("{}-qubit gate {op} cannot be routed; decompose it first", op.arity()),
                ))
            }
        }
    }
    Ok(out)
}

/// A diagonal transform that negates the amplitudes of a set of basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseFlip {
    n_qubits: usize,
    marked: Vec<usize>,
}

impl PhaseFlip {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Sorted indices whose amplitude is negated.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// Diagonal entry at `index`: -1 if marked, +1 otherwise.
    pub fn sign(&self, index: usize) -> f64 {
        if self.marked.binary_search(&index).is_ok() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub(crate) fn apply_in_place(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::invalid(
                "state",
                format!("phase flip on {} qubits applied to {}-qubit state", self.n_qubits, state.n_qubits()),
            ));
        }
        let amps = state.amps_mut();
        for &i in &self.marked {
            amps[i] = -amps[i];
        }
        Ok(())
    }
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            required: n,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// `Z₀`: negates `|0...0>` only.
pub fn phase_flip_zero(n: usize) -> Result<PhaseFlip> {
    check_register(n)?;
    Ok(PhaseFlip {
        n_qubits: n,
        marked: vec![0],
    })
}

/// `Z_t`: negates every basis state the predicate accepts.
pub fn phase_flip_target(n: usize, predicate: impl Fn(usize) -> bool) -> Result<PhaseFlip> {
    check_register(n)?;
    Ok(PhaseFlip {
        n_qubits: n,
        marked: (0..1usize << n).filter(|&i| predicate(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn hadamard_entries_and_square() {
        let h = hadamard();
        assert!((h.entry(0, 0).re - 0.70710678).abs() < 1e-8);
        assert!((h.entry(1, 1).re + FRAC_1_SQRT_2).abs() < 1e-15);
        let sq = h.matrix().mul(h.matrix());
        assert!(sq.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn cnot_is_the_printed_permutation() {
        let m = cnot();
        let expected = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (col, &v) in row.iter().enumerate() {
                assert_eq!(m.entry(r, col), c(v, 0.0));
            }
        }
        assert_eq!(m.matrix().mul(m.matrix()), ComplexMatrix::identity(4));
    }

    #[test]
    fn toffoli_swaps_last_two_rows() {
        let m = toffoli();
        assert_eq!(m.entry(0b110, 0b111), ONE);
        assert_eq!(m.entry(0b111, 0b110), ONE);
        assert_eq!(m.entry(0b011, 0b011), ONE);
        for i in 0..6 {
            assert_eq!(m.entry(i, i), ONE);
        }
        // AND: third bit of the image of (a, b, 0) is a & b.
        for a in 0..2 {
            for b in 0..2 {
                let input = (a << 2) | (b << 1);
                let out = (0..8).find(|&r| m.entry(r, input) == ONE).unwrap();
                assert_eq!(out & 1, a & b);
            }
        }
    }

    #[test]
    fn controlled_phase_values() {
        let p = controlled_phase(2, 3).unwrap();
        assert!((p.entry(3, 3) - c(0.0, 1.0)).norm() < 1e-15);
        let p = controlled_phase(0, 1).unwrap();
        assert!((p.entry(3, 3) - c(0.0, 1.0)).norm() < 1e-15);
        let p = controlled_phase(0, 3).unwrap();
        assert!((p.entry(3, 3) - Complex64::from_polar(1.0, PI / 8.0)).norm() < 1e-15);
        assert!(p.is_diagonal());
        assert!(controlled_phase(3, 3).is_err());
        assert!(controlled_phase(4, 3).is_err());
    }

    #[test]
    fn all_constructors_are_unitary() {
        let mut gates = vec![hadamard(), pauli_x(), pauli_z(), cnot(), swap(), toffoli()];
        for k in 1..12 {
            for j in 0..k {
                gates.push(controlled_phase(j, k).unwrap());
            }
        }
        for g in gates {
            assert!(g.matrix().is_unitary(UNITARY_TOL));
        }
    }

    #[test]
    fn rejects_non_unitary_and_bad_wires() {
        let m = ComplexMatrix::from_rows(2, vec![ONE, ONE, ZERO, ONE]);
        assert!(matches!(GateMatrix::new(1, m), Err(Error::NotUnitary(_))));
        assert_eq!(GateOp::cnot(1, 1), Err(Error::RepeatedWire(1)));
        let mut circ = Circuit::new(2).unwrap();
        assert!(matches!(
            circ.push(GateOp::h(3).unwrap()),
            Err(Error::WireOutOfRange { wire: 3, n_wires: 2 })
        ));
    }

    #[test]
    fn expand_small_circuits() {
        let empty = Circuit::new(3).unwrap();
        assert_eq!(expand_to_matrix(&empty).unwrap(), ComplexMatrix::identity(8));

        let h = Circuit::new(1).unwrap().with(GateOp::h(1)).unwrap();
        assert!(expand_to_matrix(&h).unwrap().max_abs_diff(hadamard().matrix()) < 1e-15);

        let cc = Circuit::new(2)
            .unwrap()
            .with(GateOp::cnot(1, 2))
            .unwrap()
            .with(GateOp::cnot(1, 2))
            .unwrap();
        assert!(expand_to_matrix(&cc).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let big = Circuit::new(11).unwrap();
        assert!(matches!(expand_to_matrix(&big), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn expand_respects_wire_order() {
        // CNOT with control on wire 2 maps |01> (wire 2 set) to |11>.
        let circ = Circuit::new(2).unwrap().with(GateOp::cnot(2, 1)).unwrap();
        let m = expand_to_matrix(&circ).unwrap();
        assert_eq!(m.get(0b11, 0b01), ONE);
        assert_eq!(m.get(0b10, 0b10), ONE);
    }

    #[test]
    fn routing_adjacent_gates_is_a_no_op() {
        let circ = Circuit::new(4)
            .unwrap()
            .with(GateOp::cnot(1, 2))
            .unwrap()
            .with(GateOp::cnot(3, 2))
            .unwrap()
            .with(GateOp::h(4))
            .unwrap();
        assert_eq!(route_linear(&circ).unwrap(), circ);
    }

    #[test]
    fn routing_far_cnot_adds_mirror_swaps() {
        for (a, b) in [(1, 4), (4, 1)] {
            let circ = Circuit::new(4).unwrap().with(GateOp::cnot(a, b)).unwrap();
            let routed = route_linear(&circ).unwrap();
            assert_eq!(routed.count(|k| k == GateKind::Swap), 4);
            for op in routed.ops() {
                assert_eq!(op.wires()[0].abs_diff(op.wires()[1]), 1);
            }
            let d = expand_to_matrix(&routed)
                .unwrap()
                .max_abs_diff(&expand_to_matrix(&circ).unwrap());
            assert!(d < 1e-9);
        }
    }

    #[test]
    fn routing_rejects_three_qubit_gates() {
        let circ = Circuit::new(3).unwrap().with(GateOp::toffoli(1, 2, 3)).unwrap();
        assert!(route_linear(&circ).is_err());
    }

    #[test]
    fn phase_flips() {
        let z0 = phase_flip_zero(2).unwrap();
        let v0 = StateVector::basis(2, 0).unwrap();
        assert_eq!(z0.apply(&v0).unwrap().amplitudes()[0], c(-1.0, 0.0));
        let v3 = StateVector::basis(2, 3).unwrap();
        assert_eq!(z0.apply(&v3).unwrap(), v3);
        let u = StateVector::uniform(2).unwrap();
        assert_eq!(z0.apply(&z0.apply(&u).unwrap()).unwrap(), u);

        let zt = phase_flip_target(3, |i| i == 5).unwrap();
        let v5 = StateVector::basis(3, 5).unwrap();
        assert_eq!(zt.apply(&v5).unwrap().amplitudes()[5], c(-1.0, 0.0));

        let none = phase_flip_target(3, |_| false).unwrap();
        let u3 = StateVector::uniform(3).unwrap();
        assert_eq!(none.apply(&u3).unwrap(), u3);

        let two = phase_flip_target(3, |i| i == 1 || i == 6).unwrap();
        let flipped = two.apply(&u3).unwrap();
        for (i, a) in flipped.amplitudes().iter().enumerate() {
            let expect = if i == 1 || i == 6 { -1.0 } else { 1.0 } / 8f64.sqrt();
            assert!((a.re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn text_round_trip() {
        let src = "H 1\nCNOT 1,4\n# comment\n\nCPHASE 2,3 j=1 k=3\nSWAP 3,4\nTOFFOLI 1,2,3\n";
        let circ = Circuit::from_text(src, None).unwrap();
        assert_eq!(circ.n_wires(), 4);
        assert_eq!(circ.len(), 5);
        assert_eq!(circ.ops()[2].kind(), GateKind::CPhase { j: 1, k: 3 });
        let text = circ.to_text().unwrap();
        assert_eq!(Circuit::from_text(&text, Some(4)).unwrap(), circ);
    }

    #[test]
    fn text_diagnostics() {
        let e = Circuit::from_text("H 1\nCNOT 1,1\n", None).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 6, ref message } if message.contains("repeated wire")));

        let e = Circuit::from_text("  FOO 1", None).unwrap_err();
        match e {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (1, 3));
                assert!(message.contains("valid gates: H, X, Z, CNOT"));
            }
            other => panic!("{other:?}"),
        }

        let e = Circuit::from_text("CNOT 1,x", None).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 8, .. }));

        let e = Circuit::from_text("CPHASE 1,2 j=3 k=2", None).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));

        let e = Circuit::from_text("H 3", Some(2)).unwrap_err();
        assert!(matches!(e, Error::WireOutOfRange { wire: 3, n_wires: 2 }));
    }
}
