//! Gate and circuit representation plus the benchmark circuit builders.
//!
//! Convention: qubit 0 is the most significant bit of a basis-state label,
//! so `|10>` means qubit 0 in state 1 and qubit 1 in state 0. Rotation gates
//! use the half-angle convention `RotZ(t) = exp(-i t Z / 2)` and
//! `RotY(t) = exp(-i t Y / 2)`; `CPhase(t)` multiplies `|11>` by `exp(i t)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Result, ZneError};
use crate::grid::PositionGrid;
use crate::matrix::CMatrix;

/// A single gate instance. Two-qubit gates store explicit control/target
/// indices; rotations carry their angle in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    PauliX(usize),
    PauliY(usize),
    PauliZ(usize),
    Hadamard(usize),
    RotZ { qubit: usize, angle: f64 },
    RotY { qubit: usize, angle: f64 },
    CPhase { control: usize, target: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn touches(&self, q: usize) -> bool {
        match *self {
            Gate::PauliX(a) | Gate::PauliY(a) | Gate::PauliZ(a) | Gate::Hadamard(a) => a == q,
            Gate::RotZ { qubit, .. } | Gate::RotY { qubit, .. } => qubit == q,
            Gate::CPhase { control, target, .. } | Gate::Cnot { control, target } => {
                control == q || target == q
            }
        }
    }

    pub fn max_qubit(&self) -> usize {
        match *self {
            Gate::PauliX(a) | Gate::PauliY(a) | Gate::PauliZ(a) | Gate::Hadamard(a) => a,
            Gate::RotZ { qubit, .. } | Gate::RotY { qubit, .. } => qubit,
            Gate::CPhase { control, target, .. } | Gate::Cnot { control, target } => {
                control.max(target)
            }
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Inverse gate.
    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::RotZ { qubit, angle } => Gate::RotZ { qubit, angle: -angle },
            Gate::RotY { qubit, angle } => Gate::RotY { qubit, angle: -angle },
            Gate::CPhase { control, target, angle } => Gate::CPhase { control, target, angle: -angle },
            ref g => g.clone(),
        }
    }
}

/// An ordered gate list over a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(ZneError::EmptyRegister);
        }
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Gate::CPhase { control, target, .. } | Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(ZneError::DegenerateQubitPair(control));
            }
        }
        if gate.max_qubit() >= self.num_qubits {
            return Err(ZneError::QubitOutOfRange {
                index: gate.max_qubit(),
                num_qubits: self.num_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(ZneError::DimensionMismatch(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Inverse circuit: gates reversed and individually inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Dense unitary of the whole circuit (first gate applied first).
    pub fn unitary(&self) -> CMatrix {
        let d = self.dim();
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|j| {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[j] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        for col in &mut cols {
            for g in &self.gates {
                apply_gate_statevector(col, self.num_qubits, g);
            }
        }
        let mut u = CMatrix::zeros(d);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                u[(i, j)] = *v;
            }
        }
        u
    }

    /// Line-oriented text form: one gate per line, `GATE q[,q2][,angle]`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            match *g {
                Gate::PauliX(q) => writeln!(out, "X {q}").unwrap(),
                Gate::PauliY(q) => writeln!(out, "Y {q}").unwrap(),
                Gate::PauliZ(q) => writeln!(out, "Z {q}").unwrap(),
                Gate::Hadamard(q) => writeln!(out, "H {q}").unwrap(),
                Gate::RotZ { qubit, angle } => writeln!(out, "RZ {qubit},{angle}").unwrap(),
                Gate::RotY { qubit, angle } => writeln!(out, "RY {qubit},{angle}").unwrap(),
                Gate::CPhase { control, target, angle } => {
                    writeln!(out, "CPHASE {control},{target},{angle}").unwrap()
                }
                Gate::Cnot { control, target } => {
                    writeln!(out, "CNOT {control},{target}").unwrap()
                }
            }
        }
        out
    }

    /// Parse the text form produced by [`Circuit::to_text`]. The register
    /// size is inferred from the largest qubit index.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| ZneError::CircuitParse(format!("line {}: {msg}", lineno + 1));
            let (name, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| bad("expected `GATE args`"))?;
            let args: Vec<&str> = rest.split(',').map(str::trim).collect();
            let qubit = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| bad(&format!("bad qubit index `{s}`")))
            };
            let angle = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(&format!("bad angle `{s}`")))
            };
            let gate = match (name, args.len()) {
                ("X", 1) => Gate::PauliX(qubit(args[0])?),
                ("Y", 1) => Gate::PauliY(qubit(args[0])?),
                ("Z", 1) => Gate::PauliZ(qubit(args[0])?),
                ("H", 1) => Gate::Hadamard(qubit(args[0])?),
                ("RZ", 2) => Gate::RotZ { qubit: qubit(args[0])?, angle: angle(args[1])? },
                ("RY", 2) => Gate::RotY { qubit: qubit(args[0])?, angle: angle(args[1])? },
                ("CPHASE", 3) => Gate::CPhase {
                    control: qubit(args[0])?,
                    target: qubit(args[1])?,
                    angle: angle(args[2])?,
                },
                ("CNOT", 2) => Gate::Cnot {
                    control: qubit(args[0])?,
                    target: qubit(args[1])?,
                },
                _ => return Err(bad(&format!("unknown gate `{name}` with {} args", args.len()))),
            };
            gates.push(gate);
        }
        let num_qubits = gates
            .iter()
            .map(Gate::max_qubit)
            .max()
            .map(|m| m + 1)
            .unwrap_or(1);
        Circuit::with_gates(num_qubits, gates)
    }
}

/// Number of CNOT gates in the circuit.
pub fn cnot_count(circuit: &Circuit) -> usize {
    circuit.gates.iter().filter(|g| g.is_cnot()).count()
}

/// Remove adjacent identical CNOT pairs (same control and target with no
/// gate touching either qubit in between). The circuit unitary is unchanged.
pub fn cancel_adjacent_cnots(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(circuit.gates.len());
    for g in &circuit.gates {
        if let Gate::Cnot { control, target } = *g {
            let mut blocked = None;
            for idx in (0..out.len()).rev() {
                if out[idx].touches(control) || out[idx].touches(target) {
                    blocked = Some(idx);
                    break;
                }
            }
            match blocked {
                Some(idx) if out[idx] == *g => {
                    out.remove(idx);
                }
                _ => out.push(g.clone()),
            }
        } else {
            out.push(g.clone());
        }
    }
    Circuit {
        num_qubits: circuit.num_qubits,
        gates: out,
    }
}

/// Two CNOTs on a pair of qubits: `CNOT(0->1)` then `CNOT(1->0)`.
/// Intended initial state `|00>`.
pub fn build_double_cnot() -> Circuit {
    Circuit::with_gates(
        2,
        vec![
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
        ],
    )
    .expect("static circuit")
}

/// Four alternating CNOTs; starting from `|10>` the noiseless final state
/// is `|11>`.
pub fn build_four_cnot() -> Circuit {
    Circuit::with_gates(
        2,
        vec![
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
        ],
    )
    .expect("static circuit")
}

/// Controlled phase decomposed into `{RotZ, CNOT}`: five gates, two CNOTs,
/// equal to `CPhase(angle)` up to a global phase.
fn cphase_decomposed(angle: f64, control: usize, target: usize) -> Vec<Gate> {
    vec![
        Gate::RotZ { qubit: control, angle: angle / 2.0 },
        Gate::RotZ { qubit: target, angle: angle / 2.0 },
        Gate::Cnot { control, target },
        Gate::RotZ { qubit: target, angle: -angle / 2.0 },
        Gate::Cnot { control, target },
    ]
}

fn swap_gates(a: usize, b: usize) -> Vec<Gate> {
    vec![
        Gate::Cnot { control: a, target: b },
        Gate::Cnot { control: b, target: a },
        Gate::Cnot { control: a, target: b },
    ]
}

/// Quantum Fourier transform with controlled phases decomposed into
/// `{RotZ, CNOT}` and the final bit reversal done with 3-CNOT swaps.
/// For two qubits this yields exactly five CNOTs.
pub fn build_qft(num_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(num_qubits)?;
    for i in 0..num_qubits {
        c.push(Gate::Hadamard(i))?;
        for j in (i + 1)..num_qubits {
            let angle = PI / (1 << (j - i)) as f64;
            for g in cphase_decomposed(angle, j, i) {
                c.push(g)?;
            }
        }
    }
    for i in 0..num_qubits / 2 {
        for g in swap_gates(i, num_qubits - 1 - i) {
            c.push(g)?;
        }
    }
    Ok(c)
}

/// Coefficients of a four-entry phase vector over `{1, Z0, Z1, Z0 Z1}`,
/// with `Z` eigenvalue `+1` for bit 0. Index order: qubit 0 is the MSB.
fn diagonal_z_coefficients(phases: [f64; 4]) -> (f64, f64, f64, f64) {
    let [p00, p01, p10, p11] = phases;
    let c0 = (p00 + p01 + p10 + p11) / 4.0;
    let cz0 = (p00 + p01 - p10 - p11) / 4.0;
    let cz1 = (p00 - p01 + p10 - p11) / 4.0;
    let czz = (p00 - p01 - p10 + p11) / 4.0;
    (c0, cz0, cz1, czz)
}

/// Gates implementing `exp(-i * diag(phases))` up to a global phase:
/// single-qubit RotZ terms (skipped when zero) and one CNOT-RotZ-CNOT
/// block for the ZZ term.
fn diagonal_phase_gates(phases: [f64; 4]) -> Vec<Gate> {
    let (_, cz0, cz1, czz) = diagonal_z_coefficients(phases);
    let mut gates = Vec::new();
    if cz0 != 0.0 {
        gates.push(Gate::RotZ { qubit: 0, angle: 2.0 * cz0 });
    }
    if cz1 != 0.0 {
        gates.push(Gate::RotZ { qubit: 1, angle: 2.0 * cz1 });
    }
    gates.push(Gate::Cnot { control: 0, target: 1 });
    gates.push(Gate::RotZ { qubit: 1, angle: 2.0 * czz });
    gates.push(Gate::Cnot { control: 0, target: 1 });
    gates
}

/// One first-order splitting step `exp(-i Hx dt)` then `exp(-i Hp dt)`,
/// with the momentum phases applied between a QFT/inverse-QFT pair.
///
/// The single-qubit momentum phases are commuted through the inverse QFT's
/// leading swap (exchanging their qubit indices), which leaves the two
/// momentum-block CNOTs adjacent to the swap CNOTs of both Fourier
/// transforms. After [`cancel_adjacent_cnots`] the step has exactly 10
/// CNOTs on the default symmetric grid, where the position phases carry no
/// single-qubit terms.
pub fn build_trotter_step(time_step: f64, grid: &PositionGrid) -> Result<Circuit> {
    if !time_step.is_finite() {
        return Err(ZneError::InvalidParameter(format!(
            "time step must be finite, got {time_step}"
        )));
    }
    if grid.num_qubits() != 2 {
        return Err(ZneError::InvalidParameter(format!(
            "trotter step is implemented for 2-qubit grids, got {}",
            grid.num_qubits()
        )));
    }

    let xs = grid.positions();
    let x_phases = [
        time_step * xs[0] * xs[0] / 2.0,
        time_step * xs[1] * xs[1] / 2.0,
        time_step * xs[2] * xs[2] / 2.0,
        time_step * xs[3] * xs[3] / 2.0,
    ];
    let ps = grid.momenta();
    let p_phases = [
        time_step * ps[0] * ps[0] / 2.0,
        time_step * ps[1] * ps[1] / 2.0,
        time_step * ps[2] * ps[2] / 2.0,
        time_step * ps[3] * ps[3] / 2.0,
    ];

    let mut gates = diagonal_phase_gates(x_phases);

    let qft = build_qft(2)?;
    gates.extend(qft.gates().iter().cloned());

    // Momentum ZZ block only; its single-qubit terms are emitted after the
    // inverse QFT's swap below.
    let (_, pz0, pz1, pzz) = diagonal_z_coefficients(p_phases);
    gates.push(Gate::Cnot { control: 0, target: 1 });
    gates.push(Gate::RotZ { qubit: 1, angle: 2.0 * pzz });
    gates.push(Gate::Cnot { control: 0, target: 1 });

    // Inverse QFT, with the momentum single-qubit phases moved through the
    // swap: Swap * RotZ_q(t) = RotZ_(1-q)(t) * Swap on two qubits.
    let qft_dag = qft.adjoint();
    let dag_gates = qft_dag.gates();
    gates.extend(dag_gates[..3].iter().cloned());
    if pz0 != 0.0 {
        gates.push(Gate::RotZ { qubit: 1, angle: 2.0 * pz0 });
    }
    if pz1 != 0.0 {
        gates.push(Gate::RotZ { qubit: 0, angle: 2.0 * pz1 });
    }
    gates.extend(dag_gates[3..].iter().cloned());

    Circuit::with_gates(2, gates)
}

/// Two-CNOT preparation of the normalized Gaussian `exp(-x^2/2)` samples
/// on a symmetric two-qubit grid, template `RotY-CNOT-RotY-CNOT-RotY`.
pub fn build_state_prep(grid: &PositionGrid) -> Result<Circuit> {
    if grid.num_qubits() != 2 {
        return Err(ZneError::InvalidParameter(format!(
            "state preparation is implemented for 2-qubit grids, got {}",
            grid.num_qubits()
        )));
    }
    let amps = grid.gaussian_amplitudes();
    // Symmetric grid: amplitudes are (g0, g1, g1, g0) with g0^2 + g1^2 = 1/2.
    let u = amps[1].atan2(amps[0]);
    Circuit::with_gates(
        2,
        vec![
            Gate::RotY { qubit: 0, angle: FRAC_PI_2 },
            Gate::Cnot { control: 0, target: 1 },
            Gate::RotY { qubit: 1, angle: 2.0 * u - FRAC_PI_2 },
            Gate::Cnot { control: 0, target: 1 },
            Gate::RotY { qubit: 1, angle: FRAC_PI_2 },
        ],
    )
}

/// Apply one gate to a state vector; qubit 0 is the most significant bit.
pub(crate) fn apply_gate_statevector(state: &mut [Complex64], num_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Cnot { control, target } => {
            let cbit = 1usize << (num_qubits - 1 - control);
            let tbit = 1usize << (num_qubits - 1 - target);
            for i in 0..state.len() {
                if i & cbit != 0 && i & tbit == 0 {
                    state.swap(i, i | tbit);
                }
            }
        }
        Gate::CPhase { control, target, angle } => {
            let cbit = 1usize << (num_qubits - 1 - control);
            let tbit = 1usize << (num_qubits - 1 - target);
            let phase = Complex64::from_polar(1.0, angle);
            for (i, v) in state.iter_mut().enumerate() {
                if i & cbit != 0 && i & tbit != 0 {
                    *v *= phase;
                }
            }
        }
        ref g => {
            let (q, m) = single_qubit_matrix(g);
            let bit = 1usize << (num_qubits - 1 - q);
            for i in 0..state.len() {
                if i & bit == 0 {
                    let a = state[i];
                    let b = state[i | bit];
                    state[i] = m[0][0] * a + m[0][1] * b;
                    state[i | bit] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
    }
}

/// 2x2 matrix of a single-qubit gate together with its qubit index.
pub(crate) fn single_qubit_matrix(gate: &Gate) -> (usize, [[Complex64; 2]; 2]) {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match *gate {
        Gate::PauliX(q) => (q, [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
        Gate::PauliY(q) => (q, [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
        Gate::PauliZ(q) => (q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
        Gate::Hadamard(q) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (q, [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
        }
        Gate::RotZ { qubit, angle } => (
            qubit,
            [
                [Complex64::from_polar(1.0, -angle / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, angle / 2.0)],
            ],
        ),
        Gate::RotY { qubit, angle } => {
            let (s, co) = (angle / 2.0).sin_cos();
            (qubit, [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
        }
        Gate::CPhase { .. } | Gate::Cnot { .. } => {
            unreachable!("not a single-qubit gate")
        }
    }
}
