//! Shared test oracles, independent of the library's gate-application path:
//! full-space gate matrices are assembled from explicit Kronecker products
//! and matrix exponentials use a scaled Taylor series.

#![allow(dead_code)]

use num_complex::Complex64;
use zne_core::circuit::{Circuit, Gate};
use zne_core::grid::PositionGrid;
use zne_core::matrix::CMatrix;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = CMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn mat2(rows: [[Complex64; 2]; 2]) -> CMatrix {
    CMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()])
}

pub fn pauli_x() -> CMatrix {
    mat2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_y() -> CMatrix {
    mat2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> CMatrix {
    mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
}

pub fn rot_z(angle: f64) -> CMatrix {
    mat2([
        [Complex64::from_polar(1.0, -angle / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, angle / 2.0)],
    ])
}

pub fn rot_y(angle: f64) -> CMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    mat2([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
}

/// Projector |b><b| on one qubit.
fn proj(b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2);
    m[(b, b)] = c(1.0, 0.0);
    m
}

/// Embed a single-qubit operator at position `q` of an `n`-qubit register
/// (qubit 0 = most significant bit) via Kronecker products.
pub fn embed_1q(op: &CMatrix, q: usize, n: usize) -> CMatrix {
    let mut acc = CMatrix::identity(1);
    for k in 0..n {
        let factor = if k == q { op.clone() } else { CMatrix::identity(2) };
        acc = kron(&acc, &factor);
    }
    acc
}

/// Full-space controlled gate: |0><0|_c (x) I + |1><1|_c (x) U_t.
pub fn embed_controlled(op: &CMatrix, control: usize, target: usize, n: usize) -> CMatrix {
    let mut off = CMatrix::identity(1);
    let mut on = CMatrix::identity(1);
    for k in 0..n {
        let f_off = if k == control { proj(0) } else { CMatrix::identity(2) };
        let f_on = if k == control {
            proj(1)
        } else if k == target {
            op.clone()
        } else {
            CMatrix::identity(2)
        };
        off = kron(&off, &f_off);
        on = kron(&on, &f_on);
    }
    off.add(&on)
}

/// Full-space matrix of one gate, built only from Kronecker products.
pub fn gate_matrix(gate: &Gate, n: usize) -> CMatrix {
    match *gate {
        Gate::PauliX(q) => embed_1q(&pauli_x(), q, n),
        Gate::PauliY(q) => embed_1q(&pauli_y(), q, n),
        Gate::PauliZ(q) => embed_1q(&pauli_z(), q, n),
        Gate::Hadamard(q) => embed_1q(&hadamard(), q, n),
        Gate::RotZ { qubit, angle } => embed_1q(&rot_z(angle), qubit, n),
        Gate::RotY { qubit, angle } => embed_1q(&rot_y(angle), qubit, n),
        Gate::Cnot { control, target } => embed_controlled(&pauli_x(), control, target, n),
        Gate::CPhase { control, target, angle } => {
            let phase = mat2([
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, angle)],
            ]);
            embed_controlled(&phase, control, target, n)
        }
    }
}

/// Oracle circuit unitary: product of Kronecker-built gate matrices.
pub fn oracle_unitary(circuit: &Circuit) -> CMatrix {
    let n = circuit.num_qubits();
    let mut u = CMatrix::identity(1 << n);
    for g in circuit.gates() {
        u = gate_matrix(g, n).mul(&u);
    }
    u
}

/// Oracle state vector after the circuit, starting from a basis state.
pub fn oracle_statevector(circuit: &Circuit, init: usize) -> Vec<Complex64> {
    let d = 1usize << circuit.num_qubits();
    let mut v = vec![c(0.0, 0.0); d];
    v[init] = c(1.0, 0.0);
    oracle_unitary(circuit).mul_vec(&v)
}

/// Discrete Fourier transform `F[k][j] = exp(2 pi i jk / N) / sqrt(N)`,
/// indices read with qubit 0 as the most significant bit.
pub fn dft_matrix(n_qubits: usize) -> CMatrix {
    let d = 1usize << n_qubits;
    let mut f = CMatrix::zeros(d);
    for k in 0..d {
        for j in 0..d {
            let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64;
            f[(k, j)] = Complex64::from_polar(1.0 / (d as f64).sqrt(), phase);
        }
    }
    f
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale /= 2.0;
        squarings += 1;
    }
    let scaled = a.scale(c(scale, 0.0));
    let mut term = CMatrix::identity(a.dim());
    let mut sum = CMatrix::identity(a.dim());
    for k in 1..40 {
        term = term.mul(&scaled).scale(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.frobenius_norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Discretized oscillator Hamiltonian `diag(x^2/2) + F^H diag(p^2/2) F`,
/// with `F` the same Fourier convention as [`dft_matrix`].
pub fn oscillator_hamiltonian(grid: &PositionGrid) -> CMatrix {
    let d = grid.num_points();
    let mut hx = CMatrix::zeros(d);
    for (j, x) in grid.positions().iter().enumerate() {
        hx[(j, j)] = c(x * x / 2.0, 0.0);
    }
    let mut dp = CMatrix::zeros(d);
    for (k, p) in grid.momenta().iter().enumerate() {
        dp[(k, k)] = c(p * p / 2.0, 0.0);
    }
    let f = dft_matrix(grid.num_qubits());
    hx.add(&f.dagger().mul(&dp).mul(&f))
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn evolution_operator(h: &CMatrix, t: f64) -> CMatrix {
    expm(&h.scale(c(0.0, -t)))
}

/// Slope of `log(y)` against `log(x)` by least squares.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Oracle noisy CNOT: full-matrix channel built from Kronecker products,
/// `(1 - sum eps/16) U rho U^H + sum (eps_ij/16) (s_i x s_j) rho (s_i x s_j)`.
pub fn oracle_noisy_cnot(
    rho: &CMatrix,
    control: usize,
    target: usize,
    n: usize,
    eps: &[[f64; 4]; 4],
) -> CMatrix {
    let paulis = [
        CMatrix::identity(2),
        pauli_x(),
        pauli_y(),
        pauli_z(),
    ];
    let total: f64 = eps.iter().flatten().sum::<f64>() / 16.0;
    let u = gate_matrix(
        &Gate::Cnot { control, target },
        n,
    );
    let mut out = u.mul(rho).mul(&u.dagger()).scale(c(1.0 - total, 0.0));
    for (i, row) in eps.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let op = embed_1q(&paulis[i], control, n).mul(&embed_1q(&paulis[j], target, n));
            out = out.add(&op.mul(rho).mul(&op.dagger()).scale(c(w / 16.0, 0.0)));
        }
    }
    out
}

/// Oracle evolution under uniform depolarizing CNOT noise, full matrices
/// throughout.
pub fn oracle_depolarizing_evolve(circuit: &Circuit, init: usize, eps: f64) -> CMatrix {
    let n = circuit.num_qubits();
    let d = 1usize << n;
    let mut rho = CMatrix::zeros(d);
    rho[(init, init)] = c(1.0, 0.0);
    let uniform = [[eps; 4]; 4];
    for g in circuit.gates() {
        match *g {
            Gate::Cnot { control, target } => {
                rho = oracle_noisy_cnot(&rho, control, target, n, &uniform);
            }
            ref other => {
                let u = gate_matrix(other, n);
                rho = u.mul(&rho).mul(&u.dagger());
            }
        }
    }
    rho
}
