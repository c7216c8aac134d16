//! Noisy CNOT channels, thermal relaxation and circuit evolution.
//!
//! Only CNOTs carry noise; single-qubit gates and controlled phases are
//! ideal. A noisy CNOT either performs the gate or, with probability
//! `sum(eps_ij)/16`, replaces it by a two-qubit Pauli conjugation:
//!
//! ```text
//! rho -> (1 - sum_ij eps_ij/16) U rho U^dag
//!        + sum_ij (eps_ij/16) (s_i x s_j) rho (s_i x s_j)
//! ```
//!
//! With all sixteen `eps_ij` equal to `eps` the Pauli sum twirls the gate
//! pair to the maximally mixed state, giving the depolarizing channel
//! `(1-eps) U rho U^dag + eps (I4/4 (x) rho_rest)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::density::{DensityMatrix, Observable};
use crate::error::{Result, ZneError};

/// Pauli index order used throughout: I, X, Y, Z.
const PAULIS: [[[Complex64; 2]; 2]; 4] = {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let ni = Complex64::new(0.0, -1.0);
    [
        [[one, z], [z, one]],
        [[z, one], [one, z]],
        [[z, ni], [i, z]],
        [[one, z], [z, neg]],
    ]
};

/// Per-CNOT Pauli error weights `eps_ij`, indexed by a pair of Pauli labels
/// `(i, j)` over `{I, X, Y, Z}` acting on (control, target).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliNoiseSpec {
    eps: [[f64; 4]; 4],
}

impl PauliNoiseSpec {
    /// Channel with explicit weights. Requires non-negative entries and
    /// `sum(eps)/16 <= 1`.
    pub fn new(eps: [[f64; 4]; 4]) -> Result<Self> {
        let spec = PauliNoiseSpec { eps };
        spec.check()?;
        Ok(spec)
    }

    /// Noiseless channel.
    pub fn noiseless() -> Self {
        PauliNoiseSpec { eps: [[0.0; 4]; 4] }
    }

    /// Depolarizing channel of strength `eps`: all sixteen weights equal,
    /// so the error branch is the maximally mixed state on the gate pair.
    pub fn depolarizing(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(ZneError::InvalidChannel(format!(
                "depolarizing strength must be in [0, 1], got {eps}"
            )));
        }
        PauliNoiseSpec::new([[eps; 4]; 4])
    }

    /// Copy of this channel with `delta` added to the weight of one Pauli
    /// pair (indices over I=0, X=1, Y=2, Z=3).
    pub fn with_extra(&self, i: usize, j: usize, delta: f64) -> Result<Self> {
        if i > 3 || j > 3 {
            return Err(ZneError::InvalidChannel(format!(
                "Pauli indices must be 0..=3, got ({i}, {j})"
            )));
        }
        let mut eps = self.eps;
        eps[i][j] += delta;
        PauliNoiseSpec::new(eps)
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.eps[i][j]
    }

    /// Total error probability `sum(eps_ij)/16`.
    pub fn error_probability(&self) -> f64 {
        self.eps.iter().flatten().sum::<f64>() / 16.0
    }

    fn check(&self) -> Result<()> {
        for row in &self.eps {
            for &e in row {
                if !(e.is_finite() && e >= 0.0) {
                    return Err(ZneError::InvalidChannel(format!(
                        "Pauli weight must be finite and non-negative, got {e}"
                    )));
                }
            }
        }
        let p = self.error_probability();
        if p > 1.0 + 1e-12 {
            return Err(ZneError::InvalidChannel(format!(
                "total error probability {p} exceeds 1"
            )));
        }
        Ok(())
    }
}

/// Optional per-CNOT thermal relaxation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub t1: f64,
    pub t2: f64,
    pub gate_duration: f64,
}

impl Relaxation {
    pub fn new(t1: f64, t2: f64, gate_duration: f64) -> Result<Self> {
        if !(t1.is_finite() && t1 > 0.0) || !(t2.is_finite() && t2 > 0.0) {
            return Err(ZneError::InvalidRelaxation(format!(
                "t1 and t2 must be positive, got t1={t1}, t2={t2}"
            )));
        }
        if t2 > 2.0 * t1 {
            return Err(ZneError::InvalidRelaxation(format!(
                "t2 must not exceed 2*t1, got t1={t1}, t2={t2}"
            )));
        }
        if !(gate_duration.is_finite() && gate_duration >= 0.0) {
            return Err(ZneError::InvalidRelaxation(format!(
                "gate duration must be non-negative, got {gate_duration}"
            )));
        }
        Ok(Relaxation { t1, t2, gate_duration })
    }
}

/// Noise attached to the CNOTs of a circuit: a uniform Pauli channel, with
/// optional per-CNOT-index overrides and optional thermal relaxation applied
/// to the gate's qubits after each CNOT.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    uniform: PauliNoiseSpec,
    overrides: Vec<(usize, PauliNoiseSpec)>,
    relaxation: Option<Relaxation>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            uniform: PauliNoiseSpec::noiseless(),
            overrides: Vec::new(),
            relaxation: None,
        }
    }

    pub fn uniform(spec: PauliNoiseSpec) -> Self {
        NoiseModel {
            uniform: spec,
            overrides: Vec::new(),
            relaxation: None,
        }
    }

    pub fn depolarizing(eps: f64) -> Result<Self> {
        Ok(NoiseModel::uniform(PauliNoiseSpec::depolarizing(eps)?))
    }

    /// Replace the channel of the CNOT with the given ordinal (0-based,
    /// counting CNOTs in circuit order).
    pub fn with_cnot_override(mut self, cnot_index: usize, spec: PauliNoiseSpec) -> Self {
        self.overrides.retain(|(i, _)| *i != cnot_index);
        self.overrides.push((cnot_index, spec));
        self
    }

    pub fn with_relaxation(mut self, relaxation: Relaxation) -> Self {
        self.relaxation = Some(relaxation);
        self
    }

    pub fn relaxation(&self) -> Option<&Relaxation> {
        self.relaxation.as_ref()
    }

    pub fn spec_for(&self, cnot_index: usize) -> &PauliNoiseSpec {
        self.overrides
            .iter()
            .find(|(i, _)| *i == cnot_index)
            .map(|(_, s)| s)
            .unwrap_or(&self.uniform)
    }

    pub fn is_noiseless(&self) -> bool {
        self.relaxation.is_none()
            && self.uniform.error_probability() == 0.0
            && self
                .overrides
                .iter()
                .all(|(_, s)| s.error_probability() == 0.0)
    }
}

/// Apply a noisy CNOT channel to the state.
pub fn apply_noisy_cnot(
    rho: &DensityMatrix,
    control: usize,
    target: usize,
    spec: &PauliNoiseSpec,
) -> Result<DensityMatrix> {
    if control == target {
        return Err(ZneError::DegenerateQubitPair(control));
    }
    let n = rho.num_qubits();
    if control >= n || target >= n {
        return Err(ZneError::QubitOutOfRange {
            index: control.max(target),
            num_qubits: n,
        });
    }
    spec.check()?;

    let survive = 1.0 - spec.error_probability();
    let mut ideal = rho.clone();
    ideal.apply_gate_unitary(&Gate::Cnot { control, target });
    let mut acc = ideal
        .matrix()
        .scale(Complex64::new(survive, 0.0));

    for i in 0..4 {
        for j in 0..4 {
            let w = spec.weight(i, j) / 16.0;
            if w == 0.0 {
                continue;
            }
            let mut err = rho.clone();
            err.apply_single_qubit(&PAULIS[i], control);
            err.apply_single_qubit(&PAULIS[j], target);
            acc = acc.add(&err.matrix().scale(Complex64::new(w, 0.0)));
        }
    }
    DensityMatrix::from_matrix(n, acc)
}

/// Amplitude damping toward `|0>` followed by pure dephasing so the total
/// off-diagonal decay is `exp(-duration/t2)`, applied per listed qubit.
pub fn apply_relaxation(
    rho: &DensityMatrix,
    qubits: &[usize],
    t1: f64,
    t2: f64,
    duration: f64,
) -> Result<DensityMatrix> {
    let relax = Relaxation::new(t1, t2, duration)?;
    let mut out = rho.clone();
    let gamma = 1.0 - (-relax.gate_duration / relax.t1).exp();
    // Damping alone shrinks coherences by sqrt(1-gamma); the residual
    // dephasing factor brings the product to exp(-duration/t2).
    let lambda =
        (-relax.gate_duration * (1.0 / relax.t2 - 1.0 / (2.0 * relax.t1))).exp();
    for &q in qubits {
        if q >= rho.num_qubits() {
            return Err(ZneError::QubitOutOfRange {
                index: q,
                num_qubits: rho.num_qubits(),
            });
        }
        out = damp_and_dephase(&out, q, gamma, lambda)?;
    }
    Ok(out)
}

fn damp_and_dephase(
    rho: &DensityMatrix,
    qubit: usize,
    gamma: f64,
    lambda: f64,
) -> Result<DensityMatrix> {
    let z = Complex64::new(0.0, 0.0);
    let k0 = [
        [Complex64::new(1.0, 0.0), z],
        [z, Complex64::new((1.0 - gamma).sqrt(), 0.0)],
    ];
    let k1 = [
        [z, Complex64::new(gamma.sqrt(), 0.0)],
        [z, z],
    ];
    let mut a = rho.clone();
    a.apply_single_qubit(&k0, qubit);
    let mut b = rho.clone();
    b.apply_single_qubit(&k1, qubit);
    let mut out = DensityMatrix::from_matrix(rho.num_qubits(), a.matrix().add(b.matrix()))?;

    // Pure dephasing: scale elements whose bra/ket differ on this qubit.
    let bit = 1usize << (rho.num_qubits() - 1 - qubit);
    let d = out.dim();
    let mut mat = out.matrix().clone();
    for i in 0..d {
        for j in 0..d {
            if (i & bit) != (j & bit) {
                mat[(i, j)] *= Complex64::new(lambda, 0.0);
            }
        }
    }
    out = DensityMatrix::from_matrix(rho.num_qubits(), mat)?;
    Ok(out)
}

/// Evolve `|init><init|` through the circuit: ideal single-qubit and
/// controlled-phase gates, noisy CNOTs per the model, with relaxation on the
/// gate qubits after each CNOT when enabled.
pub fn evolve(circuit: &Circuit, init: usize, noise: &NoiseModel) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::basis_state(circuit.num_qubits(), init)?;
    let mut cnot_index = 0usize;
    for gate in circuit.gates() {
        match *gate {
            Gate::Cnot { control, target } => {
                rho = apply_noisy_cnot(&rho, control, target, noise.spec_for(cnot_index))?;
                if let Some(r) = noise.relaxation() {
                    rho = apply_relaxation(&rho, &[control, target], r.t1, r.t2, r.gate_duration)?;
                }
                cnot_index += 1;
            }
            ref g => rho.apply_gate_unitary(g),
        }
    }
    Ok(rho)
}

/// Sample statistics from a finite number of measurement shots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub std_error: f64,
}

/// Draw `n_meas` computational-basis outcomes from the state's populations
/// with a deterministic seeded generator, and return the sample mean of the
/// observable weights together with its standard error.
pub fn sample_shots(
    rho: &DensityMatrix,
    obs: &Observable,
    n_meas: u64,
    seed: u64,
) -> Result<SampleStats> {
    if rho.num_qubits() != obs.num_qubits() {
        return Err(ZneError::DimensionMismatch(format!(
            "state has {} qubits, observable has {}",
            rho.num_qubits(),
            obs.num_qubits()
        )));
    }
    if n_meas == 0 {
        return Err(ZneError::InvalidParameter(
            "number of measurements must be at least 1".to_string(),
        ));
    }
    // Clamp round-off negatives and build the cumulative distribution.
    let mut cumulative = Vec::with_capacity(rho.dim());
    let mut total = 0.0;
    for b in 0..rho.dim() {
        total += rho.population(b).max(0.0);
        cumulative.push(total);
    }
    if total <= 0.0 {
        return Err(ZneError::InvalidChannel(
            "state populations sum to zero".to_string(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_meas {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c < u).min(rho.dim() - 1);
        let w = obs.weight(idx);
        sum += w;
        sum_sq += w * w;
    }
    let n = n_meas as f64;
    let mean = sum / n;
    let variance = if n_meas > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SampleStats {
        mean,
        std_error: (variance / n).sqrt(),
    })
}
