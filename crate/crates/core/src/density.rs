//! Density-matrix states and diagonal observables.

use num_complex::Complex64;

use crate::circuit::Gate;
use crate::error::{Result, ZneError};
use crate::matrix::CMatrix;

/// Density matrix over `n` qubits; qubit 0 is the most significant bit of
/// a basis-state label.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Pure computational-basis state `|label><label|`.
    pub fn basis_state(num_qubits: usize, label: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(ZneError::EmptyRegister);
        }
        let dim = 1usize << num_qubits;
        if label >= dim {
            return Err(ZneError::BasisStateOutOfRange { state: label, dim });
        }
        let mut mat = CMatrix::zeros(dim);
        mat[(label, label)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { num_qubits, mat })
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(ZneError::EmptyRegister);
        }
        let dim = 1usize << num_qubits;
        let mat = CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(DensityMatrix { num_qubits, mat })
    }

    pub fn from_matrix(num_qubits: usize, mat: CMatrix) -> Result<Self> {
        if mat.dim() != 1 << num_qubits {
            return Err(ZneError::DimensionMismatch(format!(
                "matrix dim {} does not match {num_qubits} qubits",
                mat.dim()
            )));
        }
        Ok(DensityMatrix { num_qubits, mat })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Diagonal element (population) of basis state `label`.
    pub fn population(&self, label: usize) -> f64 {
        self.mat[(label, label)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.population(i)).collect()
    }

    /// Smallest eigenvalue; a valid state has this above a small negative
    /// round-off floor.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat.eigenvalues_hermitian()[0]
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst / 2.0
    }

    /// Check trace-one, Hermiticity and positive semi-definiteness within
    /// the given tolerances.
    pub fn validate(&self, tol: f64, eig_floor: f64) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(ZneError::InvalidChannel(format!(
                "state trace {tr} deviates from 1"
            )));
        }
        if self.hermiticity_defect() > tol {
            return Err(ZneError::InvalidChannel(
                "state is not Hermitian".to_string(),
            ));
        }
        let min = self.min_eigenvalue();
        if min < eig_floor {
            return Err(ZneError::InvalidChannel(format!(
                "state has negative eigenvalue {min}"
            )));
        }
        Ok(())
    }

    /// Conjugate by a single-qubit unitary: `rho -> U rho U^dag`.
    pub(crate) fn apply_single_qubit(&mut self, u: &[[Complex64; 2]; 2], qubit: usize) {
        let d = self.dim();
        let bit = 1usize << (self.num_qubits - 1 - qubit);
        // Left multiply by U.
        for col in 0..d {
            for i in 0..d {
                if i & bit == 0 {
                    let a = self.mat[(i, col)];
                    let b = self.mat[(i | bit, col)];
                    self.mat[(i, col)] = u[0][0] * a + u[0][1] * b;
                    self.mat[(i | bit, col)] = u[1][0] * a + u[1][1] * b;
                }
            }
        }
        // Right multiply by U^dag.
        for row in 0..d {
            for j in 0..d {
                if j & bit == 0 {
                    let a = self.mat[(row, j)];
                    let b = self.mat[(row, j | bit)];
                    self.mat[(row, j)] = a * u[0][0].conj() + b * u[0][1].conj();
                    self.mat[(row, j | bit)] = a * u[1][0].conj() + b * u[1][1].conj();
                }
            }
        }
    }

    /// Apply an ideal gate as a unitary conjugation.
    pub fn apply_gate_unitary(&mut self, gate: &Gate) {
        match *gate {
            Gate::Cnot { control, target } => {
                let cbit = 1usize << (self.num_qubits - 1 - control);
                let tbit = 1usize << (self.num_qubits - 1 - target);
                let d = self.dim();
                let perm: Vec<usize> = (0..d)
                    .map(|i| if i & cbit != 0 { i ^ tbit } else { i })
                    .collect();
                let mut out = CMatrix::zeros(d);
                for i in 0..d {
                    for j in 0..d {
                        out[(perm[i], perm[j])] = self.mat[(i, j)];
                    }
                }
                self.mat = out;
            }
            Gate::CPhase { control, target, angle } => {
                let cbit = 1usize << (self.num_qubits - 1 - control);
                let tbit = 1usize << (self.num_qubits - 1 - target);
                let d = self.dim();
                let phase = Complex64::from_polar(1.0, angle);
                for i in 0..d {
                    for j in 0..d {
                        let pi = i & cbit != 0 && i & tbit != 0;
                        let pj = j & cbit != 0 && j & tbit != 0;
                        match (pi, pj) {
                            (true, false) => self.mat[(i, j)] *= phase,
                            (false, true) => self.mat[(i, j)] *= phase.conj(),
                            _ => {}
                        }
                    }
                }
            }
            ref g => {
                let (q, m) = crate::circuit::single_qubit_matrix(g);
                self.apply_single_qubit(&m, q);
            }
        }
    }
}

/// Diagonal observable: a real weight per computational-basis bitstring.
/// Its expectation on a state is the weight-average of the populations.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    num_qubits: usize,
    weights: Vec<f64>,
}

impl Observable {
    pub fn new(num_qubits: usize, weights: Vec<f64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if weights.len() != dim {
            return Err(ZneError::DimensionMismatch(format!(
                "{} weights for dimension {dim}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(ZneError::InvalidParameter(
                "observable weights must be finite".to_string(),
            ));
        }
        Ok(Observable { num_qubits, weights })
    }

    /// Bitstring read as an unsigned integer (`|11> -> 3`).
    pub fn integer_value(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Observable {
            num_qubits,
            weights: (0..dim).map(|b| b as f64).collect(),
        }
    }

    /// Number of qubits measured in state 1 (`q0 + q1 + ...`).
    pub fn qubit_sum(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Observable {
            num_qubits,
            weights: (0..dim).map(|b: usize| b.count_ones() as f64).collect(),
        }
    }

    /// Projector onto the all-zeros bitstring.
    pub fn zeros_projector(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut weights = vec![0.0; dim];
        weights[0] = 1.0;
        Observable { num_qubits, weights }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, label: usize) -> f64 {
        self.weights[label]
    }
}

/// Expectation value of a diagonal observable: the weight-average over the
/// state's populations.
pub fn expectation(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    if rho.num_qubits() != obs.num_qubits() {
        return Err(ZneError::DimensionMismatch(format!(
            "state has {} qubits, observable has {}",
            rho.num_qubits(),
            obs.num_qubits()
        )));
    }
    Ok((0..rho.dim())
        .map(|b| obs.weight(b) * rho.population(b))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_is_valid() {
        let rho = DensityMatrix::basis_state(2, 2).unwrap();
        assert_eq!(rho.population(2), 1.0);
        rho.validate(1e-12, -1e-10).unwrap();
    }

    #[test]
    fn basis_state_rejects_out_of_range() {
        assert!(DensityMatrix::basis_state(2, 4).is_err());
    }

    #[test]
    fn maximally_mixed_integer_expectation() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let obs = Observable::integer_value(2);
        let val = expectation(&rho, &obs).unwrap();
        assert!((val - 1.5).abs() < 1e-15);
    }

    #[test]
    fn qubit_sum_on_ones_state() {
        let rho = DensityMatrix::basis_state(2, 3).unwrap();
        let obs = Observable::qubit_sum(2);
        assert!((expectation(&rho, &obs).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_dimension_mismatch() {
        let rho = DensityMatrix::basis_state(2, 0).unwrap();
        let obs = Observable::qubit_sum(3);
        assert!(expectation(&rho, &obs).is_err());
    }

    #[test]
    fn observable_rejects_bad_weights() {
        assert!(Observable::new(2, vec![0.0; 3]).is_err());
        assert!(Observable::new(1, vec![f64::NAN, 0.0]).is_err());
    }
}
