//! Small dense complex matrices.
//!
//! Everything in this crate works on registers of at most a handful of
//! qubits, so a plain row-major `Vec<Complex64>` beats any sparse or
//! generic linear-algebra dependency.

use num_complex::Complex64;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = CMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance minimized over a global phase on `other`.
    pub fn distance_up_to_phase(&self, other: &CMatrix) -> f64 {
        let overlap = other.dagger().mul(self).trace();
        let phase = if overlap.norm() > 1e-300 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.sub(&other.scale(phase)).frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for i in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Eigenvalues of a Hermitian matrix via cyclic Jacobi rotations,
    /// returned in ascending order.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        let d = self.dim;
        let mut a = self.clone();
        // Jacobi sweeps converge quadratically; dims here are <= 64.
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..d {
                for q in (p + 1)..d {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / apq.norm();
                    let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                    let c = theta.cos();
                    let s = theta.sin();
                    // Columns: J has J[p][p]=c, J[p][q]=-s*phase, J[q][p]=s*conj(phase), J[q][q]=c.
                    // Apply A <- J^H A J.
                    for k in 0..d {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c + akq * s * phase.conj();
                        a[(k, q)] = -akp * s * phase + akq * c;
                    }
                    for k in 0..d {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c + aqk * s * phase;
                        a[(q, k)] = -apk * s * phase.conj() + aqk * c;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_multiplicative_unit() {
        let id = CMatrix::identity(4);
        let mut m = CMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = Complex64::new((i * 4 + j) as f64, (i + j) as f64);
            }
        }
        assert_eq!(id.mul(&m), m);
        assert_eq!(m.mul(&id), m);
    }

    #[test]
    fn hermitian_eigenvalues_match_known_spectrum() {
        // Pauli X has eigenvalues -1, +1.
        let x = CMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ]);
        let eig = x.eigenvalues_hermitian();
        assert!((eig[0] + 1.0).abs() < 1e-12);
        assert!((eig[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // Pauli Y has eigenvalues -1, +1 and complex entries.
        let y = CMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ]);
        let eig = y.eigenvalues_hermitian();
        assert!((eig[0] + 1.0).abs() < 1e-12);
        assert!((eig[1] - 1.0).abs() < 1e-12);
    }
}
